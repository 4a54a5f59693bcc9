//! Algebras, modified Rota-Baxter pairs with derivations, their bimodules,
//! and exhaustive checkers for every defining identity.
//!
//! All identities are multilinear, so checking them on basis tuples is
//! complete. Each checker returns a [`CheckReport`] listing every failing
//! tuple with its residual (left side minus right side).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, sub_vectors, Matrix, Vector};
use crate::report::CheckReport;
use crate::scalar::{Field, Scalar};
use crate::tensor::{BasisTuples, MultiTensor};

pub mod identity {
    pub const ASSOCIATIVITY: &str = "associativity";
    pub const MODIFIED_RB: &str = "modified Rota-Baxter identity";
    pub const DERIVATION: &str = "derivation rule";
    pub const COMMUTATION: &str = "R∘d = d∘R";
    pub const LEFT_ASSOC: &str = "l(ab,m) = l(a,l(b,m))";
    pub const MIDDLE_ASSOC: &str = "l(a,r(m,b)) = r(l(a,m),b)";
    pub const RIGHT_ASSOC: &str = "r(m,ab) = r(r(m,a),b)";
    pub const LEFT_OPERATOR: &str = "left operator compatibility";
    pub const RIGHT_OPERATOR: &str = "right operator compatibility";
    pub const LEFT_DERIVATION: &str = "left derivation compatibility";
    pub const RIGHT_DERIVATION: &str = "right derivation compatibility";
    pub const MODULE_COMMUTATION: &str = "R_M∘d_M = d_M∘R_M";
    pub const HOMOMORPHISM: &str = "multiplicativity";
    pub const HOM_OPERATOR: &str = "f∘R1 = R2∘f";
    pub const HOM_DERIVATION: &str = "f∘d1 = d2∘f";
}

/// A finite-dimensional algebra given by structure constants
/// `e_i e_j = Σ_k c_ij^k e_k`. Associativity is checked, not assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    mu: MultiTensor,
}

impl Algebra {
    pub fn new(mu: MultiTensor) -> Result<Algebra> {
        let n = mu.cod();
        mu.check_shape(&[n, n], n, "multiplication")?;
        Ok(Algebra { mu })
    }

    pub fn zero(field: Field, dim: usize) -> Algebra {
        Algebra {
            mu: MultiTensor::cochain(field, 2, dim, dim).expect("small algebra"),
        }
    }

    /// Builds an algebra from `(i, j, coefficients of e_i e_j)` triples;
    /// unlisted products vanish.
    pub fn from_table(field: Field, dim: usize, table: &[(usize, usize, &[i64])]) -> Algebra {
        let mut alg = Algebra::zero(field, dim);
        for (i, j, coeffs) in table {
            assert_eq!(coeffs.len(), dim);
            let v: Vector = coeffs.iter().map(|c| field.int(*c)).collect();
            alg.mu.value_mut(&[*i, *j]).clone_from_slice(&v);
        }
        alg
    }

    pub fn field(&self) -> Field {
        self.mu.field()
    }

    pub fn dim(&self) -> usize {
        self.mu.cod()
    }

    pub fn mu(&self) -> &MultiTensor {
        &self.mu
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.mu.apply(&[a, b])
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[Scalar] {
        self.mu.value(&[i, j])
    }

    pub fn basis(&self, i: usize) -> Vector {
        basis_vector(self.field(), self.dim(), i)
    }

    pub fn is_commutative(&self) -> bool {
        BasisTuples::uniform(self.dim(), 2).all(|t| self.mu.value(&[t[0], t[1]]) == self.mu.value(&[t[1], t[0]]))
    }

    /// Structure constants in the basis given by the columns of `g`.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> Algebra {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| g.column(j)).collect();
        let mu = MultiTensor::from_fn(self.field(), &[n, n], n, |t| g_inv.apply(&self.mul(&cols[t[0]], &cols[t[1]])))
            .expect("same size");
        Algebra { mu }
    }
}

/// `(A, μ, R, d)` together with the weight `κ` of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrbPair {
    pub algebra: Algebra,
    pub r: Matrix,
    pub d: Matrix,
    pub kappa: Scalar,
}

impl MrbPair {
    pub fn new(algebra: Algebra, r: Matrix, d: Matrix, kappa: Scalar) -> Result<MrbPair> {
        let n = algebra.dim();
        for (name, m) in [("R", &r), ("d", &d)] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::shape(alloc::format!(
                    "{name} is {}x{}, algebra has dimension {n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if kappa.field() != algebra.field() || r.field() != algebra.field() || d.field() != algebra.field() {
            return Err(Error::FieldMismatch("pair components over different fields".into()));
        }
        Ok(MrbPair { algebra, r, d, kappa })
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.algebra.mul(a, b)
    }

    pub fn conjugate(&self, g: &Matrix) -> Option<MrbPair> {
        let g_inv = g.inverse()?;
        Some(MrbPair {
            algebra: self.algebra.conjugate(g, &g_inv),
            r: g_inv.mul(&self.r).mul(g),
            d: g_inv.mul(&self.d).mul(g),
            kappa: self.kappa.clone(),
        })
    }
}

/// A bimodule `(M, l, r, R_M, d_M)` over a pair of dimension `n`:
/// `l : A × M → M`, `r : M × A → M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub left: MultiTensor,
    pub right: MultiTensor,
    pub r_m: Matrix,
    pub d_m: Matrix,
}

impl Bimodule {
    pub fn new(left: MultiTensor, right: MultiTensor, r_m: Matrix, d_m: Matrix) -> Result<Bimodule> {
        let m = left.cod();
        let n = left.shape().first().copied().unwrap_or(0);
        left.check_shape(&[n, m], m, "left action")?;
        right.check_shape(&[m, n], m, "right action")?;
        for (name, x) in [("R_M", &r_m), ("d_M", &d_m)] {
            if x.rows() != m || x.cols() != m {
                return Err(Error::shape(alloc::format!("{name} must be {m}x{m}")));
            }
        }
        Ok(Bimodule { left, right, r_m, d_m })
    }

    /// All structure maps zero.
    pub fn zero(field: Field, n: usize, m: usize) -> Bimodule {
        Bimodule {
            left: MultiTensor::zeros(field, &[n, m], m).expect("small"),
            right: MultiTensor::zeros(field, &[m, n], m).expect("small"),
            r_m: Matrix::zeros(field, m, m),
            d_m: Matrix::zeros(field, m, m),
        }
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }

    pub fn dim(&self) -> usize {
        self.left.cod()
    }

    pub fn base_dim(&self) -> usize {
        self.left.shape()[0]
    }

    pub fn act_left(&self, a: &[Scalar], m: &[Scalar]) -> Vector {
        self.left.apply(&[a, m])
    }

    pub fn act_right(&self, m: &[Scalar], a: &[Scalar]) -> Vector {
        self.right.apply(&[m, a])
    }

    pub fn check_shape(&self, pair: &MrbPair) -> Result<()> {
        if self.base_dim() != pair.dim() {
            return Err(Error::shape(alloc::format!(
                "bimodule over a {}-dimensional algebra, pair has dimension {}",
                self.base_dim(),
                pair.dim()
            )));
        }
        if self.field() != pair.field() {
            return Err(Error::FieldMismatch("bimodule and pair".into()));
        }
        Ok(())
    }

    /// Rewrites the bimodule in new bases: columns of `g` for `A`, of `h` for `M`.
    pub fn conjugate(&self, g: &Matrix, h: &Matrix) -> Option<Bimodule> {
        let h_inv = h.inverse()?;
        let (n, m) = (self.base_dim(), self.dim());
        let f = self.field();
        let ga: Vec<Vector> = (0..n).map(|j| g.column(j)).collect();
        let hm: Vec<Vector> = (0..m).map(|j| h.column(j)).collect();
        let left = MultiTensor::from_fn(f, &[n, m], m, |t| h_inv.apply(&self.act_left(&ga[t[0]], &hm[t[1]]))).ok()?;
        let right = MultiTensor::from_fn(f, &[m, n], m, |t| h_inv.apply(&self.act_right(&hm[t[0]], &ga[t[1]]))).ok()?;
        Some(Bimodule {
            left,
            right,
            r_m: h_inv.mul(&self.r_m).mul(h),
            d_m: h_inv.mul(&self.d_m).mul(h),
        })
    }
}

pub fn check_associativity(alg: &Algebra) -> CheckReport {
    let mut report = CheckReport::pass();
    let n = alg.dim();
    for t in BasisTuples::uniform(n, 3) {
        let (a, b, c) = (alg.basis(t[0]), alg.basis(t[1]), alg.basis(t[2]));
        let lhs = alg.mul(&alg.mul(&a, &b), &c);
        let rhs = alg.mul(&a, &alg.mul(&b, &c));
        report.record(identity::ASSOCIATIVITY, &t, sub_vectors(&lhs, &rhs));
    }
    report
}

/// `μ(Ra, Rb) = R(μ(Ra, b) + μ(a, Rb)) + κ μ(a, b)` on basis pairs.
pub fn check_mrb(alg: &Algebra, r: &Matrix, kappa: &Scalar) -> CheckReport {
    let mut report = CheckReport::pass();
    for t in BasisTuples::uniform(alg.dim(), 2) {
        let (a, b) = (alg.basis(t[0]), alg.basis(t[1]));
        let (ra, rb) = (r.apply(&a), r.apply(&b));
        let lhs = alg.mul(&ra, &rb);
        let mut inner = alg.mul(&ra, &b);
        crate::linalg::add_into(&mut inner, &alg.mul(&a, &rb));
        let mut rhs = r.apply(&inner);
        crate::linalg::axpy(&mut rhs, kappa, &alg.mul(&a, &b));
        report.record(identity::MODIFIED_RB, &t, sub_vectors(&lhs, &rhs));
    }
    report
}

/// `d(ab) = d(a) b + a d(b)` on basis pairs.
pub fn check_derivation(alg: &Algebra, d: &Matrix) -> CheckReport {
    let mut report = CheckReport::pass();
    for t in BasisTuples::uniform(alg.dim(), 2) {
        let (a, b) = (alg.basis(t[0]), alg.basis(t[1]));
        let lhs = d.apply(&alg.mul(&a, &b));
        let mut rhs = alg.mul(&d.apply(&a), &b);
        crate::linalg::add_into(&mut rhs, &alg.mul(&a, &d.apply(&b)));
        report.record(identity::DERIVATION, &t, sub_vectors(&lhs, &rhs));
    }
    report
}

/// `R∘d = d∘R`, reported column by column.
pub fn check_commutation(r: &Matrix, d: &Matrix) -> CheckReport {
    commutator_report(r, d, identity::COMMUTATION)
}

fn commutator_report(x: &Matrix, y: &Matrix, name: &str) -> CheckReport {
    let mut report = CheckReport::pass();
    let diff = x.mul(y).sub(&y.mul(x));
    for j in 0..diff.cols() {
        report.record(name, &[j], diff.column(j));
    }
    report
}

/// All four pair axioms; the report lists failures in the order
/// associativity, modified Rota-Baxter, derivation, commutation.
pub fn verify_pair(pair: &MrbPair) -> CheckReport {
    let mut report = check_associativity(&pair.algebra);
    report.merge(check_mrb(&pair.algebra, &pair.r, &pair.kappa));
    report.merge(check_derivation(&pair.algebra, &pair.d));
    report.merge(check_commutation(&pair.r, &pair.d));
    report
}

/// The eight bimodule identities: three associativity axioms, the two
/// operator compatibilities (with `κ l(a,m)` and `κ r(m,a)` weight terms),
/// the two derivation compatibilities and `R_M∘d_M = d_M∘R_M`.
pub fn check_bimodule(pair: &MrbPair, bim: &Bimodule) -> Result<CheckReport> {
    bim.check_shape(pair)?;
    let f = pair.field();
    let (n, m) = (pair.dim(), bim.dim());
    let a_basis = |i: usize| basis_vector(f, n, i);
    let m_basis = |i: usize| basis_vector(f, m, i);
    let (r, d, rm, dm, kappa) = (&pair.r, &pair.d, &bim.r_m, &bim.d_m, &pair.kappa);
    let mut report = CheckReport::pass();

    for t in BasisTuples::new(&[n, n, m]) {
        let (a, b, x) = (a_basis(t[0]), a_basis(t[1]), m_basis(t[2]));
        let lhs = bim.act_left(&pair.mul(&a, &b), &x);
        let rhs = bim.act_left(&a, &bim.act_left(&b, &x));
        report.record(identity::LEFT_ASSOC, &t, sub_vectors(&lhs, &rhs));
    }
    for t in BasisTuples::new(&[n, m, n]) {
        let (a, x, b) = (a_basis(t[0]), m_basis(t[1]), a_basis(t[2]));
        let lhs = bim.act_left(&a, &bim.act_right(&x, &b));
        let rhs = bim.act_right(&bim.act_left(&a, &x), &b);
        report.record(identity::MIDDLE_ASSOC, &t, sub_vectors(&lhs, &rhs));
    }
    for t in BasisTuples::new(&[m, n, n]) {
        let (x, a, b) = (m_basis(t[0]), a_basis(t[1]), a_basis(t[2]));
        let lhs = bim.act_right(&x, &pair.mul(&a, &b));
        let rhs = bim.act_right(&bim.act_right(&x, &a), &b);
        report.record(identity::RIGHT_ASSOC, &t, sub_vectors(&lhs, &rhs));
    }
    for t in BasisTuples::new(&[n, m]) {
        let (a, x) = (a_basis(t[0]), m_basis(t[1]));
        let (ra, rx) = (r.apply(&a), rm.apply(&x));
        // l(Ra, R_M m) = R_M(l(Ra, m) + l(a, R_M m)) + κ l(a, m)
        let lhs = bim.act_left(&ra, &rx);
        let mut inner = bim.act_left(&ra, &x);
        crate::linalg::add_into(&mut inner, &bim.act_left(&a, &rx));
        let mut rhs = rm.apply(&inner);
        crate::linalg::axpy(&mut rhs, kappa, &bim.act_left(&a, &x));
        report.record(identity::LEFT_OPERATOR, &t, sub_vectors(&lhs, &rhs));

        // r(R_M m, Ra) = R_M(r(R_M m, a) + r(m, Ra)) + κ r(m, a)
        let lhs = bim.act_right(&rx, &ra);
        let mut inner = bim.act_right(&rx, &a);
        crate::linalg::add_into(&mut inner, &bim.act_right(&x, &ra));
        let mut rhs = rm.apply(&inner);
        crate::linalg::axpy(&mut rhs, kappa, &bim.act_right(&x, &a));
        report.record(identity::RIGHT_OPERATOR, &[t[1], t[0]], sub_vectors(&lhs, &rhs));

        // d_M(l(a, m)) = l(da, m) + l(a, d_M m)
        let lhs = dm.apply(&bim.act_left(&a, &x));
        let mut rhs = bim.act_left(&d.apply(&a), &x);
        crate::linalg::add_into(&mut rhs, &bim.act_left(&a, &dm.apply(&x)));
        report.record(identity::LEFT_DERIVATION, &t, sub_vectors(&lhs, &rhs));

        // d_M(r(m, a)) = r(d_M m, a) + r(m, da)
        let lhs = dm.apply(&bim.act_right(&x, &a));
        let mut rhs = bim.act_right(&dm.apply(&x), &a);
        crate::linalg::add_into(&mut rhs, &bim.act_right(&x, &d.apply(&a)));
        report.record(identity::RIGHT_DERIVATION, &[t[1], t[0]], sub_vectors(&lhs, &rhs));
    }
    report.merge(commutator_report(rm, dm, identity::MODULE_COMMUTATION));
    Ok(report)
}

/// `M = A`, `l = r = μ`, `R_M = R`, `d_M = d`.
pub fn adjoint_bimodule(pair: &MrbPair) -> Bimodule {
    Bimodule {
        left: pair.algebra.mu().clone(),
        right: pair.algebra.mu().clone(),
        r_m: pair.r.clone(),
        d_m: pair.d.clone(),
    }
}

/// Whether `f : A1 → A2` is a homomorphism of pairs.
pub fn check_homomorphism(f: &Matrix, from: &MrbPair, to: &MrbPair) -> Result<CheckReport> {
    if f.cols() != from.dim() || f.rows() != to.dim() {
        return Err(Error::shape("homomorphism matrix does not match the pairs"));
    }
    let mut report = CheckReport::pass();
    for t in BasisTuples::uniform(from.dim(), 2) {
        let (a, b) = (from.algebra.basis(t[0]), from.algebra.basis(t[1]));
        let lhs = f.apply(&from.mul(&a, &b));
        let rhs = to.mul(&f.apply(&a), &f.apply(&b));
        report.record(identity::HOMOMORPHISM, &t, sub_vectors(&lhs, &rhs));
    }
    let diff_r = f.mul(&from.r).sub(&to.r.mul(f));
    let diff_d = f.mul(&from.d).sub(&to.d.mul(f));
    for j in 0..from.dim() {
        report.record(identity::HOM_OPERATOR, &[j], diff_r.column(j));
        report.record(identity::HOM_DERIVATION, &[j], diff_d.column(j));
    }
    Ok(report)
}

/// Named fixtures used across tests, docs and the CLI.
pub mod fixtures {
    use super::*;

    /// One-dimensional zero algebra with `R = d = 0`, `κ = 0`.
    pub fn fix0(field: Field) -> MrbPair {
        MrbPair {
            algebra: Algebra::zero(field, 1),
            r: Matrix::zeros(field, 1, 1),
            d: Matrix::zeros(field, 1, 1),
            kappa: field.zero(),
        }
    }

    /// Dual numbers `k[x]/(x²)` with basis `(1, x)`.
    pub fn dual_numbers(field: Field) -> Algebra {
        Algebra::from_table(field, 2, &[(0, 0, &[1, 0]), (0, 1, &[0, 1]), (1, 0, &[0, 1])])
    }

    /// `R = λ·Id`, `d = 0`, `κ = -λ²` on any associative algebra.
    pub fn fix_lambda(algebra: Algebra, lambda: &Scalar) -> MrbPair {
        let f = algebra.field();
        let n = algebra.dim();
        MrbPair {
            r: Matrix::scalar(f, n, lambda),
            d: Matrix::zeros(f, n, n),
            kappa: -(lambda * lambda),
            algebra,
        }
    }

    /// Dual numbers with `R = diag(1, -1)`, `d = diag(0, 1)`, `κ = -1`.
    pub fn fixd(field: Field) -> MrbPair {
        MrbPair {
            algebra: dual_numbers(field),
            r: Matrix::diagonal(field, &[1, -1]),
            d: Matrix::diagonal(field, &[0, 1]),
            kappa: field.int(-1),
        }
    }

    /// Upper-triangular 2×2 matrices with basis `(E11, E12, E22)`.
    pub fn upper_triangular(field: Field) -> Algebra {
        Algebra::from_table(
            field,
            3,
            &[
                (0, 0, &[1, 0, 0]),
                (0, 1, &[0, 1, 0]),
                (1, 2, &[0, 1, 0]),
                (2, 2, &[0, 0, 1]),
            ],
        )
    }

    /// Upper-triangular matrices with `R = λ·Id`, `d = 0`, `κ = -λ²`.
    pub fn upper_triangular_pair(field: Field, lambda: i64) -> MrbPair {
        fix_lambda(upper_triangular(field), &field.int(lambda))
    }

}

/// All basis vectors of a space, as a convenience for callers iterating
/// over coordinates.
pub fn basis(field: Field, n: usize) -> Vec<Vector> {
    (0..n).map(|i| basis_vector(field, n, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn fixtures_are_valid() {
        assert!(verify_pair(&fix0(q())).passed());
        assert!(verify_pair(&fixd(q())).passed());
        for l in [0, 1, 2, -3] {
            assert!(verify_pair(&fix_lambda(dual_numbers(q()), &q().int(l))).passed());
            assert!(verify_pair(&upper_triangular_pair(q(), l)).passed());
        }
    }

    #[test]
    fn associativity_failure_is_located() {
        assert!(check_associativity(&dual_numbers(q())).passed());
        // e1 e2 = e1 + e2: (e1 e1) e2 = e1 + e2 but e1 (e1 e2) = 2 e1 + e2
        let mut alg = dual_numbers(q());
        alg.mu.value_mut(&[0, 1])[0] = q().one();
        let report = check_associativity(&alg);
        let v = report.first().unwrap();
        assert_eq!(v.witness, vec![0, 0, 1]);
        assert_eq!(v.residual, vec![q().int(-1), q().zero()]);
        // e2 e2 = e1 gives F[x]/(x² - 1), still associative.
        let mut alg = dual_numbers(q());
        alg.mu.value_mut(&[1, 1])[0] = q().one();
        assert!(check_associativity(&alg).passed());
    }

    #[test]
    fn mrb_failure_when_weight_is_wrong() {
        let mut p = fixd(q());
        p.kappa = q().zero();
        let report = check_mrb(&p.algebra, &p.r, &p.kappa);
        let v = report.first().unwrap();
        assert_eq!(v.witness, vec![0, 0]);
        // μ(Re1,Re1) - R(2 e1) - 0 = e1 - 2 e1 = -e1
        assert_eq!(v.residual, vec![q().int(-1), q().zero()]);
    }

    #[test]
    fn derivation_failure() {
        let alg = dual_numbers(q());
        let report = check_derivation(&alg, &Matrix::diagonal(q(), &[1, 0]));
        let v = report.first().unwrap();
        assert_eq!(v.witness, vec![0, 0]);
        // d(e1 e1) = e1 but d(e1) e1 + e1 d(e1) = 2 e1
        assert_eq!(v.residual, vec![q().int(-1), q().zero()]);
        assert!(check_derivation(&alg, &Matrix::zeros(q(), 2, 2)).passed());
    }

    #[test]
    fn commutation_cases() {
        assert!(check_commutation(&Matrix::diagonal(q(), &[1, 2]), &Matrix::diagonal(q(), &[3, 4])).passed());
        let r = Matrix::from_ints(q(), &[&[0, 1], &[0, 0]]);
        let d = Matrix::from_ints(q(), &[&[1, 0], &[0, 0]]);
        let report = check_commutation(&r, &d);
        // Rd - dR = [[0,-1],[0,0]]
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].witness, vec![1]);
        assert_eq!(report.violations[0].residual, vec![q().int(-1), q().zero()]);
    }

    #[test]
    fn non_mrb_operator_on_dual_numbers() {
        let mut p = fixd(q());
        p.r = Matrix::diagonal(q(), &[1, 0]);
        let report = verify_pair(&p);
        assert_eq!(report.first().unwrap().identity, identity::MODIFIED_RB);
        // R = Id is the λ = 1 instance of R = λ·Id and is valid with κ = -1.
        p.r = Matrix::identity(q(), 2);
        assert!(verify_pair(&p).passed());
    }

    #[test]
    fn adjoint_bimodules_are_valid() {
        for p in [fix0(q()), fixd(q()), fix_lambda(dual_numbers(q()), &q().int(3)), upper_triangular_pair(q(), 2)] {
            assert!(check_bimodule(&p, &adjoint_bimodule(&p)).unwrap().passed());
        }
        assert!(check_bimodule(&fix0(q()), &Bimodule::zero(q(), 1, 1)).unwrap().passed());
    }

    #[test]
    fn zero_module_operator_fails_left_compatibility() {
        // With κ = -1, R_M = Id satisfies both operator identities for any R;
        // R_M = 0 leaves κ l(a, m) unbalanced.
        let p = fixd(q());
        let mut bim = adjoint_bimodule(&p);
        bim.r_m = Matrix::identity(q(), 2);
        assert!(check_bimodule(&p, &bim).unwrap().passed());
        bim.r_m = Matrix::zeros(q(), 2, 2);
        let report = check_bimodule(&p, &bim).unwrap();
        assert!(report.failed_identities().contains(&identity::LEFT_OPERATOR));
        assert!(report
            .violations
            .iter()
            .any(|v| v.identity == identity::LEFT_OPERATOR && v.witness == vec![0, 0]));
    }

    #[test]
    fn bimodule_shape_mismatch() {
        let p = fixd(q());
        assert!(check_bimodule(&p, &Bimodule::zero(q(), 3, 1)).is_err());
    }

    #[test]
    fn basis_change_preserves_validity() {
        let p = fixd(q());
        let g = Matrix::from_ints(q(), &[&[1, 2], &[1, 3]]);
        let pc = p.conjugate(&g).unwrap();
        assert!(verify_pair(&pc).passed());
        let bim = adjoint_bimodule(&p).conjugate(&g, &g).unwrap();
        assert!(check_bimodule(&pc, &bim).unwrap().passed());
    }
}
