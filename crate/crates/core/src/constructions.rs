//! Building new pairs and bimodules from old ones: direct sums, semidirect
//! products, induced structures, the commutator Lie pair with its
//! representation, and the passage from Rota-Baxter operators of weight
//! `λ` to modified ones.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::linalg::{add_into, axpy, basis_vector, sub_vectors, zero_vector, Matrix, Vector};
use crate::report::CheckReport;
use crate::scalar::{Field, Scalar};
use crate::structures::{
    check_bimodule, check_commutation, check_derivation, check_mrb, identity, verify_pair, Algebra, Bimodule,
    MrbPair,
};
use crate::tensor::{BasisTuples, MultiTensor};

pub mod lie_identity {
    pub const ANTISYMMETRY: &str = "antisymmetry";
    pub const JACOBI: &str = "Jacobi identity";
    pub const REPRESENTATION: &str = "ρ([a,b]) = [ρ(a),ρ(b)]";
    pub const REP_DERIVATION: &str = "d_M(ρ(a)m) = ρ(da)m + ρ(a)d_M m";
    pub const REP_OPERATOR: &str = "representation operator compatibility";
    pub const RB_IDENTITY: &str = "Rota-Baxter identity";
    pub const RB_BIMODULE_LEFT: &str = "left Rota-Baxter compatibility";
    pub const RB_BIMODULE_RIGHT: &str = "right Rota-Baxter compatibility";
}

fn block_bilinear(
    field: Field,
    n1: usize,
    n2: usize,
    mut entry: impl FnMut(usize, usize) -> Vector,
) -> MultiTensor {
    let n = n1 + n2;
    MultiTensor::from_fn(field, &[n, n], n, |t| entry(t[0], t[1])).expect("small tensor")
}

fn embed(field: Field, total: usize, offset: usize, v: &[Scalar]) -> Vector {
    let mut out = zero_vector(field, total);
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

pub fn direct_sum(p1: &MrbPair, p2: &MrbPair) -> Result<MrbPair> {
    if p1.field() != p2.field() {
        return Err(Error::FieldMismatch("direct sum of pairs over different fields".into()));
    }
    if p1.kappa != p2.kappa {
        return Err(Error::KappaMismatch {
            left: p1.kappa.to_string(),
            right: p2.kappa.to_string(),
        });
    }
    let f = p1.field();
    let (n1, n2) = (p1.dim(), p2.dim());
    let mu = block_bilinear(f, n1, n2, |i, j| {
        if i < n1 && j < n1 {
            embed(f, n1 + n2, 0, p1.algebra.mul_basis(i, j))
        } else if i >= n1 && j >= n1 {
            embed(f, n1 + n2, n1, p2.algebra.mul_basis(i - n1, j - n1))
        } else {
            zero_vector(f, n1 + n2)
        }
    });
    MrbPair::new(
        Algebra::new(mu)?,
        p1.r.block_diag(&p2.r),
        p1.d.block_diag(&p2.d),
        p1.kappa.clone(),
    )
}

/// `A ⋉ M` with coordinates `(a | m)`; errors when the bimodule is invalid.
pub fn semidirect_product(pair: &MrbPair, bim: &Bimodule) -> Result<MrbPair> {
    let report = check_bimodule(pair, bim)?;
    if !report.passed() {
        return Err(Error::Invalid { what: "bimodule", report });
    }
    Ok(semidirect_unchecked(pair, bim, None))
}

/// The twisted product `μ(a,b) + l(a,n) + r(m,b) + θ(a,b)` on `A ⊕ M`.
pub(crate) fn semidirect_unchecked(pair: &MrbPair, bim: &Bimodule, theta: Option<&MultiTensor>) -> MrbPair {
    let f = pair.field();
    let (n, m) = (pair.dim(), bim.dim());
    let mu = block_bilinear(f, n, m, |i, j| match (i < n, j < n) {
        (true, true) => {
            let mut v = embed(f, n + m, 0, pair.algebra.mul_basis(i, j));
            if let Some(t) = theta {
                add_into(&mut v[n..], t.value(&[i, j]));
            }
            v
        }
        (true, false) => embed(f, n + m, n, bim.left.value(&[i, j - n])),
        (false, true) => embed(f, n + m, n, bim.right.value(&[i - n, j])),
        (false, false) => zero_vector(f, n + m),
    });
    MrbPair {
        algebra: Algebra::new(mu).expect("square shape"),
        r: pair.r.block_diag(&bim.r_m),
        d: pair.d.block_diag(&bim.d_m),
        kappa: pair.kappa.clone(),
    }
}

/// Projection `A ⊕ M → A`.
pub fn split_projection(field: Field, n: usize, m: usize) -> Matrix {
    Matrix::identity(field, n).hstack(&Matrix::zeros(field, n, m))
}

/// Inclusion `M → A ⊕ M`.
pub fn split_inclusion(field: Field, n: usize, m: usize) -> Matrix {
    Matrix::zeros(field, n, m).vstack(&Matrix::identity(field, m))
}

/// `μ_R(a,b) = μ(Ra,b) + μ(a,Rb)` with the same `R`, `d`, `κ`.
pub fn induced_algebra(pair: &MrbPair) -> MrbPair {
    MrbPair {
        algebra: Algebra::new(induced_product(pair.algebra.mu(), &pair.r)).expect("square shape"),
        r: pair.r.clone(),
        d: pair.d.clone(),
        kappa: pair.kappa.clone(),
    }
}

fn induced_product(mu: &MultiTensor, r: &Matrix) -> MultiTensor {
    let n = mu.cod();
    MultiTensor::from_fn(mu.field(), &[n, n], n, |t| {
        let a = basis_vector(mu.field(), n, t[0]);
        let b = basis_vector(mu.field(), n, t[1]);
        let mut v = mu.apply(&[&r.apply(&a), &b]);
        add_into(&mut v, &mu.apply(&[&a, &r.apply(&b)]));
        v
    })
    .expect("small tensor")
}

/// `l̃(a,m) = l(Ra,m) - R_M l(a,m)`, `r̃(m,a) = r(m,Ra) - R_M r(m,a)`.
pub fn induced_bimodule(pair: &MrbPair, bim: &Bimodule) -> Bimodule {
    let f = pair.field();
    let (n, m) = (pair.dim(), bim.dim());
    let left = MultiTensor::from_fn(f, &[n, m], m, |t| {
        let a = basis_vector(f, n, t[0]);
        let x = basis_vector(f, m, t[1]);
        sub_vectors(&bim.act_left(&pair.r.apply(&a), &x), &bim.r_m.apply(&bim.act_left(&a, &x)))
    })
    .expect("small tensor");
    let right = MultiTensor::from_fn(f, &[m, n], m, |t| {
        let x = basis_vector(f, m, t[0]);
        let a = basis_vector(f, n, t[1]);
        sub_vectors(&bim.act_right(&x, &pair.r.apply(&a)), &bim.r_m.apply(&bim.act_right(&x, &a)))
    })
    .expect("small tensor");
    Bimodule {
        left,
        right,
        r_m: bim.r_m.clone(),
        d_m: bim.d_m.clone(),
    }
}

/// A representation `ρ : A × M → M` of a Lie pair together with `R_M`, `d_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieRepresentation {
    pub rho: MultiTensor,
    pub r_m: Matrix,
    pub d_m: Matrix,
}

impl LieRepresentation {
    pub fn dim(&self) -> usize {
        self.rho.cod()
    }

    pub fn act(&self, a: &[Scalar], m: &[Scalar]) -> Vector {
        self.rho.apply(&[a, m])
    }
}

/// A modified Rota-Baxter Lie algebra with a derivation, optionally with a
/// representation attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePair {
    pub bracket: MultiTensor,
    pub r: Matrix,
    pub d: Matrix,
    pub kappa: Scalar,
    pub rep: Option<LieRepresentation>,
}

impl LiePair {
    pub fn field(&self) -> Field {
        self.bracket.field()
    }

    pub fn dim(&self) -> usize {
        self.bracket.cod()
    }

    pub fn bracket(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        self.bracket.apply(&[a, b])
    }

    /// `[a,b]_R = [Ra,b] + [a,Rb]` with `ρ̃(a) = ρ(Ra) - R_M ρ(a)`.
    pub fn induced(&self) -> LiePair {
        let f = self.field();
        let n = self.dim();
        let rep = self.rep.as_ref().map(|rep| {
            let m = rep.dim();
            let rho = MultiTensor::from_fn(f, &[n, m], m, |t| {
                let a = basis_vector(f, n, t[0]);
                let x = basis_vector(f, m, t[1]);
                sub_vectors(&rep.act(&self.r.apply(&a), &x), &rep.r_m.apply(&rep.act(&a, &x)))
            })
            .expect("small tensor");
            LieRepresentation {
                rho,
                r_m: rep.r_m.clone(),
                d_m: rep.d_m.clone(),
            }
        });
        LiePair {
            bracket: induced_product(&self.bracket, &self.r),
            r: self.r.clone(),
            d: self.d.clone(),
            kappa: self.kappa.clone(),
            rep,
        }
    }

    fn as_algebra(&self) -> Algebra {
        Algebra::new(self.bracket.clone()).expect("square shape")
    }
}

/// Antisymmetry, Jacobi, the modified Rota-Baxter identity for the bracket,
/// the derivation rule and `R∘d = d∘R`, followed by the representation
/// identities when one is attached.
pub fn check_lie_pair(lie: &LiePair) -> CheckReport {
    let f = lie.field();
    let n = lie.dim();
    let e = |i: usize| basis_vector(f, n, i);
    let mut report = CheckReport::pass();
    for t in BasisTuples::uniform(n, 2) {
        let mut v = lie.bracket.value(&[t[0], t[1]]).to_vec();
        if t[0] != t[1] {
            add_into(&mut v, lie.bracket.value(&[t[1], t[0]]));
        }
        report.record(lie_identity::ANTISYMMETRY, &t, v);
    }
    for t in BasisTuples::uniform(n, 3) {
        let (a, b, c) = (e(t[0]), e(t[1]), e(t[2]));
        let mut v = lie.bracket(&a, &lie.bracket(&b, &c));
        add_into(&mut v, &lie.bracket(&b, &lie.bracket(&c, &a)));
        add_into(&mut v, &lie.bracket(&c, &lie.bracket(&a, &b)));
        report.record(lie_identity::JACOBI, &t, v);
    }
    let alg = lie.as_algebra();
    report.merge(check_mrb(&alg, &lie.r, &lie.kappa));
    report.merge(check_derivation(&alg, &lie.d));
    report.merge(check_commutation(&lie.r, &lie.d));
    if let Some(rep) = &lie.rep {
        report.merge(check_lie_representation(lie, rep));
    }
    report
}

pub fn check_lie_representation(lie: &LiePair, rep: &LieRepresentation) -> CheckReport {
    let f = lie.field();
    let (n, m) = (lie.dim(), rep.dim());
    let e = |i: usize| basis_vector(f, n, i);
    let x = |i: usize| basis_vector(f, m, i);
    let mut report = CheckReport::pass();
    for t in BasisTuples::new(&[n, n, m]) {
        let (a, b, v) = (e(t[0]), e(t[1]), x(t[2]));
        let lhs = rep.act(&lie.bracket(&a, &b), &v);
        let rhs = sub_vectors(&rep.act(&a, &rep.act(&b, &v)), &rep.act(&b, &rep.act(&a, &v)));
        report.record(lie_identity::REPRESENTATION, &t, sub_vectors(&lhs, &rhs));
    }
    for t in BasisTuples::new(&[n, m]) {
        let (a, v) = (e(t[0]), x(t[1]));
        let lhs = rep.d_m.apply(&rep.act(&a, &v));
        let mut rhs = rep.act(&lie.d.apply(&a), &v);
        add_into(&mut rhs, &rep.act(&a, &rep.d_m.apply(&v)));
        report.record(lie_identity::REP_DERIVATION, &t, sub_vectors(&lhs, &rhs));

        let (ra, rv) = (lie.r.apply(&a), rep.r_m.apply(&v));
        let lhs = rep.act(&ra, &rv);
        let mut inner = rep.act(&a, &rv);
        add_into(&mut inner, &rep.act(&ra, &v));
        let mut rhs = rep.r_m.apply(&inner);
        axpy(&mut rhs, &lie.kappa, &rep.act(&a, &v));
        report.record(lie_identity::REP_OPERATOR, &t, sub_vectors(&lhs, &rhs));
    }
    let diff = rep.r_m.mul(&rep.d_m).sub(&rep.d_m.mul(&rep.r_m));
    for j in 0..m {
        report.record(identity::MODULE_COMMUTATION, &[j], diff.column(j));
    }
    report
}

/// `[a,b]_C = μ(a,b) - μ(b,a)` with `R`, `d`, `κ` carried over.
pub fn commutator_lie_pair(pair: &MrbPair) -> LiePair {
    let n = pair.dim();
    let mu = pair.algebra.mu();
    let bracket = MultiTensor::from_fn(pair.field(), &[n, n], n, |t| {
        sub_vectors(mu.value(&[t[0], t[1]]), mu.value(&[t[1], t[0]]))
    })
    .expect("small tensor");
    LiePair {
        bracket,
        r: pair.r.clone(),
        d: pair.d.clone(),
        kappa: pair.kappa.clone(),
        rep: None,
    }
}

/// The commutator Lie pair with `ρ(a)m = l(a,m) - r(m,a)` attached.
pub fn rho_representation(pair: &MrbPair, bim: &Bimodule) -> Result<LiePair> {
    bim.check_shape(pair)?;
    let (n, m) = (pair.dim(), bim.dim());
    let rho = MultiTensor::from_fn(pair.field(), &[n, m], m, |t| {
        sub_vectors(bim.left.value(&[t[0], t[1]]), bim.right.value(&[t[1], t[0]]))
    })
    .expect("small tensor");
    let mut lie = commutator_lie_pair(pair);
    lie.rep = Some(LieRepresentation {
        rho,
        r_m: bim.r_m.clone(),
        d_m: bim.d_m.clone(),
    });
    Ok(lie)
}

/// `μ(Pa,Pb) = P(μ(Pa,b) + μ(a,Pb)) + λ P(μ(a,b))` on basis pairs.
pub fn check_rota_baxter(alg: &Algebra, p: &Matrix, lambda: &Scalar) -> CheckReport {
    let mut report = CheckReport::pass();
    for t in BasisTuples::uniform(alg.dim(), 2) {
        let (a, b) = (alg.basis(t[0]), alg.basis(t[1]));
        let (pa, pb) = (p.apply(&a), p.apply(&b));
        let lhs = alg.mul(&pa, &pb);
        let mut inner = alg.mul(&pa, &b);
        add_into(&mut inner, &alg.mul(&a, &pb));
        axpy(&mut inner, lambda, &alg.mul(&a, &b));
        report.record(lie_identity::RB_IDENTITY, &t, sub_vectors(&lhs, &p.apply(&inner)));
    }
    report
}

/// `R = λ·Id + 2P` is modified Rota-Baxter of weight `-λ²` whenever `P` is
/// Rota-Baxter of weight `λ`.
pub fn rb_to_mrb(alg: &Algebra, p: &Matrix, lambda: &Scalar, d: &Matrix) -> Result<MrbPair> {
    let n = alg.dim();
    if p.rows() != n || p.cols() != n {
        return Err(Error::shape("P must be square of the algebra's dimension"));
    }
    let mut report = check_rota_baxter(alg, p, lambda);
    report.merge(check_derivation(alg, d));
    report.merge(check_commutation(p, d));
    if !report.passed() {
        return Err(Error::Invalid {
            what: "Rota-Baxter pair",
            report,
        });
    }
    let f = alg.field();
    let r = Matrix::scalar(f, n, lambda).add(&p.scale(&f.int(2)));
    let pair = MrbPair::new(alg.clone(), r, d.clone(), -(lambda * lambda))?;
    debug_assert!(verify_pair(&pair).passed());
    Ok(pair)
}

/// Converts a Rota-Baxter bimodule `(M, l, r, T_M, d_M)` of weight `λ` over
/// `(A, P)`; `bim.r_m` is ignored and replaced by `λ·Id + 2T_M`. The result
/// is checked against the converted pair.
pub fn bimodule_rb_to_mrb(
    alg: &Algebra,
    p: &Matrix,
    lambda: &Scalar,
    d: &Matrix,
    bim: &Bimodule,
    t_m: &Matrix,
) -> Result<Bimodule> {
    let pair = rb_to_mrb(alg, p, lambda, d)?;
    let f = alg.field();
    let (n, m) = (alg.dim(), bim.dim());
    if t_m.rows() != m || t_m.cols() != m {
        return Err(Error::shape("T_M must be square of the module's dimension"));
    }
    let mut report = CheckReport::pass();
    for t in BasisTuples::new(&[n, m]) {
        let a = basis_vector(f, n, t[0]);
        let x = basis_vector(f, m, t[1]);
        let (pa, tx) = (p.apply(&a), t_m.apply(&x));
        let mut inner = bim.act_left(&pa, &x);
        add_into(&mut inner, &bim.act_left(&a, &tx));
        axpy(&mut inner, lambda, &bim.act_left(&a, &x));
        report.record(
            lie_identity::RB_BIMODULE_LEFT,
            &t,
            sub_vectors(&bim.act_left(&pa, &tx), &t_m.apply(&inner)),
        );
        let mut inner = bim.act_right(&tx, &a);
        add_into(&mut inner, &bim.act_right(&x, &pa));
        axpy(&mut inner, lambda, &bim.act_right(&x, &a));
        report.record(
            lie_identity::RB_BIMODULE_RIGHT,
            &[t[1], t[0]],
            sub_vectors(&bim.act_right(&tx, &pa), &t_m.apply(&inner)),
        );
    }
    if !report.passed() {
        return Err(Error::Invalid {
            what: "Rota-Baxter bimodule",
            report,
        });
    }
    let converted = Bimodule {
        left: bim.left.clone(),
        right: bim.right.clone(),
        r_m: Matrix::scalar(f, m, lambda).add(&t_m.scale(&f.int(2))),
        d_m: bim.d_m.clone(),
    };
    let report = check_bimodule(&pair, &converted)?;
    if !report.passed() {
        return Err(Error::Invalid { what: "bimodule", report });
    }
    Ok(converted)
}
