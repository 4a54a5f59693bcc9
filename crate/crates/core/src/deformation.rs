//! Truncated one-parameter deformations `μ_t = Σ μ_i tⁱ`, `R_t = Σ R_i tⁱ`,
//! `d_t = Σ d_i tⁱ` of a pair, with the base pair as the order-0 term.
//!
//! All series are jets mod `t^{N+1}`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cohomology::{CochainMrbad, Complex, Differentials};
use crate::error::{Error, Result};
use crate::linalg::{add_into, sub_vectors, zero_vector, Matrix, Vector};
use crate::report::CheckReport;
use crate::structures::MrbPair;
use crate::tensor::{BasisTuples, MultiTensor};

pub const DEFAULT_ORDER: usize = 4;

pub mod family {
    pub const ASSOCIATIVITY: &str = "associativity family";
    pub const MODIFIED_RB: &str = "modified Rota-Baxter family";
    pub const DERIVATION: &str = "derivation family";
    pub const COMMUTATION: &str = "commutation family";
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDeformation {
    pub base: MrbPair,
    /// `μ_1..μ_N`.
    pub mu: Vec<MultiTensor>,
    pub r: Vec<Matrix>,
    pub d: Vec<Matrix>,
}

impl TruncatedDeformation {
    /// All higher coefficients zero.
    pub fn constant(base: &MrbPair, order: usize) -> TruncatedDeformation {
        let f = base.field();
        let n = base.dim();
        TruncatedDeformation {
            base: base.clone(),
            mu: (0..order).map(|_| MultiTensor::cochain(f, 2, n, n).expect("small")).collect(),
            r: (0..order).map(|_| Matrix::zeros(f, n, n)).collect(),
            d: (0..order).map(|_| Matrix::zeros(f, n, n)).collect(),
        }
    }

    pub fn new(base: &MrbPair, mu: Vec<MultiTensor>, r: Vec<Matrix>, d: Vec<Matrix>) -> Result<TruncatedDeformation> {
        let def = TruncatedDeformation {
            base: base.clone(),
            mu,
            r,
            d,
        };
        def.check_shapes()?;
        Ok(def)
    }

    pub fn check_shapes(&self) -> Result<()> {
        let n = self.base.dim();
        if self.mu.len() != self.r.len() || self.mu.len() != self.d.len() {
            return Err(Error::shape("coefficient lists of different lengths"));
        }
        if self.mu.is_empty() {
            return Err(Error::shape("a deformation has order at least 1"));
        }
        for m in &self.mu {
            m.check_shape(&[n, n], n, "product coefficient")?;
        }
        for x in self.r.iter().chain(&self.d) {
            if x.rows() != n || x.cols() != n {
                return Err(Error::shape("operator coefficient has the wrong size"));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.mu.len()
    }

    pub fn mu_coeff(&self, k: usize) -> &MultiTensor {
        if k == 0 {
            self.base.algebra.mu()
        } else {
            &self.mu[k - 1]
        }
    }

    pub fn r_coeff(&self, k: usize) -> &Matrix {
        if k == 0 {
            &self.base.r
        } else {
            &self.r[k - 1]
        }
    }

    pub fn d_coeff(&self, k: usize) -> &Matrix {
        if k == 0 {
            &self.base.d
        } else {
            &self.d[k - 1]
        }
    }

    /// Drops the coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Result<TruncatedDeformation> {
        if order == 0 || order > self.order() {
            return Err(Error::shape(alloc::format!(
                "cannot truncate an order-{} deformation to order {order}",
                self.order()
            )));
        }
        Ok(TruncatedDeformation {
            base: self.base.clone(),
            mu: self.mu[..order].to_vec(),
            r: self.r[..order].to_vec(),
            d: self.d[..order].to_vec(),
        })
    }

    /// The coefficient triple at order `k` as a degree-2 cochain.
    pub fn coefficient_cochain(&self, k: usize) -> CochainMrbad {
        CochainMrbad::degree2(
            self.mu_coeff(k).clone(),
            MultiTensor::from_matrix(self.r_coeff(k)),
            MultiTensor::from_matrix(self.d_coeff(k)),
        )
    }

    /// A first-order deformation with the given degree-2 cochain as its
    /// `t¹` coefficient.
    /// Appends `c = ((μ, R), d)` as the coefficient of `t^{N+1}`.
    pub fn with_next(&self, c: &CochainMrbad) -> Result<TruncatedDeformation> {
        let next = TruncatedDeformation::from_cochain(&self.base, c)?;
        let mut out = self.clone();
        out.mu.extend(next.mu);
        out.r.extend(next.r);
        out.d.extend(next.d);
        Ok(out)
    }

    pub fn from_cochain(base: &MrbPair, c: &CochainMrbad) -> Result<TruncatedDeformation> {
        let g = c.top.g.as_ref().ok_or_else(|| Error::shape("a degree-2 cochain is needed"))?;
        let h = &c.bottom.as_ref().ok_or_else(|| Error::shape("a degree-2 cochain is needed"))?.f;
        TruncatedDeformation::new(
            base,
            alloc::vec![c.top.f.clone()],
            alloc::vec![g.to_matrix()],
            alloc::vec![h.to_matrix()],
        )
    }
}

/// `Id + Σ φ_i tⁱ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransformation {
    /// `φ_1..φ_N`.
    pub phi: Vec<Matrix>,
}

impl GaugeTransformation {
    pub fn identity(field: crate::scalar::Field, dim: usize, order: usize) -> GaugeTransformation {
        GaugeTransformation {
            phi: (0..order).map(|_| Matrix::zeros(field, dim, dim)).collect(),
        }
    }

    /// `Id + ψ t^k`, truncated at `order`.
    pub fn monomial(psi: &Matrix, k: usize, order: usize) -> GaugeTransformation {
        let mut g = GaugeTransformation::identity(psi.field(), psi.rows(), order);
        g.phi[k - 1] = psi.clone();
        g
    }

    pub fn order(&self) -> usize {
        self.phi.len()
    }

    fn dim(&self) -> usize {
        self.phi[0].rows()
    }

    pub fn coeff(&self, k: usize) -> Matrix {
        if k == 0 {
            Matrix::identity(self.phi[0].field(), self.dim())
        } else {
            self.phi[k - 1].clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.phi.iter().all(Matrix::is_zero)
    }

    /// Term-by-term inversion: `ψ_0 = Id`, `ψ_n = -Σ_{k=1..n} φ_k ψ_{n-k}`.
    pub fn inverse(&self) -> GaugeTransformation {
        let mut psi: Vec<Matrix> = alloc::vec![self.coeff(0)];
        for n in 1..=self.order() {
            let mut acc = Matrix::zeros(self.phi[0].field(), self.dim(), self.dim());
            for k in 1..=n {
                acc = acc.sub(&self.coeff(k).mul(&psi[n - k]));
            }
            psi.push(acc);
        }
        GaugeTransformation { phi: psi.split_off(1) }
    }

    /// The series `self ∘ other`; gauging by `self` then by `other` equals
    /// gauging by this composite.
    pub fn then(&self, other: &GaugeTransformation) -> GaugeTransformation {
        let order = self.order().min(other.order());
        let phi = (1..=order)
            .map(|n| {
                let mut acc = Matrix::zeros(self.phi[0].field(), self.dim(), self.dim());
                for i in 0..=n {
                    acc = acc.add(&self.coeff(i).mul(&other.coeff(n - i)));
                }
                acc
            })
            .collect();
        GaugeTransformation { phi }
    }
}

/// Residual reports of the four coefficient families, one per order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationReport {
    pub orders: Vec<CheckReport>,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(CheckReport::passed)
    }

    /// The lowest order with a violation (1-based).
    pub fn first_failing_order(&self) -> Option<usize> {
        self.orders.iter().position(|r| !r.passed()).map(|i| i + 1)
    }
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    BasisTuples::uniform(n + 1, parts)
        .filter(|t| t.iter().sum::<usize>() == n)
        .collect()
}

/// The `tⁿ` coefficients of all four families on all basis tuples.
fn order_terms(def: &TruncatedDeformation, n: usize, sink: &mut dyn FnMut(&'static str, &[usize], Vector)) {
    let f = def.base.field();
    let dim = def.base.dim();
    let e = |i: usize| def.base.algebra.basis(i);
    let mul = |k: usize, a: &[crate::scalar::Scalar], b: &[crate::scalar::Scalar]| def.mu_coeff(k).apply(&[a, b]);
    let two = compositions(n, 2);
    let three = compositions(n, 3);

    for t in BasisTuples::uniform(dim, 3) {
        let (a, b, c) = (e(t[0]), e(t[1]), e(t[2]));
        let mut v = zero_vector(f, dim);
        for p in &two {
            add_into(&mut v, &sub_vectors(&mul(p[0], &mul(p[1], &a, &b), &c), &mul(p[0], &a, &mul(p[1], &b, &c))));
        }
        sink(family::ASSOCIATIVITY, &t, v);
    }
    for t in BasisTuples::uniform(dim, 2) {
        let (a, b) = (e(t[0]), e(t[1]));
        let mut v: Vector = zero_vector(f, dim);
        for p in &three {
            let (ra, rb) = (def.r_coeff(p[1]).apply(&a), def.r_coeff(p[2]).apply(&b));
            add_into(&mut v, &mul(p[0], &ra, &rb));
            let rka = def.r_coeff(p[2]).apply(&a);
            let rkb = def.r_coeff(p[2]).apply(&b);
            let mut inner = mul(p[1], &rka, &b);
            add_into(&mut inner, &mul(p[1], &a, &rkb));
            v = sub_vectors(&v, &def.r_coeff(p[0]).apply(&inner));
        }
        crate::linalg::axpy(&mut v, &-def.base.kappa.clone(), &mul(n, &a, &b));
        sink(family::MODIFIED_RB, &t, v);

        let mut v: Vector = zero_vector(f, dim);
        for p in &two {
            add_into(&mut v, &def.d_coeff(p[0]).apply(&mul(p[1], &a, &b)));
            v = sub_vectors(&v, &mul(p[0], &def.d_coeff(p[1]).apply(&a), &b));
            v = sub_vectors(&v, &mul(p[0], &a, &def.d_coeff(p[1]).apply(&b)));
        }
        sink(family::DERIVATION, &t, v);
    }
    let mut comm = Matrix::zeros(f, dim, dim);
    for p in &two {
        comm = comm
            .add(&def.r_coeff(p[0]).mul(def.d_coeff(p[1])))
            .sub(&def.d_coeff(p[0]).mul(def.r_coeff(p[1])));
    }
    for j in 0..dim {
        sink(family::COMMUTATION, &[j], comm.column(j));
    }
}

/// Residuals of the order-`n` equations; passes iff every one vanishes.
pub fn order_report(def: &TruncatedDeformation, n: usize) -> CheckReport {
    let mut report = CheckReport::pass();
    order_terms(def, n, &mut |id, w, v| report.record(id, w, v));
    report
}

/// All order-`n` residuals concatenated, zeros included.
pub fn order_residuals(def: &TruncatedDeformation, n: usize) -> Vector {
    let mut out = Vec::new();
    order_terms(def, n, &mut |_, _, v| out.extend(v));
    out
}

/// Basis of the order-1 solutions `(μ₁, R₁, d₁)`, flattened as coefficient
/// cochains of degree 2. The order-1 equations are linear and homogeneous.
pub fn order_one_solutions(base: &MrbPair) -> Result<Vec<CochainMrbad>> {
    let (f, n) = (base.field(), base.dim());
    let dom = crate::cohomology::mrbad_dim(2, n, n);
    let probe = TruncatedDeformation::constant(base, 1);
    let cod = order_residuals(&probe, 1).len();
    let m = crate::tensor::flatten_linear_operator(f, dom, cod, |v| {
        let c = CochainMrbad::from_flat(f, 2, n, n, v)?;
        Ok(order_residuals(&TruncatedDeformation::from_cochain(base, &c)?, 1))
    })?;
    m.kernel().iter().map(|v| CochainMrbad::from_flat(f, 2, n, n, v)).collect()
}

pub fn check_deformation(def: &TruncatedDeformation) -> Result<DeformationReport> {
    def.check_shapes()?;
    Ok(DeformationReport {
        orders: (1..=def.order()).map(|n| order_report(def, n)).collect(),
    })
}

/// `((μ₁, R₁), d₁)`, certified closed in the adjoint complex.
pub fn infinitesimal(def: &TruncatedDeformation) -> Result<CochainMrbad> {
    def.check_shapes()?;
    let report = order_report(def, 1);
    if !report.passed() {
        return Err(Error::Invalid {
            what: "order-1 deformation",
            report,
        });
    }
    let c = def.coefficient_cochain(1);
    if !Complex::adjoint(&def.base).is_cocycle(&c)? {
        return Err(Error::NotClosed(String::from("the infinitesimal is not 𝔇²-closed")));
    }
    Ok(c)
}

/// `μ' = φ⁻¹ μ (φ ⊗ φ)`, `R' = φ⁻¹ R φ`, `d' = φ⁻¹ d φ`, mod `t^{N+1}`.
pub fn apply_gauge(def: &TruncatedDeformation, g: &GaugeTransformation) -> Result<TruncatedDeformation> {
    def.check_shapes()?;
    if g.order() != def.order() {
        return Err(Error::shape(alloc::format!(
            "gauge of order {} applied to a deformation of order {}",
            g.order(),
            def.order()
        )));
    }
    let n_dim = def.base.dim();
    if g.dim() != n_dim {
        return Err(Error::shape("gauge size differs from the algebra dimension"));
    }
    let inv = g.inverse();
    let f = def.base.field();
    let order = def.order();
    let phi: Vec<Matrix> = (0..=order).map(|k| g.coeff(k)).collect();
    let psi: Vec<Matrix> = (0..=order).map(|k| inv.coeff(k)).collect();
    let mut mu = Vec::with_capacity(order);
    let mut r = Vec::with_capacity(order);
    let mut d = Vec::with_capacity(order);
    for n in 1..=order {
        let mut rn = Matrix::zeros(f, n_dim, n_dim);
        let mut dn = Matrix::zeros(f, n_dim, n_dim);
        for p in compositions(n, 3) {
            rn = rn.add(&psi[p[0]].mul(def.r_coeff(p[1])).mul(&phi[p[2]]));
            dn = dn.add(&psi[p[0]].mul(def.d_coeff(p[1])).mul(&phi[p[2]]));
        }
        let four = compositions(n, 4);
        let mun = MultiTensor::from_fn(f, &[n_dim, n_dim], n_dim, |t| {
            let mut v = zero_vector(f, n_dim);
            for p in &four {
                let a = phi[p[2]].column(t[0]);
                let b = phi[p[3]].column(t[1]);
                add_into(&mut v, &psi[p[0]].apply(&def.mu_coeff(p[1]).apply(&[&a, &b])));
            }
            v
        })?;
        mu.push(mun);
        r.push(rn);
        d.push(dn);
    }
    Ok(TruncatedDeformation {
        base: def.base.clone(),
        mu,
        r,
        d,
    })
}

/// Some `ψ₁` with `𝔇¹ψ₁ = inf(def1) - inf(def2)`, or `None` when the
/// infinitesimals lie in different classes.
pub fn equivalent_infinitesimals(def1: &TruncatedDeformation, def2: &TruncatedDeformation) -> Result<Option<Matrix>> {
    if def1.base != def2.base {
        return Err(Error::shape("deformations of different pairs"));
    }
    let c1 = infinitesimal(def1)?;
    let c2 = infinitesimal(def2)?;
    let complex = Complex::adjoint(&def1.base);
    Ok(complex.solve_d1(&c1.sub(&c2))?.map(|t| t.to_matrix()))
}

/// The affine solution set for the next coefficient: a particular
/// solution and a kernel basis, or `None` when the order `N+1` equations
/// have no solution.
pub fn next_order_solutions(def: &TruncatedDeformation) -> Result<Option<(CochainMrbad, Vec<CochainMrbad>)>> {
    let (f, n) = (def.base.field(), def.base.dim());
    let next = def.order() + 1;
    let dom = crate::cohomology::mrbad_dim(2, n, n);
    let zero = CochainMrbad::zero(f, 2, n, n)?;
    let offset = order_residuals(&def.with_next(&zero)?, next);
    let m = crate::tensor::flatten_linear_operator(f, dom, offset.len(), |v| {
        let c = CochainMrbad::from_flat(f, 2, n, n, v)?;
        Ok(sub_vectors(&order_residuals(&def.with_next(&c)?, next), &offset))
    })?;
    let target: Vector = offset.iter().map(|x| -x.clone()).collect();
    let particular = match m.solve(&target)? {
        Some(x) => CochainMrbad::from_flat(f, 2, n, n, &x)?,
        None => return Ok(None),
    };
    let kernel = m
        .kernel()
        .iter()
        .map(|v| CochainMrbad::from_flat(f, 2, n, n, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((particular, kernel)))
}

/// Why a deformation could not be gauged to the constant one: the
/// coefficient of `t^order` left after gauging lower orders is a cocycle
/// whose class is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub order: usize,
    pub coefficient: CochainMrbad,
}

/// Gauges away the coefficients order by order up to `max_order`.
pub fn trivialize_steps(def: &TruncatedDeformation, max_order: usize) -> Result<Result<GaugeTransformation, Obstruction>> {
    let mut current = def.truncate(max_order)?;
    let complex = Complex::adjoint(&def.base);
    let mut total = GaugeTransformation::identity(def.base.field(), def.base.dim(), max_order);
    for k in 1..=max_order {
        let c = current.coefficient_cochain(k);
        if c.is_zero() {
            continue;
        }
        if !complex.big_d(&c)?.is_zero() {
            return Err(Error::NotADeformation { order: k });
        }
        let target = c.scale(&-def.base.field().one());
        let psi = match complex.solve_d1(&target)? {
            Some(psi) => psi.to_matrix(),
            None => return Ok(Err(Obstruction { order: k, coefficient: c })),
        };
        let step = GaugeTransformation::monomial(&psi, k, max_order);
        current = apply_gauge(&current, &step)?;
        total = total.then(&step);
        debug_assert!(current.coefficient_cochain(k).is_zero());
    }
    Ok(Ok(total))
}

/// Gauges away the coefficients order by order up to `max_order`; `None`
/// when some order's coefficient is not a coboundary.
pub fn trivialize(def: &TruncatedDeformation, max_order: usize) -> Result<Option<GaugeTransformation>> {
    Ok(trivialize_steps(def, max_order)?.ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::structures::fixtures::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn derivation_scaling(order: usize) -> TruncatedDeformation {
        let p = fixd(q());
        let mut def = TruncatedDeformation::constant(&p, order);
        def.d[0] = p.d.clone();
        def
    }

    #[test]
    fn constant_deformation_passes() {
        let def = TruncatedDeformation::constant(&fixd(q()), 4);
        assert!(check_deformation(&def).unwrap().passed());
        assert!(infinitesimal(&def).unwrap().is_zero());
    }

    #[test]
    fn derivation_scaling_passes_to_order_four() {
        let def = derivation_scaling(4);
        assert!(check_deformation(&def).unwrap().passed());
        let c = infinitesimal(&def).unwrap();
        assert!(c.top.f.is_zero() && c.top.g.as_ref().unwrap().is_zero());
        assert_eq!(c.bottom.unwrap().f.to_matrix(), fixd(q()).d);
    }

    #[test]
    fn identity_operator_perturbation_fails_at_order_one() {
        let p = fixd(q());
        let mut def = TruncatedDeformation::constant(&p, 2);
        def.r[0] = Matrix::identity(q(), 2);
        let report = check_deformation(&def).unwrap();
        assert_eq!(report.first_failing_order(), Some(1));
        let v = report.orders[0].first().unwrap();
        assert_eq!(v.identity, family::MODIFIED_RB);
        assert_eq!(v.witness, alloc::vec![0, 0]);
        assert!(infinitesimal(&def).is_err());
    }

    #[test]
    fn gauge_inverse_round_trip() {
        let p = fixd(q());
        let g = GaugeTransformation {
            phi: alloc::vec![
                Matrix::from_ints(q(), &[&[1, 2], &[0, 1]]),
                Matrix::from_ints(q(), &[&[0, 1], &[3, 0]]),
                Matrix::zeros(q(), 2, 2),
            ],
        };
        assert!(g.then(&g.inverse()).is_identity());
        let def = derivation_scaling(3);
        let gauged = apply_gauge(&def, &g).unwrap();
        assert!(check_deformation(&gauged).unwrap().passed());
        assert_eq!(apply_gauge(&gauged, &g.inverse()).unwrap(), def);
        let id = GaugeTransformation::identity(q(), 2, 3);
        assert_eq!(apply_gauge(&def, &id).unwrap(), def);
        let constant = TruncatedDeformation::constant(&p, 3);
        let gc = apply_gauge(&constant, &g).unwrap();
        let diff = infinitesimal(&gc).unwrap().sub(&infinitesimal(&constant).unwrap());
        let phi1 = MultiTensor::from_matrix(&g.phi[0]);
        let expected = Complex::adjoint(&p).big_d(&CochainMrbad::single(phi1)).unwrap();
        assert_eq!(diff, expected);
        let psi = equivalent_infinitesimals(&gc, &constant).unwrap().unwrap();
        let d1psi = Complex::adjoint(&p).big_d(&CochainMrbad::single(MultiTensor::from_matrix(&psi))).unwrap();
        assert_eq!(d1psi, diff);
    }

    #[test]
    fn trivialize_gauged_constant() {
        let p = upper_triangular_pair(q(), 2);
        let g = GaugeTransformation {
            phi: alloc::vec![
                Matrix::from_ints(q(), &[&[1, 2, 0], &[0, 1, 1], &[1, 0, 0]]),
                Matrix::from_ints(q(), &[&[0, 1, 0], &[3, 0, 0], &[0, 0, 2]]),
                Matrix::zeros(q(), 3, 3),
            ],
        };
        let gc = apply_gauge(&TruncatedDeformation::constant(&p, 3), &g).unwrap();
        let t = trivialize(&gc, 3).unwrap().unwrap();
        let back = apply_gauge(&gc, &t).unwrap();
        assert_eq!(back, TruncatedDeformation::constant(&p, 3));
        let trivial = trivialize(&TruncatedDeformation::constant(&p, 3), 3).unwrap().unwrap();
        assert!(trivial.is_identity());
    }

    #[test]
    fn non_cocycle_is_rejected_by_trivialize() {
        let p = fixd(q());
        let mut def = TruncatedDeformation::constant(&p, 2);
        def.r[0] = Matrix::identity(q(), 2);
        assert!(matches!(trivialize(&def, 2), Err(Error::NotADeformation { order: 1 })));
    }

    #[test]
    fn order_one_solutions_are_the_cocycles() {
        let base = fixd(q());
        let sols = order_one_solutions(&base).unwrap();
        let complex = Complex::adjoint(&base);
        assert_eq!(sols.len(), complex.cohomology(2).unwrap().dim_cocycles);
        for c in &sols {
            assert!(complex.is_cocycle(c).unwrap());
        }
    }

}
