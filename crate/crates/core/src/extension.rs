//! Abelian extensions `0 → M → Â → A → 0` of pairs: building one from a
//! 2-cocycle, extracting the cocycle through a section, deciding
//! equivalence and listing the classes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cohomology::{CochainMrbad, CohomologyResult, Complex, Differentials};
use crate::constructions::{semidirect_unchecked, split_inclusion, split_projection};
use crate::error::{Error, Result};
use crate::linalg::{add_into, basis_vector, sub_vectors, Matrix, Vector};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::structures::{check_bimodule, check_homomorphism, verify_pair, Bimodule, MrbPair};
use crate::tensor::{BasisTuples, MultiTensor};

/// Largest number of classes `classify` will enumerate over a finite field.
pub const CLASSIFY_CAP: u64 = 4096;

pub mod identity {
    pub const EXACT: &str = "p∘i = 0";
    pub const INCLUSION_RANK: &str = "i injective";
    pub const PROJECTION_RANK: &str = "p surjective";
    pub const ABELIAN: &str = "μ(i m, i n) = 0";
    pub const IDEAL: &str = "image of i is an ideal";
    pub const OPERATOR_STABLE: &str = "R̂ and d̂ preserve the image of i";
}

/// `(Θ, ξ, χ)` with `Θ : A⊗A → M` and `ξ, χ : A → M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTriple {
    pub theta: MultiTensor,
    pub xi: MultiTensor,
    pub chi: MultiTensor,
}

impl CocycleTriple {
    pub fn zero(pair: &MrbPair, m: usize) -> CocycleTriple {
        let (f, n) = (pair.field(), pair.dim());
        CocycleTriple {
            theta: MultiTensor::cochain(f, 2, n, m).expect("small"),
            xi: MultiTensor::cochain(f, 1, n, m).expect("small"),
            chi: MultiTensor::cochain(f, 1, n, m).expect("small"),
        }
    }

    /// `((Θ, ξ), χ)`.
    pub fn to_cochain(&self) -> CochainMrbad {
        CochainMrbad::degree2(self.theta.clone(), self.xi.clone(), self.chi.clone())
    }

    pub fn from_cochain(c: &CochainMrbad) -> Result<CocycleTriple> {
        match (&c.top.g, &c.bottom) {
            (Some(xi), Some(b)) if c.degree() == 2 => Ok(CocycleTriple {
                theta: c.top.f.clone(),
                xi: xi.clone(),
                chi: b.f.clone(),
            }),
            _ => Err(Error::shape("a cocycle triple is a degree-2 cochain")),
        }
    }
}

/// An abelian extension of `base` with total pair `total`, inclusion
/// `i : M → Â` and projection `p : Â → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianExtension {
    pub base: MrbPair,
    pub total: MrbPair,
    pub inclusion: Matrix,
    pub projection: Matrix,
    /// `R_M`, `d_M` obtained by restricting `R̂`, `d̂` to the image of `i`.
    pub r_m: Matrix,
    pub d_m: Matrix,
}

fn pull_back(i: &Matrix, v: &[Scalar]) -> Result<Vector> {
    i.solve(v)?
        .ok_or_else(|| Error::shape("vector outside the image of the inclusion"))
}

impl AbelianExtension {
    /// Validates exactness, the abelian ideal condition and compatibility of
    /// `i`, `p` with the operators.
    pub fn new(base: &MrbPair, total: &MrbPair, inclusion: &Matrix, projection: &Matrix) -> Result<AbelianExtension> {
        let (n, big) = (base.dim(), total.dim());
        let m = inclusion.cols();
        if inclusion.rows() != big || projection.rows() != n || projection.cols() != big || n + m != big {
            return Err(Error::shape("inclusion and projection do not fit the dimensions"));
        }
        let f = base.field();
        let mut report = CheckReport::pass();
        let pi = projection.mul(inclusion);
        for j in 0..m {
            report.record(identity::EXACT, &[j], pi.column(j));
        }
        if inclusion.rank() != m {
            report.record(identity::INCLUSION_RANK, &[], alloc::vec![f.one()]);
        }
        if projection.rank() != n {
            report.record(identity::PROJECTION_RANK, &[], alloc::vec![f.one()]);
        }
        for t in BasisTuples::uniform(m, 2) {
            let v = total.mul(&inclusion.column(t[0]), &inclusion.column(t[1]));
            report.record(identity::ABELIAN, &t, v);
        }
        for t in BasisTuples::new(&[big, m]) {
            let x = basis_vector(f, big, t[0]);
            let y = inclusion.column(t[1]);
            report.record(identity::IDEAL, &t, projection.apply(&total.mul(&x, &y)));
            report.record(identity::IDEAL, &[t[1], t[0]], projection.apply(&total.mul(&y, &x)));
        }
        for j in 0..m {
            let y = inclusion.column(j);
            report.record(identity::OPERATOR_STABLE, &[j], projection.apply(&total.r.apply(&y)));
            report.record(identity::OPERATOR_STABLE, &[j], projection.apply(&total.d.apply(&y)));
        }
        if !report.passed() {
            return Err(Error::Invalid {
                what: "abelian extension",
                report,
            });
        }
        let restrict = |op: &Matrix| -> Result<Matrix> {
            let cols = (0..m)
                .map(|j| pull_back(inclusion, &op.apply(&inclusion.column(j))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(f, m, &cols))
        };
        let r_m = restrict(&total.r)?;
        let d_m = restrict(&total.d)?;
        let mut report = check_homomorphism(projection, total, base)?;
        // i∘R_M = R̂∘i holds by construction of R_M.
        report.merge(verify_pair(total));
        if !report.passed() {
            return Err(Error::Invalid {
                what: "abelian extension",
                report,
            });
        }
        Ok(AbelianExtension {
            base: base.clone(),
            total: total.clone(),
            inclusion: inclusion.clone(),
            projection: projection.clone(),
            r_m,
            d_m,
        })
    }

    /// Recovers the base pair as the quotient `Â / i(M)` read through a
    /// right inverse of `p`, then validates as in `new`.
    pub fn from_total(total: &MrbPair, inclusion: &Matrix, projection: &Matrix) -> Result<AbelianExtension> {
        let f = total.field();
        let n = projection.rows();
        if projection.cols() != total.dim() {
            return Err(Error::shape("projection does not fit the total space"));
        }
        let cols = (0..n)
            .map(|j| {
                projection
                    .solve(&basis_vector(f, n, j))?
                    .ok_or_else(|| Error::shape("projection is not surjective"))
            })
            .collect::<Result<Vec<_>>>()?;
        let s = Matrix::from_columns(f, total.dim(), &cols);
        let mu = MultiTensor::from_fn(f, &[n, n], n, |t| {
            projection.apply(&total.mul(&s.column(t[0]), &s.column(t[1])))
        })?;
        let base = MrbPair::new(
            crate::structures::Algebra::new(mu)?,
            projection.mul(&total.r).mul(&s),
            projection.mul(&total.d).mul(&s),
            total.kappa.clone(),
        )?;
        AbelianExtension::new(&base, total, inclusion, projection)
    }

    pub fn fiber_dim(&self) -> usize {
        self.inclusion.cols()
    }

    /// The RREF-canonical right inverse of `p`.
    pub fn canonical_section(&self) -> Matrix {
        let f = self.base.field();
        let n = self.base.dim();
        let cols: Vec<Vector> = (0..n)
            .map(|j| {
                self.projection
                    .solve(&basis_vector(f, n, j))
                    .expect("sizes agree")
                    .expect("p is surjective")
            })
            .collect();
        Matrix::from_columns(f, self.total.dim(), &cols)
    }

    fn check_section(&self, s: &Matrix) -> Result<()> {
        if s.rows() != self.total.dim() || s.cols() != self.base.dim() {
            return Err(Error::NotASection);
        }
        if self.projection.mul(s) != Matrix::identity(self.base.field(), self.base.dim()) {
            return Err(Error::NotASection);
        }
        Ok(())
    }

    fn pull(&self, v: &[Scalar]) -> Result<Vector> {
        pull_back(&self.inclusion, v)
    }
}

/// `l(a,m) = μ̂(s a, m)`, `r(m,a) = μ̂(m, s a)` with the fiber operators.
pub fn section_actions(ext: &AbelianExtension, s: &Matrix) -> Result<Bimodule> {
    ext.check_section(s)?;
    let f = ext.base.field();
    let (n, m) = (ext.base.dim(), ext.fiber_dim());
    let sa: Vec<Vector> = (0..n).map(|j| s.column(j)).collect();
    let im: Vec<Vector> = (0..m).map(|j| ext.inclusion.column(j)).collect();
    let mut left = MultiTensor::zeros(f, &[n, m], m)?;
    let mut right = MultiTensor::zeros(f, &[m, n], m)?;
    for t in BasisTuples::new(&[n, m]) {
        let l = ext.pull(&ext.total.mul(&sa[t[0]], &im[t[1]]))?;
        left.value_mut(&t).clone_from_slice(&l);
        let r = ext.pull(&ext.total.mul(&im[t[1]], &sa[t[0]]))?;
        right.value_mut(&[t[1], t[0]]).clone_from_slice(&r);
    }
    Ok(Bimodule {
        left,
        right,
        r_m: ext.r_m.clone(),
        d_m: ext.d_m.clone(),
    })
}

/// `Θ(a,b) = μ̂(sa,sb) - s μ(a,b)`, `ξ(a) = R̂ s a - s R a`,
/// `χ(a) = d̂ s a - s d a`, read in `M`.
pub fn extract_cocycle(ext: &AbelianExtension, s: &Matrix) -> Result<CocycleTriple> {
    ext.check_section(s)?;
    let f = ext.base.field();
    let (n, m) = (ext.base.dim(), ext.fiber_dim());
    let sa: Vec<Vector> = (0..n).map(|j| s.column(j)).collect();
    let mut theta = MultiTensor::cochain(f, 2, n, m)?;
    for t in BasisTuples::uniform(n, 2) {
        let v = sub_vectors(
            &ext.total.mul(&sa[t[0]], &sa[t[1]]),
            &s.apply(ext.base.algebra.mul_basis(t[0], t[1])),
        );
        theta.value_mut(&t).clone_from_slice(&ext.pull(&v)?);
    }
    let along = |hat: &Matrix, low: &Matrix| -> Result<MultiTensor> {
        let cols = (0..n)
            .map(|j| ext.pull(&sub_vectors(&hat.apply(&sa[j]), &s.apply(&low.column(j)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiTensor::from_matrix(&Matrix::from_columns(f, m, &cols)))
    };
    Ok(CocycleTriple {
        theta,
        xi: along(&ext.total.r, &ext.base.r)?,
        chi: along(&ext.total.d, &ext.base.d)?,
    })
}

/// Names of the violated closedness equations, in order.
pub fn closedness_failures(pair: &MrbPair, coefficients: &Bimodule, c: &CocycleTriple) -> Result<Vec<&'static str>> {
    let complex = Complex::new(pair, coefficients)?;
    let d = complex.big_d(&c.to_cochain())?;
    let mut out = Vec::new();
    if !d.top.f.is_zero() {
        out.push("ext1: δ²Θ = 0");
    }
    if !d.top.g.as_ref().map_or(true, MultiTensor::is_zero) {
        out.push("ext2: -δ¹_m ξ - φ²Θ = 0");
    }
    let bottom = d.bottom.as_ref().expect("degree 3");
    if !bottom.f.is_zero() {
        out.push("ext3: δ¹χ + Δ²Θ = 0");
    }
    if !bottom.g.as_ref().map_or(true, MultiTensor::is_zero) {
        out.push("ext4: Δ¹ξ - φ¹χ = 0");
    }
    Ok(out)
}

/// The total pair on `A ⊕ M` with
/// `μ_Θ(a+m, b+n) = μ(a,b) + l(a,n) + r(m,b) + Θ(a,b)`,
/// `R_ξ(a+m) = Ra + R_M m + ξa`, `d_χ(a+m) = da + d_M m + χa`.
pub fn build_extension(pair: &MrbPair, coefficients: &Bimodule, c: &CocycleTriple) -> Result<AbelianExtension> {
    let report = check_bimodule(pair, coefficients)?;
    if !report.passed() {
        return Err(Error::Invalid {
            what: "bimodule",
            report,
        });
    }
    let (n, m) = (pair.dim(), coefficients.dim());
    c.theta.check_shape(&[n, n], m, "Θ")?;
    c.xi.check_shape(&[n], m, "ξ")?;
    c.chi.check_shape(&[n], m, "χ")?;
    let failures = closedness_failures(pair, coefficients, c)?;
    if !failures.is_empty() {
        return Err(Error::NotClosed(failures.join(", ")));
    }
    let f = pair.field();
    let mut total = semidirect_unchecked(pair, coefficients, Some(&c.theta));
    let corner = |t: &MultiTensor| Matrix::zeros(f, n, n + m).vstack(&t.to_matrix().hstack(&Matrix::zeros(f, m, m)));
    total.r = total.r.add(&corner(&c.xi));
    total.d = total.d.add(&corner(&c.chi));
    AbelianExtension::new(pair, &total, &split_inclusion(f, n, m), &split_projection(f, n, m))
}

/// Some `h : A → M` with `c1 = c2 + 𝔇¹h`.
pub fn cocycles_cohomologous(
    pair: &MrbPair,
    coefficients: &Bimodule,
    c1: &CocycleTriple,
    c2: &CocycleTriple,
) -> Result<Option<MultiTensor>> {
    let complex = Complex::new(pair, coefficients)?;
    complex.solve_d1(&c1.to_cochain().sub(&c2.to_cochain()))
}

/// An isomorphism `γ : Â₁ → Â₂` with `γ∘i₁ = i₂`, `p₂∘γ = p₁`, compatible
/// with products and operators, or `None`.
pub fn extensions_equivalent(ext1: &AbelianExtension, ext2: &AbelianExtension) -> Result<Option<Matrix>> {
    if ext1.base != ext2.base || ext1.fiber_dim() != ext2.fiber_dim() {
        return Err(Error::shape("extensions of different pairs or fibers"));
    }
    let (s1, s2) = (ext1.canonical_section(), ext2.canonical_section());
    let coeff1 = section_actions(ext1, &s1)?;
    let coeff2 = section_actions(ext2, &s2)?;
    if coeff1 != coeff2 {
        return Ok(None);
    }
    let c1 = extract_cocycle(ext1, &s1)?;
    let c2 = extract_cocycle(ext2, &s2)?;
    let h = match cocycles_cohomologous(&ext1.base, &coeff1, &c1, &c2)? {
        Some(h) => h.to_matrix(),
        None => return Ok(None),
    };
    let f = ext1.base.field();
    let big = ext1.total.dim();
    // γ = s₂p₁ + i₂hp₁ + i₂π₁ with π₁x = i₁⁻¹(x - s₁p₁x)
    let p1 = &ext1.projection;
    let cols = (0..big)
        .map(|j| {
            let x = basis_vector(f, big, j);
            let a = p1.apply(&x);
            let fiber = ext1.pull(&sub_vectors(&x, &s1.apply(&a)))?;
            let mut y = s2.apply(&a);
            let mut m_part = h.apply(&a);
            add_into(&mut m_part, &fiber);
            add_into(&mut y, &ext2.inclusion.apply(&m_part));
            Ok(y)
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = Matrix::from_columns(f, big, &cols);
    let report = check_homomorphism(&gamma, &ext1.total, &ext2.total)?;
    if !report.passed()
        || gamma.mul(&ext1.inclusion) != ext2.inclusion
        || ext2.projection.mul(&gamma) != ext1.projection
    {
        return Err(Error::NotClosed(format!("equivalence map failed verification: {report}")));
    }
    Ok(Some(gamma))
}

/// One extension per class in `H²`: every combination of the basis
/// representatives over a finite field, or the split extension and one per
/// basis representative over Q.
pub fn classify(pair: &MrbPair, coefficients: &Bimodule, h2: &CohomologyResult) -> Result<Vec<AbelianExtension>> {
    if h2.degree != 2 {
        return Err(Error::shape("classification uses degree-2 cohomology"));
    }
    let f = pair.field();
    let m = coefficients.dim();
    let reps: Vec<CocycleTriple> = h2
        .representatives
        .iter()
        .map(CocycleTriple::from_cochain)
        .collect::<Result<_>>()?;
    let zero = CocycleTriple::zero(pair, m).to_cochain();
    let mut cochains = Vec::new();
    match f.order() {
        Some(q) => {
            let k = reps.len();
            let count = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q));
            match count {
                Some(c) if c <= CLASSIFY_CAP => {}
                _ => return Err(Error::Enumeration(format!("{q}^{k} classes"))),
            }
            let elems: Vec<Scalar> = f.elements().expect("finite").collect();
            for t in BasisTuples::uniform(elems.len(), k) {
                let mut c = zero.clone();
                for (coef, rep) in t.iter().zip(&reps) {
                    c = c.add(&rep.to_cochain().scale(&elems[*coef]));
                }
                cochains.push(c);
            }
        }
        None => {
            cochains.push(zero);
            cochains.extend(reps.iter().map(CocycleTriple::to_cochain));
        }
    }
    cochains
        .iter()
        .map(|c| build_extension(pair, coefficients, &CocycleTriple::from_cochain(c)?))
        .collect()
}

/// Index of the listed extension equivalent to `ext`, requiring exactly one.
pub fn match_class(classes: &[AbelianExtension], ext: &AbelianExtension) -> Result<Option<usize>> {
    let mut found = None;
    for (k, c) in classes.iter().enumerate() {
        if extensions_equivalent(c, ext)?.is_some() {
            if found.is_some() {
                return Err(Error::Enumeration(String::from("extension matches two listed classes")));
            }
            found = Some(k);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::structures::fixtures::*;
    use crate::structures::Algebra;

    fn q() -> Field {
        Field::Rationals
    }

    /// `k` with `R = 1`, `d = 0`, `κ = -1`.
    fn line() -> MrbPair {
        MrbPair::new(
            Algebra::from_table(q(), 1, &[(0, 0, &[1])]),
            Matrix::identity(q(), 1),
            Matrix::zeros(q(), 1, 1),
            q().int(-1),
        )
        .unwrap()
    }

    /// FIXD seen as an extension of `span(e₁)` by `span(e₂)`.
    fn fixd_extension() -> AbelianExtension {
        let total = fixd(q());
        AbelianExtension::new(
            &line(),
            &total,
            &Matrix::from_ints(q(), &[&[0], &[1]]),
            &Matrix::from_ints(q(), &[&[1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn fixd_is_an_extension_of_the_line() {
        let ext = fixd_extension();
        assert_eq!(ext.r_m, Matrix::from_ints(q(), &[&[-1]]));
        assert_eq!(ext.d_m, Matrix::from_ints(q(), &[&[1]]));
        let s = Matrix::from_ints(q(), &[&[1], &[0]]);
        let bim = section_actions(&ext, &s).unwrap();
        assert_eq!(bim.left.value(&[0, 0]), &[q().one()]);
        assert!(check_bimodule(&line(), &bim).unwrap().passed());
        let c = extract_cocycle(&ext, &s).unwrap();
        assert!(c.theta.is_zero() && c.xi.is_zero() && c.chi.is_zero());
    }

    #[test]
    fn base_recovered_from_total() {
        let ext = fixd_extension();
        let again = AbelianExtension::from_total(&ext.total, &ext.inclusion, &ext.projection).unwrap();
        assert_eq!(again, ext);
    }

    #[test]
    fn shifted_section() {
        let ext = fixd_extension();
        let s1 = Matrix::from_ints(q(), &[&[1], &[1]]);
        let s2 = Matrix::from_ints(q(), &[&[1], &[0]]);
        assert_eq!(section_actions(&ext, &s1).unwrap(), section_actions(&ext, &s2).unwrap());
        let c1 = extract_cocycle(&ext, &s1).unwrap();
        assert_eq!(c1.theta.value(&[0, 0]), &[q().one()]);
        let c2 = extract_cocycle(&ext, &s2).unwrap();
        let bim = section_actions(&ext, &s2).unwrap();
        let h = cocycles_cohomologous(&line(), &bim, &c1, &c2).unwrap().unwrap();
        assert_eq!(h.to_matrix(), Matrix::from_ints(q(), &[&[1]]));
    }

    #[test]
    fn non_section_is_rejected() {
        let ext = fixd_extension();
        let bad = Matrix::from_ints(q(), &[&[2], &[0]]);
        assert!(matches!(section_actions(&ext, &bad), Err(Error::NotASection)));
        assert!(matches!(extract_cocycle(&ext, &bad), Err(Error::NotASection)));
    }

    #[test]
    fn build_round_trip() {
        let ext = fixd_extension();
        let s = ext.canonical_section();
        let bim = section_actions(&ext, &s).unwrap();
        let zero = CocycleTriple::zero(&line(), 1);
        let built = build_extension(&line(), &bim, &zero).unwrap();
        assert_eq!(built.total, fixd(q()));
        let trivial = Bimodule::zero(q(), 1, 1);
        let split = build_extension(&line(), &trivial, &zero).unwrap();
        assert!(verify_pair(&split.total).passed());
        assert_eq!(extract_cocycle(&split, &split.canonical_section()).unwrap(), zero);
    }

    #[test]
    fn non_closed_triple_is_rejected() {
        let p = fixd(q());
        let bim = crate::structures::adjoint_bimodule(&p);
        let mut c = CocycleTriple::zero(&p, 2);
        c.xi = MultiTensor::from_matrix(&Matrix::from_ints(q(), &[&[1, 0], &[0, 0]]));
        match build_extension(&p, &bim, &c) {
            Err(Error::NotClosed(msg)) => assert!(msg.contains("ext")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equivalence_with_coboundary_shift() {
        let p = fixd(q());
        let bim = crate::structures::adjoint_bimodule(&p);
        let complex = Complex::new(&p, &bim).unwrap();
        let h = MultiTensor::from_matrix(&Matrix::from_ints(q(), &[&[0, 1], &[2, 0]]));
        let shift = CocycleTriple::from_cochain(&complex.big_d(&CochainMrbad::single(h.clone())).unwrap()).unwrap();
        let zero = CocycleTriple::zero(&p, 2);
        let e1 = build_extension(&p, &bim, &shift).unwrap();
        let e2 = build_extension(&p, &bim, &zero).unwrap();
        let gamma = extensions_equivalent(&e1, &e2).unwrap().unwrap();
        let expected = Matrix::identity(q(), 2)
            .vstack(&h.to_matrix())
            .hstack(&Matrix::zeros(q(), 2, 2).vstack(&Matrix::identity(q(), 2)));
        assert_eq!(gamma, expected);
        assert_eq!(extensions_equivalent(&e2, &e2).unwrap().unwrap(), Matrix::identity(q(), 4));
    }
}
