//! The cochain complex of a pair with coefficients in a bimodule.
//!
//! Degree-`n` cochains of the operator complex are pairs `(f_n, g_{n-1})`
//! of multilinear maps `A^{⊗k} → M`; the full complex pairs two of those.
//! Every differential is available both as a direct operation on tensors
//! and as an exact matrix in the flattened coordinates (the `f` block
//! before the `g` block, the top pair before the bottom pair).

pub mod brute;
pub mod calibration;
pub mod lie;

use alloc::vec::Vec;

use crate::constructions::{induced_algebra, induced_bimodule};
use crate::error::{Error, Result};
use crate::linalg::{add_into, axpy, basis_vector, sub_vectors, EchelonSpan, Matrix, Vector};
use crate::scalar::{Field, Scalar};
use crate::structures::{adjoint_bimodule, Bimodule, MrbPair};
use crate::tensor::{flatten_linear_operator, MultiTensor};

/// Highest degree whose differential is materialized.
pub const MAX_DIFFERENTIAL_DEGREE: usize = 4;
/// Highest degree for which cohomology is reported.
pub const MAX_COHOMOLOGY_DEGREE: usize = 3;

/// Coefficient convention for the even-size subset terms of `φⁿ`.
///
/// The term for a subset of `r` plain arguments (`r ≥ 2` even) is
/// `sign · (-κ)^(r/2 + exponent_offset) · [R_M ∘] f(…)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhiConvention {
    pub exponent_offset: i32,
    pub plus_sign: bool,
    pub compose_r_m: bool,
}

impl PhiConvention {
    /// `- (-κ)^(r/2+1) R_M ∘ f`, the form as usually written.
    pub const PRINTED: PhiConvention = PhiConvention {
        exponent_offset: 1,
        plus_sign: false,
        compose_r_m: true,
    };

    /// `+ (-κ)^(r/2) f`, the convention that makes `φ` a chain map.
    pub const CALIBRATED: PhiConvention = PhiConvention {
        exponent_offset: 0,
        plus_sign: true,
        compose_r_m: false,
    };

    pub fn candidates() -> Vec<PhiConvention> {
        let mut out = Vec::new();
        for plus_sign in [false, true] {
            for compose_r_m in [true, false] {
                for exponent_offset in [1, 0, -1] {
                    out.push(PhiConvention {
                        exponent_offset,
                        plus_sign,
                        compose_r_m,
                    });
                }
            }
        }
        out
    }

    fn even_exponent(&self, r: usize) -> u32 {
        let e = (r / 2) as i32 + self.exponent_offset;
        debug_assert!(e >= 0);
        e.max(0) as u32
    }
}

impl Default for PhiConvention {
    fn default() -> PhiConvention {
        PhiConvention::CALIBRATED
    }
}

impl core::fmt::Display for PhiConvention {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let exp = match self.exponent_offset {
            0 => alloc::string::String::from("r/2"),
            k if k > 0 => alloc::format!("r/2+{k}"),
            k => alloc::format!("r/2-{}", -k),
        };
        write!(
            f,
            "{} (-κ)^({exp}) {}f",
            if self.plus_sign { "+" } else { "-" },
            if self.compose_r_m { "R_M∘" } else { "" }
        )
    }
}

/// A degree-`n` cochain `(f_n, g_{n-1})`; `g` is absent in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMrbaa {
    pub f: MultiTensor,
    pub g: Option<MultiTensor>,
}

/// A degree-`n` cochain `((f_n, g_{n-1}), (h_{n-1}, s_{n-2}))`; the bottom
/// pair is absent in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainMrbad {
    pub top: CochainMrbaa,
    pub bottom: Option<CochainMrbaa>,
}

fn pow_usize(a: usize, n: usize) -> usize {
    (0..n).fold(1usize, |acc, _| acc.saturating_mul(a))
}

/// `dim Cⁿ(A;M) = aⁿ·m`.
pub fn hochschild_dim(n: usize, a: usize, m: usize) -> usize {
    pow_usize(a, n).saturating_mul(m)
}

pub fn mrbaa_dim(n: usize, a: usize, m: usize) -> usize {
    if n <= 1 {
        hochschild_dim(n, a, m)
    } else {
        hochschild_dim(n, a, m) + hochschild_dim(n - 1, a, m)
    }
}

pub fn mrbad_dim(n: usize, a: usize, m: usize) -> usize {
    if n <= 1 {
        mrbaa_dim(n, a, m)
    } else {
        mrbaa_dim(n, a, m) + mrbaa_dim(n - 1, a, m)
    }
}

impl CochainMrbaa {
    pub fn single(f: MultiTensor) -> CochainMrbaa {
        CochainMrbaa { f, g: None }
    }

    pub fn degree(&self) -> usize {
        self.f.arity()
    }

    pub fn zero(field: Field, n: usize, a: usize, m: usize) -> Result<CochainMrbaa> {
        Ok(CochainMrbaa {
            f: MultiTensor::cochain(field, n, a, m)?,
            g: if n >= 2 { Some(MultiTensor::cochain(field, n - 1, a, m)?) } else { None },
        })
    }

    pub fn flatten(&self) -> Vector {
        let mut v = self.f.entries().to_vec();
        if let Some(g) = &self.g {
            v.extend_from_slice(g.entries());
        }
        v
    }

    pub fn from_flat(field: Field, n: usize, a: usize, m: usize, v: &[Scalar]) -> Result<CochainMrbaa> {
        if v.len() != mrbaa_dim(n, a, m) {
            return Err(Error::shape(alloc::format!(
                "{} coordinates for a degree-{n} pair cochain of dimension {}",
                v.len(),
                mrbaa_dim(n, a, m)
            )));
        }
        let k = hochschild_dim(n, a, m);
        let f = MultiTensor::from_flat(field, &alloc::vec![a; n], m, v[..k].to_vec())?;
        let g = if n >= 2 {
            Some(MultiTensor::from_flat(field, &alloc::vec![a; n - 1], m, v[k..].to_vec())?)
        } else {
            None
        };
        Ok(CochainMrbaa { f, g })
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.as_ref().map_or(true, MultiTensor::is_zero)
    }

    pub fn add(&self, other: &CochainMrbaa) -> CochainMrbaa {
        CochainMrbaa {
            f: self.f.add(&other.f),
            g: zip_opt(&self.g, &other.g, MultiTensor::add),
        }
    }

    pub fn sub(&self, other: &CochainMrbaa) -> CochainMrbaa {
        CochainMrbaa {
            f: self.f.sub(&other.f),
            g: zip_opt(&self.g, &other.g, MultiTensor::sub),
        }
    }

    pub fn scale(&self, c: &Scalar) -> CochainMrbaa {
        CochainMrbaa {
            f: self.f.scale(c),
            g: self.g.as_ref().map(|g| g.scale(c)),
        }
    }
}

fn zip_opt<T>(a: &Option<T>, b: &Option<T>, op: impl Fn(&T, &T) -> T) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(op(x, y)),
        (None, None) => None,
        _ => panic!("cochain degrees differ"),
    }
}

impl CochainMrbad {
    pub fn single(f: MultiTensor) -> CochainMrbad {
        CochainMrbad {
            top: CochainMrbaa::single(f),
            bottom: None,
        }
    }

    /// The degree-2 cochain `((f, g), h)`.
    pub fn degree2(f: MultiTensor, g: MultiTensor, h: MultiTensor) -> CochainMrbad {
        CochainMrbad {
            top: CochainMrbaa { f, g: Some(g) },
            bottom: Some(CochainMrbaa::single(h)),
        }
    }

    pub fn degree(&self) -> usize {
        self.top.degree()
    }

    pub fn zero(field: Field, n: usize, a: usize, m: usize) -> Result<CochainMrbad> {
        Ok(CochainMrbad {
            top: CochainMrbaa::zero(field, n, a, m)?,
            bottom: if n >= 2 { Some(CochainMrbaa::zero(field, n - 1, a, m)?) } else { None },
        })
    }

    pub fn flatten(&self) -> Vector {
        let mut v = self.top.flatten();
        if let Some(b) = &self.bottom {
            v.extend(b.flatten());
        }
        v
    }

    pub fn from_flat(field: Field, n: usize, a: usize, m: usize, v: &[Scalar]) -> Result<CochainMrbad> {
        if v.len() != mrbad_dim(n, a, m) {
            return Err(Error::shape(alloc::format!(
                "{} coordinates for a degree-{n} cochain of dimension {}",
                v.len(),
                mrbad_dim(n, a, m)
            )));
        }
        let k = mrbaa_dim(n, a, m);
        let top = CochainMrbaa::from_flat(field, n, a, m, &v[..k])?;
        let bottom = if n >= 2 {
            Some(CochainMrbaa::from_flat(field, n - 1, a, m, &v[k..])?)
        } else {
            None
        };
        Ok(CochainMrbad { top, bottom })
    }

    pub fn is_zero(&self) -> bool {
        self.top.is_zero() && self.bottom.as_ref().map_or(true, CochainMrbaa::is_zero)
    }

    pub fn add(&self, other: &CochainMrbad) -> CochainMrbad {
        CochainMrbad {
            top: self.top.add(&other.top),
            bottom: zip_opt(&self.bottom, &other.bottom, CochainMrbaa::add),
        }
    }

    pub fn sub(&self, other: &CochainMrbad) -> CochainMrbad {
        CochainMrbad {
            top: self.top.sub(&other.top),
            bottom: zip_opt(&self.bottom, &other.bottom, CochainMrbaa::sub),
        }
    }

    pub fn scale(&self, c: &Scalar) -> CochainMrbad {
        CochainMrbad {
            top: self.top.scale(c),
            bottom: self.bottom.as_ref().map(|b| b.scale(c)),
        }
    }
}

/// Which operator to realize as a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    /// `δⁿ` on single cochains (the Chevalley-Eilenberg differential on the Lie side).
    Hoch,
    /// `δⁿ` of the induced structure.
    MHoch,
    Phi,
    /// `Δⁿ` on single cochains.
    DeltaOp,
    /// `Δⁿ` on pairs `(f_n, g_{n-1})`.
    DeltaPair,
    Partial,
    BigD,
}

impl Operator {
    pub const ALL: [Operator; 7] = [
        Operator::Hoch,
        Operator::MHoch,
        Operator::Phi,
        Operator::DeltaOp,
        Operator::DeltaPair,
        Operator::Partial,
        Operator::BigD,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Operator::Hoch => "hoch",
            Operator::MHoch => "mhoch",
            Operator::Phi => "phi",
            Operator::DeltaOp => "delta_op",
            Operator::DeltaPair => "delta_pair",
            Operator::Partial => "partial",
            Operator::BigD => "big_d",
        }
    }
}

/// Dimensions of the domain and codomain of an operator in degree `n`.
pub fn operator_dims(op: Operator, n: usize, a: usize, m: usize) -> (usize, usize) {
    match op {
        Operator::Hoch | Operator::MHoch => (hochschild_dim(n, a, m), hochschild_dim(n + 1, a, m)),
        Operator::Phi | Operator::DeltaOp => (hochschild_dim(n, a, m), hochschild_dim(n, a, m)),
        Operator::DeltaPair => (mrbaa_dim(n, a, m), mrbaa_dim(n, a, m)),
        Operator::Partial => (mrbaa_dim(n, a, m), mrbaa_dim(n + 1, a, m)),
        Operator::BigD => (mrbad_dim(n, a, m), mrbad_dim(n + 1, a, m)),
    }
}

/// The four primitive operators; the pair and full differentials are
/// assembled from them identically on the associative and Lie sides.
pub trait Differentials {
    fn field(&self) -> Field;
    /// `(dim A, dim M)`.
    fn dims(&self) -> (usize, usize);
    fn delta(&self, f: &MultiTensor) -> Result<MultiTensor>;
    fn delta_m(&self, g: &MultiTensor) -> Result<MultiTensor>;
    fn phi(&self, f: &MultiTensor) -> Result<MultiTensor>;
    fn delta_op(&self, f: &MultiTensor) -> Result<MultiTensor>;

    /// `∂ⁿ(f, g) = (δf, -δ_m g - φf)`; `∂¹f = (δf, -φf)`.
    fn partial(&self, c: &CochainMrbaa) -> Result<CochainMrbaa> {
        let df = self.delta(&c.f)?;
        let mut lower = self.phi(&c.f)?.neg();
        if let Some(g) = &c.g {
            lower = lower.sub(&self.delta_m(g)?);
        }
        Ok(CochainMrbaa { f: df, g: Some(lower) })
    }

    /// `Δ(f, g) = (Δf, Δg)`.
    fn delta_op_pair(&self, c: &CochainMrbaa) -> Result<CochainMrbaa> {
        Ok(CochainMrbaa {
            f: self.delta_op(&c.f)?,
            g: match &c.g {
                Some(g) => Some(self.delta_op(g)?),
                None => None,
            },
        })
    }

    /// `𝔇ⁿ(x, y) = (∂x, ∂y + (-1)ⁿ Δx)`; `𝔇¹f = (∂¹f, -Δ¹f)`.
    fn big_d(&self, c: &CochainMrbad) -> Result<CochainMrbad> {
        let n = c.degree();
        let top = self.partial(&c.top)?;
        let mut bottom = self.delta_op_pair(&c.top)?;
        if n % 2 == 1 {
            bottom = bottom.scale(&-self.field().one());
        }
        if let Some(b) = &c.bottom {
            bottom = bottom.add(&self.partial(b)?);
        }
        Ok(CochainMrbad {
            top,
            bottom: Some(bottom),
        })
    }

    fn apply_operator(&self, op: Operator, n: usize, v: &[Scalar]) -> Result<Vector> {
        let f = self.field();
        let (a, m) = self.dims();
        let single = |v: &[Scalar]| MultiTensor::from_flat(f, &alloc::vec![a; n], m, v.to_vec());
        Ok(match op {
            Operator::Hoch => self.delta(&single(v)?)?.into_entries(),
            Operator::MHoch => self.delta_m(&single(v)?)?.into_entries(),
            Operator::Phi => self.phi(&single(v)?)?.into_entries(),
            Operator::DeltaOp => self.delta_op(&single(v)?)?.into_entries(),
            Operator::DeltaPair => self.delta_op_pair(&CochainMrbaa::from_flat(f, n, a, m, v)?)?.flatten(),
            Operator::Partial => self.partial(&CochainMrbaa::from_flat(f, n, a, m, v)?)?.flatten(),
            Operator::BigD => self.big_d(&CochainMrbad::from_flat(f, n, a, m, v)?)?.flatten(),
        })
    }

    /// Exact matrix of an operator in degree `n` (`1 ≤ n ≤ 4`).
    fn matrix(&self, op: Operator, n: usize) -> Result<Matrix> {
        if n == 0 || n > MAX_DIFFERENTIAL_DEGREE {
            return Err(Error::Degree {
                degree: n,
                min: 1,
                max: MAX_DIFFERENTIAL_DEGREE,
            });
        }
        let (a, m) = self.dims();
        let (dom, cod) = operator_dims(op, n, a, m);
        flatten_linear_operator(self.field(), dom, cod, |v| self.apply_operator(op, n, v))
    }
}

/// Basis vectors of `A`, their images under an operator, and a helper that
/// evaluates a cochain on a tuple of such vectors.
struct ArgumentTable {
    plain: Vec<Vector>,
    image: Vec<Vector>,
}

impl ArgumentTable {
    fn new(field: Field, op: &Matrix) -> ArgumentTable {
        let n = op.cols();
        let plain: Vec<Vector> = (0..n).map(|i| basis_vector(field, n, i)).collect();
        let image = plain.iter().map(|e| op.apply(e)).collect();
        ArgumentTable { plain, image }
    }
}

fn check_single(f: &MultiTensor, a: usize, m: usize, what: &str) -> Result<()> {
    if f.arity() == 0 {
        return Err(Error::Degree {
            degree: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    f.check_shape(&alloc::vec![a; f.arity()], m, what)
}

/// `δⁿf(a₁..a_{n+1}) = (-1)^{n+1} l(a₁, f(a₂..)) + r(f(..a_n), a_{n+1})
///   + Σ_i (-1)^{i+n+1} f(.., μ(a_i, a_{i+1}), ..)` for any bilinear `μ`
/// with actions `l`, `r`.
pub fn hochschild_differential(
    mu: &MultiTensor,
    left: &MultiTensor,
    right: &MultiTensor,
    f: &MultiTensor,
) -> Result<MultiTensor> {
    let (a, m) = (mu.cod(), left.cod());
    check_single(f, a, m, "cochain")?;
    let n = f.arity();
    let field = f.field();
    let one = field.one();
    let minus = -one.clone();
    let e: Vec<Vector> = (0..a).map(|i| basis_vector(field, a, i)).collect();
    MultiTensor::from_fn(field, &alloc::vec![a; n + 1], m, |t| {
        let first = left.apply(&[&e[t[0]], f.value(&t[1..])]);
        let mut out = right.apply(&[f.value(&t[..n]), &e[t[n]]]);
        axpy(&mut out, if n % 2 == 1 { &one } else { &minus }, &first);
        for i in 0..n {
            let prod = mu.value(&[t[i], t[i + 1]]);
            let mut args: Vec<&[Scalar]> = Vec::with_capacity(n);
            for (k, idx) in t.iter().enumerate() {
                if k == i {
                    args.push(prod);
                } else if k != i + 1 {
                    args.push(&e[*idx]);
                }
            }
            let term = f.apply(&args);
            // (-1)^{(i+1)+n+1}
            axpy(&mut out, if (i + n) % 2 == 0 { &one } else { &minus }, &term);
        }
        out
    })
}

/// `φⁿ` for operators `R` on `A`, `R_M` on `M` and weight `κ`.
pub fn phi_with(
    r: &Matrix,
    r_m: &Matrix,
    kappa: &Scalar,
    conv: PhiConvention,
    f: &MultiTensor,
) -> Result<MultiTensor> {
    let (a, m) = (r.cols(), r_m.cols());
    check_single(f, a, m, "cochain")?;
    let n = f.arity();
    let field = f.field();
    let table = ArgumentTable::new(field, r);
    let minus_kappa = -kappa.clone();
    let one = field.one();
    // Coefficient and whether R_M is applied, indexed by subset size r.
    let coeffs: Vec<(Scalar, bool)> = (0..=n)
        .map(|size| {
            if size == 0 {
                (one.clone(), false)
            } else if size % 2 == 1 {
                (-minus_kappa.pow(((size - 1) / 2) as u32), true)
            } else {
                let c = minus_kappa.pow(conv.even_exponent(size));
                (if conv.plus_sign { c } else { -c }, conv.compose_r_m)
            }
        })
        .collect();
    MultiTensor::from_fn(field, &alloc::vec![a; n], m, |t| {
        let mut out = crate::linalg::zero_vector(field, m);
        for mask in 0u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            let (c, with_rm) = &coeffs[size];
            if c.is_zero() {
                continue;
            }
            let args: Vec<&[Scalar]> = t
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    if mask & (1 << k) != 0 {
                        table.plain[i].as_slice()
                    } else {
                        table.image[i].as_slice()
                    }
                })
                .collect();
            let mut val = f.apply(&args);
            if *with_rm {
                val = r_m.apply(&val);
            }
            axpy(&mut out, c, &val);
        }
        out
    })
}

/// `Δⁿf = Σ_i f(.., d a_i, ..) - d_M f`.
pub fn delta_op_with(d: &Matrix, d_m: &Matrix, f: &MultiTensor) -> Result<MultiTensor> {
    let (a, m) = (d.cols(), d_m.cols());
    check_single(f, a, m, "cochain")?;
    let n = f.arity();
    let field = f.field();
    let table = ArgumentTable::new(field, d);
    MultiTensor::from_fn(field, &alloc::vec![a; n], m, |t| {
        let mut out = d_m.apply(f.value(t)).iter().map(|x| -x).collect::<Vector>();
        for i in 0..n {
            let args: Vec<&[Scalar]> = t
                .iter()
                .enumerate()
                .map(|(k, &j)| {
                    if k == i {
                        table.image[j].as_slice()
                    } else {
                        table.plain[j].as_slice()
                    }
                })
                .collect();
            add_into(&mut out, &f.apply(&args));
        }
        out
    })
}

/// A pair with bimodule coefficients and everything derived from it.
#[derive(Clone, Debug)]
pub struct Complex {
    pair: MrbPair,
    bim: Bimodule,
    induced_pair: MrbPair,
    induced_bim: Bimodule,
    phi: PhiConvention,
}

/// Dimensions of cocycles, coboundaries and cohomology in one degree, with
/// representatives of a basis of the cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub degree: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_h: usize,
    pub representatives: Vec<CochainMrbad>,
}

impl Complex {
    pub fn new(pair: &MrbPair, bim: &Bimodule) -> Result<Complex> {
        bim.check_shape(pair)?;
        Ok(Complex {
            induced_pair: induced_algebra(pair),
            induced_bim: induced_bimodule(pair, bim),
            pair: pair.clone(),
            bim: bim.clone(),
            phi: PhiConvention::default(),
        })
    }

    pub fn adjoint(pair: &MrbPair) -> Complex {
        Complex::new(pair, &adjoint_bimodule(pair)).expect("adjoint shapes agree")
    }

    pub fn with_phi(mut self, conv: PhiConvention) -> Complex {
        self.phi = conv;
        self
    }

    pub fn pair(&self) -> &MrbPair {
        &self.pair
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.bim
    }

    pub fn phi_convention(&self) -> PhiConvention {
        self.phi
    }

    /// The printed modified differential transcribed term by term, with
    /// `R` (not `R_M`) applied to the last argument of the right action.
    pub fn delta_mhoch_direct(&self, g: &MultiTensor) -> Result<MultiTensor> {
        let (a, m) = (self.pair.dim(), self.bim.dim());
        check_single(g, a, m, "cochain")?;
        let n = g.arity();
        let field = g.field();
        let one = field.one();
        let minus = -one.clone();
        let sign = if n % 2 == 1 { &one } else { &minus };
        let e: Vec<Vector> = (0..a).map(|i| basis_vector(field, a, i)).collect();
        let re: Vec<Vector> = e.iter().map(|v| self.pair.r.apply(v)).collect();
        let (bim, rm, mu) = (&self.bim, &self.bim.r_m, self.pair.algebra.mu());
        MultiTensor::from_fn(field, &alloc::vec![a; n + 1], m, |t| {
            let tail = g.value(&t[1..]);
            let head = g.value(&t[..n]);
            let mut out = crate::linalg::zero_vector(field, m);
            axpy(&mut out, sign, &bim.act_left(&re[t[0]], tail));
            axpy(&mut out, &-sign.clone(), &rm.apply(&bim.act_left(&e[t[0]], tail)));
            add_into(&mut out, &bim.act_right(head, &re[t[n]]));
            out = sub_vectors(&out, &rm.apply(&bim.act_right(head, &e[t[n]])));
            for i in 0..n {
                let mut prod = mu.apply(&[&re[t[i]], &e[t[i + 1]]]);
                add_into(&mut prod, &mu.apply(&[&e[t[i]], &re[t[i + 1]]]));
                let mut args: Vec<&[Scalar]> = Vec::with_capacity(n);
                for (k, idx) in t.iter().enumerate() {
                    if k == i {
                        args.push(&prod);
                    } else if k != i + 1 {
                        args.push(&e[*idx]);
                    }
                }
                axpy(&mut out, if (i + n) % 2 == 0 { &one } else { &minus }, &g.apply(&args));
            }
            out
        })
    }

    /// `Zⁿ/Bⁿ` for `1 ≤ n ≤ 3`, with `B¹ = 0`.
    pub fn cohomology(&self, n: usize) -> Result<CohomologyResult> {
        if n == 0 || n > MAX_COHOMOLOGY_DEGREE {
            return Err(Error::Degree {
                degree: n,
                min: 1,
                max: MAX_COHOMOLOGY_DEGREE,
            });
        }
        let (a, m) = self.dims();
        let field = self.field();
        let (_, cocycles) = self.matrix(Operator::BigD, n)?.rank_and_kernel();
        let mut span = EchelonSpan::new(field, mrbad_dim(n, a, m));
        if n >= 2 {
            for b in self.matrix(Operator::BigD, n - 1)?.image_basis() {
                span.insert(&b);
            }
        }
        let dim_coboundaries = span.rank();
        let mut representatives = Vec::new();
        for z in &cocycles {
            if span.insert(z).is_some() {
                representatives.push(CochainMrbad::from_flat(field, n, a, m, z)?);
            }
        }
        let dim_h = cocycles.len() - dim_coboundaries;
        debug_assert_eq!(dim_h, representatives.len());
        Ok(CohomologyResult {
            degree: n,
            dim_cocycles: cocycles.len(),
            dim_coboundaries,
            dim_h,
            representatives,
        })
    }

    /// Some `ψ : A → M` with `𝔇¹ψ = target`, if one exists.
    pub fn solve_d1(&self, target: &CochainMrbad) -> Result<Option<MultiTensor>> {
        let (a, m) = self.dims();
        if target.degree() != 2 {
            return Err(Error::shape("the target of 𝔇¹ has degree 2"));
        }
        let mat = self.matrix(Operator::BigD, 1)?;
        Ok(match mat.solve(&target.flatten())? {
            Some(x) => Some(MultiTensor::from_flat(self.field(), &[a], m, x)?),
            None => None,
        })
    }

    pub fn is_cocycle(&self, c: &CochainMrbad) -> Result<bool> {
        Ok(self.big_d(c)?.is_zero())
    }
}

impl Differentials for Complex {
    fn field(&self) -> Field {
        self.pair.field()
    }

    fn dims(&self) -> (usize, usize) {
        (self.pair.dim(), self.bim.dim())
    }

    fn delta(&self, f: &MultiTensor) -> Result<MultiTensor> {
        hochschild_differential(self.pair.algebra.mu(), &self.bim.left, &self.bim.right, f)
    }

    fn delta_m(&self, g: &MultiTensor) -> Result<MultiTensor> {
        hochschild_differential(
            self.induced_pair.algebra.mu(),
            &self.induced_bim.left,
            &self.induced_bim.right,
            g,
        )
    }

    fn phi(&self, f: &MultiTensor) -> Result<MultiTensor> {
        phi_with(&self.pair.r, &self.bim.r_m, &self.pair.kappa, self.phi, f)
    }

    fn delta_op(&self, f: &MultiTensor) -> Result<MultiTensor> {
        delta_op_with(&self.pair.d, &self.bim.d_m, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::fixtures::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn id_cochain(n: usize) -> MultiTensor {
        MultiTensor::from_matrix(&Matrix::identity(q(), n))
    }

    #[test]
    fn dimensions() {
        let dims: Vec<usize> = (1..=5).map(|n| mrbad_dim(n, 2, 2)).collect();
        assert_eq!(dims, [4, 16, 36, 72, 144]);
        let dims: Vec<usize> = (1..=4).map(|n| mrbad_dim(n, 1, 1)).collect();
        assert_eq!(dims, [1, 3, 4, 4]);
    }

    #[test]
    fn hochschild_examples() {
        let p = fixd(q());
        let c = Complex::adjoint(&p);
        assert!(c.delta(&MultiTensor::from_matrix(&p.d)).unwrap().is_zero());
        let di = c.delta(&id_cochain(2)).unwrap();
        assert_eq!(&di, p.algebra.mu());
        assert_eq!(di.value(&[0, 0]), &[q().one(), q().zero()]);
        let mat = c.matrix(Operator::Hoch, 1).unwrap();
        assert_eq!((mat.rows(), mat.cols()), (8, 4));
        assert!(crate::linalg::is_zero_vector(&mat.apply(MultiTensor::from_matrix(&p.d).entries())));
        let z = Complex::adjoint(&fix0(q()));
        assert!(z.delta(&MultiTensor::cochain(q(), 2, 1, 1).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn modified_hochschild_examples() {
        let p = fixd(q());
        let c = Complex::adjoint(&p);
        let v = c.delta_m(&id_cochain(2)).unwrap();
        let expect = p.algebra.mu().post_compose(&p.r.scale(&q().int(-2)));
        assert_eq!(v, expect);
        assert_eq!(v.value(&[0, 0]), &[q().int(-2), q().zero()]);
        let lam0 = fix_lambda(dual_numbers(q()), &q().zero());
        let c0 = Complex::adjoint(&lam0);
        assert!(c0.delta_m(&id_cochain(2)).unwrap().is_zero());
    }

    #[test]
    fn modified_hochschild_two_routes_agree() {
        for p in [fixd(q()), upper_triangular_pair(q(), 2), fix0(q())] {
            let c = Complex::adjoint(&p);
            let a = p.dim();
            for n in 1..=3 {
                for t in 0..crate::tensor::BasisTuples::uniform(a, n).count() * a {
                    let mut g = MultiTensor::cochain(q(), n, a, a).unwrap();
                    let mut entries = g.clone().into_entries();
                    entries[t] = q().int(t as i64 + 1);
                    entries[0] = q().int(3);
                    g = MultiTensor::from_flat(q(), &alloc::vec![a; n], a, entries).unwrap();
                    assert_eq!(c.delta_m(&g).unwrap(), c.delta_mhoch_direct(&g).unwrap());
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        let p = fixd(q());
        let c = Complex::adjoint(&p);
        assert!(c.phi(&id_cochain(2)).unwrap().is_zero());
        assert!(c.phi(&MultiTensor::from_matrix(&p.d)).unwrap().is_zero());
        assert!(c.phi(p.algebra.mu()).unwrap().is_zero());
        let printed = Complex::adjoint(&p).with_phi(PhiConvention::PRINTED);
        assert!(!printed.phi(p.algebra.mu()).unwrap().is_zero());
    }

    #[test]
    fn delta_op_examples() {
        let p = fixd(q());
        let c = Complex::adjoint(&p);
        assert!(c.delta_op(&id_cochain(2)).unwrap().is_zero());
        assert!(c.delta_op(&MultiTensor::from_matrix(&p.r)).unwrap().is_zero());
        assert!(c.delta_op(p.algebra.mu()).unwrap().is_zero());
    }

    #[test]
    fn partial_and_big_d_examples() {
        let p = fixd(q());
        let c = Complex::adjoint(&p);
        let d = MultiTensor::from_matrix(&p.d);
        let pd = c.partial(&CochainMrbaa::single(d.clone())).unwrap();
        assert!(pd.is_zero());
        let pi = c.partial(&CochainMrbaa::single(id_cochain(2))).unwrap();
        assert_eq!(&pi.f, p.algebra.mu());
        assert!(pi.g.unwrap().is_zero());
        assert!(c.big_d(&CochainMrbad::single(d.clone())).unwrap().is_zero());
        let zero2 = MultiTensor::cochain(q(), 2, 2, 2).unwrap();
        let zero1 = MultiTensor::cochain(q(), 1, 2, 2).unwrap();
        let c2 = CochainMrbad::degree2(zero2, zero1, d);
        assert!(c.big_d(&c2).unwrap().is_zero());
    }

    #[test]
    fn complex_squares_to_zero_on_fixtures() {
        for p in [fixd(q()), fix0(q()), upper_triangular_pair(q(), 1)] {
            let c = Complex::adjoint(&p);
            for n in 1..=3 {
                let prod = c.matrix(Operator::BigD, n + 1).unwrap().mul(&c.matrix(Operator::BigD, n).unwrap());
                assert!(prod.is_zero(), "degree {n}");
            }
        }
        let z = Complex::adjoint(&fix0(q()));
        assert!(z.matrix(Operator::BigD, 1).unwrap().is_zero());
    }

    #[test]
    fn cohomology_of_zero_pair() {
        let z = Complex::adjoint(&fix0(q()));
        let h1 = z.cohomology(1).unwrap();
        assert_eq!((h1.dim_cocycles, h1.dim_coboundaries, h1.dim_h), (1, 0, 1));
        for n in 2..=3 {
            let h = z.cohomology(n).unwrap();
            assert_eq!(h.dim_h, mrbad_dim(n, 1, 1));
        }
        assert!(z.cohomology(4).is_err());
        assert!(z.matrix(Operator::BigD, 5).is_err());
    }

    #[test]
    fn cohomology_representatives_are_cocycles() {
        let c = Complex::adjoint(&fixd(q()));
        for n in 1..=3 {
            let h = c.cohomology(n).unwrap();
            assert_eq!(h.dim_h, h.representatives.len());
            for rep in &h.representatives {
                assert!(c.is_cocycle(rep).unwrap());
            }
        }
    }

    #[test]
    fn flatten_matches_direct_application() {
        let p = upper_triangular_pair(q(), 2);
        let c = Complex::adjoint(&p);
        let (a, m) = (3, 3);
        for n in 1..=2 {
            for op in Operator::ALL {
                let mat = c.matrix(op, n).unwrap();
                let (dom, _) = operator_dims(op, n, a, m);
                let v: Vector = (0..dom).map(|i| q().int((i as i64 * 7 + 3) % 5 - 2)).collect();
                assert_eq!(mat.apply(&v), c.apply_operator(op, n, &v).unwrap(), "{op:?}");
            }
        }
    }
}
