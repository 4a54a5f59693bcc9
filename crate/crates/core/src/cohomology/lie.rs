//! The Lie side: skew-symmetrization, the Chevalley-Eilenberg differential
//! and its operator analogue, and the commuting squares relating them to
//! the associative complex.

use alloc::vec::Vec;

use super::{
    delta_op_with, phi_with, CochainMrbaa, CochainMrbad, Complex, Differentials, Operator, PhiConvention,
};
use crate::constructions::{rho_representation, LiePair, LieRepresentation};
use crate::error::{Error, Result};
use crate::linalg::{axpy, basis_vector, Matrix, Vector};
use crate::scalar::{Field, Scalar};
use crate::tensor::{flatten_linear_operator, MultiTensor};

/// Permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), inversions % 2 == 0));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut alloc::vec![false; n], &mut out);
    out
}

/// `S_n f(a₁..a_n) = Σ_σ sgn(σ) f(a_σ(1), …, a_σ(n))`, without `1/n!`.
pub fn skew_symmetrize(f: &MultiTensor) -> Result<MultiTensor> {
    let n = f.arity();
    let perms = permutations(n);
    MultiTensor::from_fn(f.field(), f.shape(), f.cod(), |t| {
        let mut out = crate::linalg::zero_vector(f.field(), f.cod());
        let one = f.field().one();
        let minus = -one.clone();
        let mut idx = alloc::vec![0usize; n];
        for (p, even) in &perms {
            for k in 0..n {
                idx[k] = t[p[k]];
            }
            axpy(&mut out, if *even { &one } else { &minus }, f.value(&idx));
        }
        out
    })
}

/// `𝒮_n = (S_n, S_{n-1})`.
pub fn skew_pair(c: &CochainMrbaa) -> Result<CochainMrbaa> {
    Ok(CochainMrbaa {
        f: skew_symmetrize(&c.f)?,
        g: match &c.g {
            Some(g) => Some(skew_symmetrize(g)?),
            None => None,
        },
    })
}

/// `𝔖_n = (𝒮_n, 𝒮_{n-1})`.
pub fn skew_full(c: &CochainMrbad) -> Result<CochainMrbad> {
    Ok(CochainMrbad {
        top: skew_pair(&c.top)?,
        bottom: match &c.bottom {
            Some(b) => Some(skew_pair(b)?),
            None => None,
        },
    })
}

/// `δⁿf(x₁..x_{n+1}) = (-1)^{n+1} [Σ_i (-1)^{i+1} ρ(x_i) f(..x̂_i..)
///   + Σ_{i<j} (-1)^{i+j} f([x_i,x_j], ..x̂_i..x̂_j..)]`.
///
/// The overall sign matches the associative differential under `S`.
pub fn delta_ce_with(bracket: &MultiTensor, rho: &MultiTensor, f: &MultiTensor) -> Result<MultiTensor> {
    let (a, m) = (bracket.cod(), rho.cod());
    f.check_shape(&alloc::vec![a; f.arity()], m, "cochain")?;
    let n = f.arity();
    let field = f.field();
    let one = field.one();
    let minus = -one.clone();
    let e: Vec<Vector> = (0..a).map(|i| basis_vector(field, a, i)).collect();
    let overall_plus = n % 2 == 1;
    let sign = |k: usize| if (k % 2 == 0) == overall_plus { &one } else { &minus };
    MultiTensor::from_fn(field, &alloc::vec![a; n + 1], m, |t| {
        let mut out = crate::linalg::zero_vector(field, m);
        for i in 0..=n {
            let rest: Vec<usize> = t.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &x)| x).collect();
            let v = rho.apply(&[&e[t[i]], f.value(&rest)]);
            // 1-based (-1)^{i+1} becomes (-1)^i for 0-based i
            axpy(&mut out, sign(i), &v);
        }
        for i in 0..=n {
            for j in i + 1..=n {
                let br = bracket.value(&[t[i], t[j]]);
                let mut args: Vec<&[Scalar]> = Vec::with_capacity(n);
                args.push(br);
                for (k, x) in t.iter().enumerate() {
                    if k != i && k != j {
                        args.push(&e[*x]);
                    }
                }
                axpy(&mut out, sign(i + j), &f.apply(&args));
            }
        }
        out
    })
}

/// A Lie pair with a representation, plus its induced structure.
#[derive(Clone, Debug)]
pub struct LieComplex {
    lie: LiePair,
    rep: LieRepresentation,
    induced: LiePair,
    induced_rep: LieRepresentation,
    phi: PhiConvention,
}

impl LieComplex {
    pub fn new(lie: &LiePair) -> Result<LieComplex> {
        let rep = lie
            .rep
            .clone()
            .ok_or_else(|| Error::shape("a Lie complex needs a representation"))?;
        let induced = lie.induced();
        let induced_rep = induced.rep.clone().expect("induced keeps the representation");
        Ok(LieComplex {
            lie: lie.clone(),
            rep,
            induced,
            induced_rep,
            phi: PhiConvention::default(),
        })
    }

    /// The commutator pair of the associative complex with `ρ = l - r`.
    pub fn from_complex(c: &Complex) -> Result<LieComplex> {
        Ok(LieComplex::new(&rho_representation(c.pair(), c.bimodule())?)?.with_phi(c.phi_convention()))
    }

    pub fn with_phi(mut self, conv: PhiConvention) -> LieComplex {
        self.phi = conv;
        self
    }

    pub fn lie(&self) -> &LiePair {
        &self.lie
    }
}

impl Differentials for LieComplex {
    fn field(&self) -> Field {
        self.lie.field()
    }

    fn dims(&self) -> (usize, usize) {
        (self.lie.dim(), self.rep.dim())
    }

    fn delta(&self, f: &MultiTensor) -> Result<MultiTensor> {
        delta_ce_with(&self.lie.bracket, &self.rep.rho, f)
    }

    fn delta_m(&self, g: &MultiTensor) -> Result<MultiTensor> {
        delta_ce_with(&self.induced.bracket, &self.induced_rep.rho, g)
    }

    fn phi(&self, f: &MultiTensor) -> Result<MultiTensor> {
        phi_with(&self.lie.r, &self.rep.r_m, &self.lie.kappa, self.phi, f)
    }

    fn delta_op(&self, f: &MultiTensor) -> Result<MultiTensor> {
        delta_op_with(&self.lie.d, &self.rep.d_m, f)
    }
}

/// Matrix of the skew-symmetrization matching an operator's domain layout
/// in degree `n`.
pub fn skew_matrix(field: Field, op: Operator, n: usize, a: usize, m: usize) -> Result<Matrix> {
    let (dom, _) = super::operator_dims(op, n, a, m);
    flatten_linear_operator(field, dom, dom, |v| match op {
        Operator::Partial | Operator::DeltaPair => {
            Ok(skew_pair(&CochainMrbaa::from_flat(field, n, a, m, v)?)?.flatten())
        }
        Operator::BigD => Ok(skew_full(&CochainMrbad::from_flat(field, n, a, m, v)?)?.flatten()),
        _ => Ok(skew_symmetrize(&MultiTensor::from_flat(field, &alloc::vec![a; n], m, v.to_vec())?)?.into_entries()),
    })
}

/// Outcome of the three symmetrization squares in one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareOutcome {
    pub degree: usize,
    /// `S_{n+1}∘δ_Hoch = δ_CE∘S_n`.
    pub hochschild: bool,
    /// `𝒮_{n+1}∘∂ = ∂_Lie∘𝒮_n`.
    pub operator_pairs: bool,
    /// `𝔖_{n+1}∘𝔇 = 𝔇_Lie∘𝔖_n`.
    pub full: bool,
}

impl SquareOutcome {
    pub fn all(&self) -> bool {
        self.hochschild && self.operator_pairs && self.full
    }
}

/// Checks the symmetrization squares in degree `n`. Requires the
/// characteristic to exceed `n + 1` in positive characteristic.
pub fn symmetrization_squares(c: &Complex, n: usize) -> Result<SquareOutcome> {
    let field = c.field();
    let p = field.characteristic();
    if p != 0 && (p as usize) <= n + 1 {
        return Err(Error::Characteristic { p, degree: n + 1 });
    }
    let lie = LieComplex::from_complex(c)?;
    let (a, m) = c.dims();
    let square = |op: Operator| -> Result<bool> {
        let lhs = skew_matrix(field, op, n + 1, a, m)?.mul(&c.matrix(op, n)?);
        let rhs = lie.matrix(op, n)?.mul(&skew_matrix(field, op, n, a, m)?);
        Ok(lhs == rhs)
    };
    Ok(SquareOutcome {
        degree: n,
        hochschild: square(Operator::Hoch)?,
        operator_pairs: square(Operator::Partial)?,
        full: square(Operator::BigD)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::commutator_lie_pair;
    use crate::structures::fixtures::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().filter(|(_, even)| *even).count(), 3);
        assert_eq!(p[1], (alloc::vec![0, 2, 1], false));
    }

    #[test]
    fn skew_symmetrization_examples() {
        let f = MultiTensor::from_matrix(&Matrix::from_ints(q(), &[&[1, 2], &[3, 4]]));
        assert_eq!(skew_symmetrize(&f).unwrap(), f);
        assert!(skew_symmetrize(fixd(q()).algebra.mu()).unwrap().is_zero());
        let ut = upper_triangular_pair(q(), 1);
        assert_eq!(skew_symmetrize(ut.algebra.mu()).unwrap(), commutator_lie_pair(&ut).bracket);
    }

    #[test]
    fn ce_differential_squares_to_zero() {
        let ut = upper_triangular_pair(q(), 2);
        let lie = LieComplex::from_complex(&Complex::adjoint(&ut)).unwrap();
        let d1 = lie.matrix(Operator::Hoch, 1).unwrap();
        let d2 = lie.matrix(Operator::Hoch, 2).unwrap();
        let s1 = skew_matrix(q(), Operator::Hoch, 1, 3, 3).unwrap();
        let s2 = skew_matrix(q(), Operator::Hoch, 2, 3, 3).unwrap();
        assert!(d2.mul(&s2).mul(&d1).mul(&s1).is_zero());
        let fd = LieComplex::from_complex(&Complex::adjoint(&fixd(q()))).unwrap();
        let id = MultiTensor::from_matrix(&Matrix::identity(q(), 2));
        assert!(fd.delta(&id).unwrap().is_zero());
    }

    #[test]
    fn squares_commute_on_fixtures() {
        for p in [fixd(q()), upper_triangular_pair(q(), 2), upper_triangular_pair(q(), -1)] {
            let c = Complex::adjoint(&p);
            for n in 1..=2 {
                assert!(symmetrization_squares(&c, n).unwrap().all(), "degree {n}");
            }
        }
    }

    #[test]
    fn small_characteristic_is_rejected() {
        let f2 = Field::prime(2).unwrap();
        let c = Complex::adjoint(&fixd(f2));
        assert!(matches!(symmetrization_squares(&c, 1), Err(Error::Characteristic { .. })));
    }
}
