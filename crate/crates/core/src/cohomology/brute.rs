//! Exhaustive counting of cocycles and coboundaries over a finite field,
//! independent of any rank computation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{mrbad_dim, CochainMrbad, Complex, Differentials, MAX_COHOMOLOGY_DEGREE};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest cochain space that will be enumerated.
pub const BRUTE_FORCE_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceCounts {
    pub degree: usize,
    pub order: u64,
    /// `|Zⁿ|`
    pub cocycles: u64,
    /// `|Bⁿ|`
    pub coboundaries: u64,
}

impl BruteForceCounts {
    /// `log_q |Zⁿ| - log_q |Bⁿ|`.
    pub fn dim_h(&self) -> usize {
        log(self.order, self.cocycles) - log(self.order, self.coboundaries)
    }

    pub fn dim_cocycles(&self) -> usize {
        log(self.order, self.cocycles)
    }

    pub fn dim_coboundaries(&self) -> usize {
        log(self.order, self.coboundaries)
    }
}

fn log(q: u64, mut v: u64) -> usize {
    let mut k = 0;
    while v > 1 {
        debug_assert_eq!(v % q, 0);
        v /= q;
        k += 1;
    }
    k
}

fn residue(s: &Scalar) -> u32 {
    match s {
        Scalar::Residue { value, .. } => *value,
        Scalar::Rational(_) => unreachable!("finite fields only"),
    }
}

/// Calls `visit` on every element of `Cⁿ`.
fn for_each_cochain(c: &Complex, n: usize, visit: &mut dyn FnMut(&CochainMrbad) -> Result<()>) -> Result<()> {
    let f = c.field();
    let (a, m) = c.dims();
    let q = f
        .order()
        .ok_or_else(|| Error::Enumeration(format!("{f} is infinite")))?;
    let dim = mrbad_dim(n, a, m);
    let size = (0..dim).try_fold(1u64, |acc, _| acc.checked_mul(q));
    match size {
        Some(s) if s <= BRUTE_FORCE_CAP => {}
        _ => return Err(Error::Enumeration(format!("{q}^{dim} cochains in degree {n}"))),
    }
    let elems: Vec<Scalar> = f.elements().expect("finite").collect();
    let mut digits = alloc::vec![0usize; dim];
    loop {
        let v: Vec<Scalar> = digits.iter().map(|d| elems[*d].clone()).collect();
        visit(&CochainMrbad::from_flat(f, n, a, m, &v)?)?;
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(());
            }
            digits[k] += 1;
            if digits[k] < elems.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Counts `Zⁿ` by testing every cochain and `Bⁿ` as the set of images of
/// every `(n-1)`-cochain.
pub fn brute_force(c: &Complex, n: usize) -> Result<BruteForceCounts> {
    if n == 0 || n > MAX_COHOMOLOGY_DEGREE {
        return Err(Error::Degree {
            degree: n,
            min: 1,
            max: MAX_COHOMOLOGY_DEGREE,
        });
    }
    let order = c.field().order().unwrap_or(0);
    let mut cocycles = 0u64;
    for_each_cochain(c, n, &mut |x| {
        if c.big_d(x)?.is_zero() {
            cocycles += 1;
        }
        Ok(())
    })?;
    let coboundaries = if n == 1 {
        1
    } else {
        let mut seen = BTreeSet::new();
        for_each_cochain(c, n - 1, &mut |x| {
            seen.insert(c.big_d(x)?.flatten().iter().map(residue).collect::<Vec<u32>>());
            Ok(())
        })?;
        seen.len() as u64
    };
    Ok(BruteForceCounts {
        degree: n,
        order,
        cocycles,
        coboundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::structures::fixtures::*;

    #[test]
    fn dual_numbers_over_f2_match_ranks() {
        let f = Field::prime(2).unwrap();
        let c = Complex::adjoint(&fixd(f));
        for n in 1..=2 {
            let b = brute_force(&c, n).unwrap();
            let r = c.cohomology(n).unwrap();
            assert_eq!((b.dim_cocycles(), b.dim_coboundaries(), b.dim_h()), (r.dim_cocycles, r.dim_coboundaries, r.dim_h));
        }
        assert!(matches!(brute_force(&c, 3), Err(Error::Enumeration(_))));
    }
}
