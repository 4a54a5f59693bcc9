//! Recovering the even-subset coefficient of `φⁿ` from the requirement that
//! `φ` be a chain map and that `φ²(μ)` vanish on adjoint coefficients.

use alloc::vec::Vec;
use core::fmt;

use super::{Complex, Differentials, Operator, PhiConvention};
use crate::error::Result;
use crate::structures::{Bimodule, MrbPair};

/// `φⁿ⁺¹∘δⁿ = δⁿ_m∘φⁿ` as a matrix identity.
pub fn chain_map_holds(c: &Complex, n: usize) -> Result<bool> {
    let lhs = c.matrix(Operator::Phi, n + 1)?.mul(&c.matrix(Operator::Hoch, n)?);
    let rhs = c.matrix(Operator::MHoch, n)?.mul(&c.matrix(Operator::Phi, n)?);
    Ok(lhs == rhs)
}

/// `φ²(μ) = 0` with adjoint coefficients.
pub fn phi_kills_product(pair: &MrbPair, conv: PhiConvention) -> Result<bool> {
    let c = Complex::adjoint(pair).with_phi(conv);
    Ok(c.phi(pair.algebra.mu())?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateOutcome {
    pub convention: PhiConvention,
    pub chain_map_checked: usize,
    pub chain_map_failures: usize,
    pub product_checked: usize,
    pub product_failures: usize,
}

impl CandidateOutcome {
    pub fn passes(&self) -> bool {
        self.chain_map_failures == 0 && self.product_failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    pub instances: usize,
    /// Instances with `κ ≠ 0`; only these separate the candidates.
    pub nonzero_weight: usize,
    pub degrees: Vec<usize>,
    pub outcomes: Vec<CandidateOutcome>,
}

impl CalibrationReport {
    /// The unique passing candidate, if exactly one passes.
    pub fn winner(&self) -> Option<PhiConvention> {
        let mut passing = self.outcomes.iter().filter(|o| o.passes());
        let first = passing.next()?;
        if passing.next().is_some() {
            return None;
        }
        Some(first.convention)
    }
}

/// Tests every candidate convention on every instance in the given degrees.
pub fn calibrate(instances: &[(MrbPair, Bimodule)], degrees: &[usize]) -> Result<CalibrationReport> {
    let mut outcomes = Vec::new();
    for conv in PhiConvention::candidates() {
        let mut o = CandidateOutcome {
            convention: conv,
            chain_map_checked: 0,
            chain_map_failures: 0,
            product_checked: 0,
            product_failures: 0,
        };
        for (pair, bim) in instances {
            let c = Complex::new(pair, bim)?.with_phi(conv);
            for &n in degrees {
                o.chain_map_checked += 1;
                if !chain_map_holds(&c, n)? {
                    o.chain_map_failures += 1;
                }
            }
            o.product_checked += 1;
            if !phi_kills_product(pair, conv)? {
                o.product_failures += 1;
            }
        }
        outcomes.push(o);
    }
    Ok(CalibrationReport {
        instances: instances.len(),
        nonzero_weight: instances.iter().filter(|(p, _)| !p.kappa.is_zero()).count(),
        degrees: degrees.to_vec(),
        outcomes,
    })
}

impl fmt::Display for CalibrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "instances: {} ({} with nonzero weight), degrees {:?}",
            self.instances, self.nonzero_weight, self.degrees
        )?;
        writeln!(f)?;
        writeln!(f, "| even-subset term | chain map failures | φ²(μ) ≠ 0 | verdict |")?;
        writeln!(f, "|---|---|---|---|")?;
        for o in &self.outcomes {
            writeln!(
                f,
                "| `{}` | {}/{} | {}/{} | {} |",
                o.convention,
                o.chain_map_failures,
                o.chain_map_checked,
                o.product_failures,
                o.product_checked,
                if o.passes() { "pass" } else { "fail" }
            )?;
        }
        writeln!(f)?;
        match self.winner() {
            Some(w) => write!(f, "unique passing convention: `{w}`"),
            None => write!(f, "no unique passing convention"),
        }
    }
}
