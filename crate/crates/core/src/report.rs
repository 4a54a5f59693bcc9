//! Pass/fail reports produced by the identity checkers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Scalar;

/// One failing evaluation: which identity, on which basis tuple, and the
/// nonzero residual vector (left side minus right side).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    /// Basis indices (0-based) in argument order.
    pub witness: Vec<usize>,
    pub residual: Vec<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn pass() -> CheckReport {
        CheckReport::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Records a violation when `residual` is nonzero.
    pub fn record(&mut self, identity: &str, witness: &[usize], residual: Vec<Scalar>) {
        if residual.iter().any(|x| !x.is_zero()) {
            self.violations.push(Violation {
                identity: identity.into(),
                witness: witness.to_vec(),
                residual,
            });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
    }

    pub fn failed_identities(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for v in &self.violations {
            if !names.contains(&v.identity.as_str()) {
                names.push(&v.identity);
            }
        }
        names
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "pass"),
            Some(v) => {
                write!(f, "fail: {} at {:?}, residual (", v.identity, v.witness)?;
                for (i, x) in v.residual.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")?;
                if self.violations.len() > 1 {
                    write!(f, " and {} more", self.violations.len() - 1)?;
                }
                Ok(())
            }
        }
    }
}
