use alloc::string::String;

use thiserror::Error;

use crate::report::CheckReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape: {0}")]
    Shape(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("inexact-scalar: {0:?} is not an exact literal")]
    InexactScalar(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("tensor with {entries} entries exceeds the cap of {cap}")]
    TooLarge { entries: u128, cap: usize },
    #[error("degree {degree} outside the supported range {min}..={max}")]
    Degree { degree: usize, min: usize, max: usize },
    #[error("kappa-mismatch: {left} vs {right}")]
    KappaMismatch { left: String, right: String },
    /// A required structure failed one of its defining identities.
    #[error("invalid {what}: {report}")]
    Invalid { what: &'static str, report: CheckReport },
    #[error("not a section: p∘s differs from the identity")]
    NotASection,
    #[error("cocycle not closed: {0}")]
    NotClosed(String),
    #[error("not-a-deformation: order {order} coefficient is not a 2-cocycle")]
    NotADeformation { order: usize },
    #[error("characteristic {p} too small for skew-symmetrization in degree {degree}")]
    Characteristic { p: u32, degree: usize },
    #[error("too many classes to enumerate: {0}")]
    Enumeration(String),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Error {
        Error::Shape(msg.into())
    }
}
