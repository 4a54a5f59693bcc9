//! Exact linear algebra and cohomology for modified Rota-Baxter algebras
//! carrying a derivation, their bimodules, deformations and abelian
//! extensions. Scalars are rationals or residues mod a prime; nothing here
//! uses floating point.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod constructions;
pub mod deformation;
pub mod error;
pub mod extension;
pub mod fuzz;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod structures;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use report::{CheckReport, Violation};
pub use scalar::{Field, Scalar};
pub use tensor::MultiTensor;
