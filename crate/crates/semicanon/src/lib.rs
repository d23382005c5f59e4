//! Canonical forms of linear operators, Hermitian forms, and systems of
//! linear mappings on semiunitary spaces (complex spaces carrying a positive
//! semidefinite scalar product).
//!
//! The crate ships two interchangeable scalar backends: exact Gaussian
//! rationals for structural decisions and certified canonical-form equality,
//! and floating complex numbers governed by a [`scalar::TolerancePolicy`].

pub mod error;
pub mod kv;
pub mod opcanon;
pub mod randgen;
pub mod kernel;
pub mod mat;
pub mod scalar;

pub use error::{Error, Result};
pub use mat::Mat;
pub use scalar::{GaussianRational, Scalar, TolerancePolicy};
