//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by kernels and canonicalization routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input failed basic well-formedness (non-finite entries, bad dims).
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// A caller-facing precondition did not hold.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The statement being verified requires 0 < m < n.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// Iterative eigenvalue computation did not converge.
    #[error("eigenvalue iteration failed to converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// Two eigenvalue clusters are too close to separate under the policy.
    #[error("indeterminate spectrum: {0}")]
    IndeterminateSpectrum(String),

    /// The exact backend cannot represent the spectral data it needs
    /// (non-Gaussian-rational eigenvalues, or a unit vector whose squared
    /// norm is not a sum of two rational squares).
    #[error("unsupported spectrum in exact arithmetic: {0}")]
    UnsupportedSpectrum(String),

    /// Sylvester equation with intersecting spectra has no unique solution.
    #[error("no unique solution: spectra of the coefficient matrices intersect")]
    SharedEigenvalue,

    /// A structural search that must succeed on valid input found nothing;
    /// signals tolerance failure in the float backend.
    #[error("numeric inconsistency: {0}")]
    NumericInconsistency(String),

    /// An internal invariant broke; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
