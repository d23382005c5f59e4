//! Scalar arithmetic abstraction: the exact Gaussian-rational backend, the
//! floating complex backend, and the tolerance policy every comparison in the
//! float backend goes through.

pub(crate) mod arith;
mod float;
mod gaussian;

pub use gaussian::GaussianRational;

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;

/// Thresholds for float-backend decisions. The exact backend uses
/// [`TolerancePolicy::exact`], which sets every threshold to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TolerancePolicy {
    /// Magnitude below which an entry is treated as zero (scaled by the
    /// Frobenius norm of the matrix under inspection where noted).
    pub zero_eps: f64,
    /// Radius for merging eigenvalues into one cluster.
    pub cluster_eps: f64,
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel_eps: f64,
}

impl TolerancePolicy {
    pub fn exact() -> Self {
        TolerancePolicy { zero_eps: 0.0, cluster_eps: 0.0, rank_rel_eps: 0.0 }
    }

    pub fn float_default() -> Self {
        TolerancePolicy { zero_eps: 1e-10, cluster_eps: 1e-8, rank_rel_eps: 1e-10 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("zero_eps", self.zero_eps),
            ("cluster_eps", self.cluster_eps),
            ("rank_rel_eps", self.rank_rel_eps),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(crate::error::Error::MalformedInput(format!(
                    "tolerance {name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Zero threshold scaled to a matrix of the given Frobenius norm.
    pub fn scaled_zero(&self, frob: f64) -> f64 {
        if frob > 1.0 {
            self.zero_eps * frob
        } else {
            self.zero_eps
        }
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy::float_default()
    }
}

/// A complex scalar usable by every kernel in the crate. Implemented by the
/// exact [`GaussianRational`] and by `num_complex::Complex64`.
///
/// The two hooks [`Scalar::inv_norm_scalar`] and [`Scalar::sqrt_positive`]
/// concentrate everything that separates the backends: the float versions
/// always succeed via `sqrt`, the exact versions succeed only when the value
/// is representable over the Gaussian rationals and report `None` otherwise.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_int(re: i64, im: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Lossless for the float backend; binary-exact rational for the exact
    /// backend (only meaningful in float-adjacent code paths).
    fn from_f64(re: f64, im: f64) -> Self;

    fn conj(&self) -> Self;
    /// Multiplicative inverse; None for zero.
    fn inv(&self) -> Option<Self>;
    /// |self|^2 as a (real) scalar, exact in the exact backend.
    fn abs2(&self) -> Self;

    fn is_zero_tol(&self, tol: f64) -> bool;
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn abs2_f64(&self) -> f64;
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;

    /// The lexicographic total order on C: by real part, then imaginary part.
    fn lex_cmp(&self, other: &Self) -> Ordering;

    fn real_part(&self) -> Self;
    fn is_real_tol(&self, tol: f64) -> bool;

    /// Rescale a direction vector in place to tame coordinate growth: the
    /// exact backend clears denominators and divides by the Gaussian-integer
    /// content, the float backend scales by the largest magnitude. Only
    /// valid where direction, not length, matters.
    fn normalize_direction(v: &mut [Self]);

    /// Some(c) with |c|^2 * x = 1, for real x > 0.
    fn inv_norm_scalar(x: &Self) -> Option<Self>;
    /// Some(s) with s^2 = x and s >= 0, for real x >= 0.
    fn sqrt_positive(x: &Self) -> Option<Self>;

    /// Split a positive real weight as x = |g|^2 * r with r the residual
    /// class of x modulo norms: a small squarefree integer product of primes
    /// congruent to 3 mod 4 (so r = 1 exactly when x is a norm). The float
    /// backend treats every weight as a norm. None when factoring stalls.
    fn weight_residual(x: &Self) -> Option<(Self, u64)>;

    /// Eigenvalues (with algebraic multiplicity) of the dense square matrix
    /// stored row-major in `data`.
    fn eigenvalues_flat(data: &[Self], n: usize, pol: &TolerancePolicy) -> Result<Vec<Self>>;

    fn is_one(&self) -> bool {
        self == &Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.clone() * inv)
    }
}

/// Sort eigenvalues into the canonical order: ascending by real part, then
/// by imaginary part.
pub fn sort_lex<S: Scalar>(values: &mut [S]) {
    values.sort_by(|a, b| a.lex_cmp(b));
}

pub(crate) use arith::pair_two_square_split;

/// The natural policy for a backend: all-zero thresholds when exact,
/// conventional dense-linear-algebra defaults when floating.
pub fn backend_policy<S: Scalar>() -> TolerancePolicy {
    if S::EXACT {
        TolerancePolicy::exact()
    } else {
        TolerancePolicy::float_default()
    }
}
