//! Dense Sylvester-type solver for the coupling equation X B - J X = C.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::solve::solve;

/// Solve X B - J X = C for X (J is p-by-p, B is q-by-q, C is p-by-q).
/// Unique solvability is equivalent to the spectra of J and B being
/// disjoint; a singular system reports `SharedEigenvalue`.
pub fn sylvester_solve<S: Scalar>(
    j: &Mat<S>,
    b: &Mat<S>,
    c: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<Mat<S>> {
    assert!(j.is_square() && b.is_square());
    assert_eq!(c.rows(), j.rows(), "row mismatch");
    assert_eq!(c.cols(), b.cols(), "column mismatch");
    super::solve::check_finite(j)?;
    super::solve::check_finite(b)?;
    super::solve::check_finite(c)?;
    let p = j.rows();
    let q = b.rows();
    if p == 0 || q == 0 {
        return Ok(Mat::zeros(p, q));
    }
    // linear system on vec(X) with X stored row-major:
    // (XB)[r,s] = sum_k X[r,k] B[k,s];  (JX)[r,s] = sum_k J[r,k] X[k,s]
    let dim = p * q;
    let mut a = Mat::<S>::zeros(dim, dim);
    let mut rhs = Mat::<S>::zeros(dim, 1);
    for r in 0..p {
        for s in 0..q {
            let row = r * q + s;
            rhs[(row, 0)] = c[(r, s)].clone();
            for k in 0..q {
                let col = r * q + k;
                a[(row, col)] = a[(row, col)].clone() + b[(k, s)].clone();
            }
            for k in 0..p {
                let col = k * q + s;
                a[(row, col)] = a[(row, col)].clone() - j[(r, k)].clone();
            }
        }
    }
    // the operator is square, so inconsistency and non-uniqueness coincide
    let full_rank = super::solve::rank_rref(&a, pol) == dim;
    if !full_rank {
        return Err(Error::SharedEigenvalue);
    }
    let x = solve(&a, &rhs, pol)
        .ok_or(Error::SharedEigenvalue)?;
    Ok(Mat::from_fn(p, q, |r, s| x[(r * q + s, 0)].clone()))
}

/// Residual X B - J X - C, for verification in tests.
pub fn sylvester_residual<S: Scalar>(j: &Mat<S>, b: &Mat<S>, c: &Mat<S>, x: &Mat<S>) -> Mat<S> {
    x.matmul(b).sub(&j.matmul(x)).sub(c)
}
