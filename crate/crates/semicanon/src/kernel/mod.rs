//! Dense factorization kernels shared by every reduction in the crate.

pub mod eigen;
pub mod solve;
pub mod svd;
pub mod unitary;

pub mod inertia;
pub mod jordan;
pub mod schur;
pub mod staircase;
pub mod sylvester;

use crate::error::Result;
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

/// Numerical rank: pivot count in the exact backend, singular values above
/// the relative cutoff in the float backend.
pub fn rank<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Result<usize> {
    solve::check_finite(m)?;
    if S::EXACT {
        return Ok(solve::rank_rref(m, pol));
    }
    let sigma = svd::singular_values_f64(m);
    let cutoff = pol.rank_rel_eps * sigma.first().copied().unwrap_or(0.0).max(1.0);
    Ok(sigma.iter().filter(|&&s| s > cutoff).count())
}

/// Right kernel basis: elimination in the exact backend, small singular
/// vectors in the float backend.
pub fn kernel_basis<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Mat<S> {
    if S::EXACT {
        return solve::nullspace(m, pol);
    }
    let conv = Mat::<num_complex::Complex64>::from_fn(m.rows(), m.cols(), |r, c| {
        num_complex::Complex64::new(m[(r, c)].re_f64(), m[(r, c)].im_f64())
    });
    let (_, sigma, v) = svd::hestenes_svd(&conv);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cutoff = (pol.rank_rel_eps * smax).max(pol.cluster_eps * (1.0 + smax));
    let mut cols = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        if s <= cutoff {
            cols.push(
                v.col(k).into_iter().map(|z| S::from_f64(z.re, z.im)).collect::<Vec<_>>(),
            );
        }
    }
    if cols.is_empty() {
        Mat::zeros(m.cols(), 0)
    } else {
        Mat::from_cols(&cols)
    }
}

/// Unitary diagonalization of a normal matrix: Q unitary and the diagonal
/// groups (eigenvalue, multiplicity) in lexicographic order, with
/// Q* M Q = diag. Errors when eigenspaces do not fill the dimension.
pub fn normal_diagonalize<S: Scalar>(
    m: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<(Mat<S>, Vec<(S, usize)>)> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Ok((Mat::identity(0), Vec::new()));
    }
    let eigs = eigen::eigenvalues(m, pol)?;
    let clusters = eigen::cluster_eigenvalues(&eigs, pol)?;
    let mut cols: Vec<Vec<S>> = Vec::new();
    let mut groups = Vec::new();
    for (lambda, _) in &clusters {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)].clone() - lambda.clone();
        }
        let space = kernel_basis(&shifted, pol);
        let basis = unitary::orthonormal_basis(&space, pol)?;
        for c in 0..basis.cols() {
            cols.push(basis.col(c));
        }
        groups.push((lambda.clone(), basis.cols()));
    }
    if cols.len() != n {
        return Err(crate::error::Error::NumericInconsistency(format!(
            "eigenspaces of a claimed normal matrix span {} of {n} dimensions",
            cols.len()
        )));
    }
    Ok((Mat::from_cols(&cols), groups))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_complex::Complex64;

    #[test]
    fn rank_examples() {
        let pol = TolerancePolicy::exact();
        let id3: Mat<GaussianRational> = Mat::identity(3);
        assert_eq!(rank(&id3, &pol).unwrap(), 3);
        let z: Mat<GaussianRational> = Mat::zeros(2, 4);
        assert_eq!(rank(&z, &pol).unwrap(), 0);
        let m: Mat<GaussianRational> = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m, &pol).unwrap(), 1);

        let fpol = TolerancePolicy::float_default();
        let mf: Mat<Complex64> = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&mf, &fpol).unwrap(), 1);
    }

    #[test]
    fn rank_rejects_non_finite() {
        let fpol = TolerancePolicy::float_default();
        let mut m: Mat<Complex64> = Mat::identity(2);
        m[(0, 0)] = Complex64::new(f64::NAN, 0.0);
        assert!(rank(&m, &fpol).is_err());
    }
}
