//! Unitary triangularization with a prescribed eigenvalue order.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::eigen::{cluster_eigenvalues, eigenvalues};
use super::solve::nullspace;
use super::svd::singular_values_f64;
use super::unitary::{complete_to_unitary, unit_vector_in_span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangularShape {
    Lower,
    Upper,
}

/// How to order the diagonal of the triangular factor.
#[derive(Debug, Clone)]
pub enum EigenOrderSpec<S> {
    /// Canonical lexicographic order on the distinct eigenvalues.
    Lex,
    /// Explicit order of the distinct eigenvalues.
    Explicit(Vec<S>),
}

#[derive(Debug, Clone)]
pub struct SchurDecomposition<S: Scalar> {
    pub q: Mat<S>,
    pub t: Mat<S>,
    /// Diagonal of `t` in order.
    pub diagonal: Vec<S>,
}

/// Eigenvalues of `m` grouped per the order spec, expanded with multiplicity.
fn diagonal_sequence<S: Scalar>(
    m: &Mat<S>,
    order: &EigenOrderSpec<S>,
    pol: &TolerancePolicy,
) -> Result<Vec<S>> {
    let eigs = eigenvalues(m, pol)?;
    let clusters = cluster_eigenvalues(&eigs, pol)?;
    let ordered: Vec<(S, usize)> = match order {
        EigenOrderSpec::Lex => clusters,
        EigenOrderSpec::Explicit(list) => {
            let mut remaining = clusters;
            let mut out = Vec::new();
            for want in list {
                let pos = remaining
                    .iter()
                    .position(|(v, _)| {
                        if S::EXACT {
                            v == want
                        } else {
                            v.approx_eq(want, pol.cluster_eps.max(1e-12))
                        }
                    })
                    .ok_or_else(|| {
                        Error::ContractViolation(format!(
                            "prescribed eigenvalue {want} is not in the spectrum"
                        ))
                    })?;
                out.push(remaining.remove(pos));
            }
            if !remaining.is_empty() {
                return Err(Error::ContractViolation(format!(
                    "prescribed order misses {} distinct eigenvalue(s)",
                    remaining.len()
                )));
            }
            out
        }
    };
    let mut diag = Vec::new();
    for (v, k) in ordered {
        for _ in 0..k {
            diag.push(v.clone());
        }
    }
    Ok(diag)
}

/// An eigenvector (unit norm) of `m` for eigenvalue `lambda`.
fn unit_eigenvector<S: Scalar>(m: &Mat<S>, lambda: &S, pol: &TolerancePolicy) -> Result<Vec<S>> {
    let n = m.rows();
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] = shifted[(i, i)].clone() - lambda.clone();
    }
    if S::EXACT {
        let space = nullspace(&shifted, pol);
        if space.cols() == 0 {
            return Err(Error::Internal(format!("no kernel at claimed eigenvalue {lambda}")));
        }
        unit_vector_in_span(&space, pol)
    } else {
        // smallest right singular vector is a robust eigenvector estimate
        let conv = Mat::<num_complex::Complex64>::from_fn(n, n, |r, c| {
            num_complex::Complex64::new(shifted[(r, c)].re_f64(), shifted[(r, c)].im_f64())
        });
        let (_, _, v) = super::svd::hestenes_svd(&conv);
        let col = v.col(n - 1);
        Ok(col.into_iter().map(|z| S::from_f64(z.re, z.im)).collect())
    }
}

/// Upper-triangular Schur form with prescribed diagonal, by deflation.
fn schur_upper<S: Scalar>(m: &Mat<S>, diag: &[S], pol: &TolerancePolicy) -> Result<Mat<S>> {
    let n = m.rows();
    let mut q = Mat::<S>::identity(n);
    let mut active = m.clone();
    for (k, lambda) in diag.iter().enumerate() {
        if active.rows() == 0 {
            break;
        }
        let v = unit_eigenvector(&active, lambda, pol)?;
        let w = complete_to_unitary(&Mat::from_cols(&[v]), pol)?;
        let reduced = w.adjoint().matmul(&active).matmul(&w);
        // embed W into the full transform
        let mut full = Mat::<S>::identity(n);
        full.set_block(k, k, &w);
        q = q.matmul(&full);
        active = reduced.block(1, reduced.rows(), 1, reduced.cols());
    }
    Ok(q)
}

/// Ordered Schur decomposition: Q unitary with Q* M Q triangular of the
/// requested shape and the requested diagonal order.
pub fn schur_ordered<S: Scalar>(
    m: &Mat<S>,
    order: &EigenOrderSpec<S>,
    shape: TriangularShape,
    pol: &TolerancePolicy,
) -> Result<SchurDecomposition<S>> {
    assert!(m.is_square(), "schur_ordered needs a square matrix");
    super::solve::check_finite(m)?;
    let n = m.rows();
    let mut diag = diagonal_sequence(m, order, pol)?;
    let q = match shape {
        TriangularShape::Upper => schur_upper(m, &diag, pol)?,
        TriangularShape::Lower => {
            // upper form with reversed diagonal, conjugated by the flip
            let reversed: Vec<S> = diag.iter().rev().cloned().collect();
            let q_up = schur_upper(m, &reversed, pol)?;
            let flip: Vec<usize> = (0..n).rev().collect();
            q_up.matmul(&Mat::permutation(&flip))
        }
    };
    let mut t = q.adjoint().matmul(m).matmul(&q);
    // scrub the structurally-zero triangle (float residue), keep honesty by
    // checking it is negligible first
    let tol = pol.scaled_zero(m.frobenius_norm()).max(if S::EXACT { 0.0 } else { 1e-9 });
    for r in 0..n {
        for c in 0..n {
            let structural_zero = match shape {
                TriangularShape::Upper => r > c,
                TriangularShape::Lower => r < c,
            };
            if structural_zero {
                if !t[(r, c)].is_zero_tol(tol) {
                    return Err(Error::NumericInconsistency(format!(
                        "triangular residue {} at ({r},{c})",
                        t[(r, c)]
                    )));
                }
                t[(r, c)] = S::zero();
            }
        }
    }
    if S::EXACT {
        for (i, d) in diag.iter().enumerate() {
            if &t[(i, i)] != d {
                return Err(Error::Internal("diagonal does not match prescribed order".into()));
            }
        }
    } else {
        diag = (0..n).map(|i| t[(i, i)].clone()).collect();
    }
    Ok(SchurDecomposition { q, t, diagonal: diag })
}

/// True when the spectra of two matrices are disjoint under the policy.
pub fn spectra_disjoint<S: Scalar>(
    a: &Mat<S>,
    b: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<bool> {
    let ea = eigenvalues(a, pol)?;
    let eb = eigenvalues(b, pol)?;
    for x in &ea {
        for y in &eb {
            let close = if S::EXACT { x == y } else { x.approx_eq(y, pol.cluster_eps) };
            if close {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Float-backend helper: smallest singular value, used to sanity check
/// near-singularity where the exact backend tests exactly.
pub fn smallest_singular_value<S: Scalar>(m: &Mat<S>) -> f64 {
    singular_values_f64(m).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_complex::Complex64;

    type GQ = GaussianRational;

    #[test]
    fn diag_matrix_reorders() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[2, 0], &[0, 1]]);
        let dec =
            schur_ordered(&m, &EigenOrderSpec::Lex, TriangularShape::Upper, &pol).unwrap();
        assert_eq!(dec.t[(0, 0)], GQ::one());
        assert_eq!(dec.t[(1, 1)], GQ::from_int(2, 0));
        assert!(dec.q.adjoint().matmul(&dec.q).is_identity_tol(0.0));
        let back = dec.q.matmul(&dec.t).matmul(&dec.q.adjoint());
        assert!(back.approx_eq(&m, 0.0));
    }

    #[test]
    fn lower_jordan_block_fixed_point() {
        let pol = TolerancePolicy::exact();
        // J_2(0) in the lower-bidiagonal convention is already lower triangular
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 0], &[1, 0]]);
        let dec =
            schur_ordered(&m, &EigenOrderSpec::Lex, TriangularShape::Lower, &pol).unwrap();
        assert!(dec.t.approx_eq(&m, 0.0));
    }

    #[test]
    fn rotation_matrix_exact_diagonalizes() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let dec =
            schur_ordered(&m, &EigenOrderSpec::Lex, TriangularShape::Upper, &pol).unwrap();
        // -i precedes i
        assert_eq!(dec.t[(0, 0)], -GQ::i());
        assert_eq!(dec.t[(1, 1)], GQ::i());
        assert!(dec.q.adjoint().matmul(&dec.q).is_identity_tol(0.0));
        let back = dec.q.matmul(&dec.t).matmul(&dec.q.adjoint());
        assert!(back.approx_eq(&m, 0.0));
    }

    #[test]
    fn float_schur_reconstructs() {
        let pol = TolerancePolicy::float_default();
        let m: Mat<Complex64> = Mat::from_int_rows(&[&[1, 2, 3], &[0, 5, 1], &[0, 1, 5]]);
        let dec =
            schur_ordered(&m, &EigenOrderSpec::Lex, TriangularShape::Lower, &pol).unwrap();
        let back = dec.q.matmul(&dec.t).matmul(&dec.q.adjoint());
        assert!(back.approx_eq(&m, 1e-8 * m.frobenius_norm().max(1.0)));
        assert!(dec.q.adjoint().matmul(&dec.q).is_identity_tol(1e-10));
    }

    #[test]
    fn explicit_order_respected() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[2, 0], &[0, 1]]);
        let order = EigenOrderSpec::Explicit(vec![GQ::from_int(2, 0), GQ::one()]);
        let dec = schur_ordered(&m, &order, TriangularShape::Upper, &pol).unwrap();
        assert_eq!(dec.t[(0, 0)], GQ::from_int(2, 0));
        let bad = EigenOrderSpec::Explicit(vec![GQ::from_int(7, 0)]);
        assert!(schur_ordered(&m, &bad, TriangularShape::Upper, &pol).is_err());
    }
}
