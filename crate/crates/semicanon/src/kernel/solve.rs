//! Elimination primitives: reduced row echelon form and everything built on
//! it (rank, kernels, linear solves, inverses, determinants).

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

/// Threshold below which float pivots count as zero; the exact backend always
/// uses zero.
fn pivot_eps<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> f64 {
    if S::EXACT {
        0.0
    } else {
        let scale = m.max_abs().max(1.0);
        (pol.rank_rel_eps * scale).max(f64::MIN_POSITIVE)
    }
}

/// In-place reduced row echelon form. Returns the pivot columns.
pub fn rref_in_place<S: Scalar>(m: &mut Mat<S>, pol: &TolerancePolicy) -> Vec<usize> {
    let eps = pivot_eps(m, pol);
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // pick a pivot: exact takes the first nonzero entry, float the
        // largest magnitude
        let mut best: Option<(usize, f64)> = None;
        for r in pivot_row..rows {
            let mag = m[(r, col)].abs2_f64();
            if !m[(r, col)].is_zero_tol(eps) {
                if S::EXACT {
                    best = Some((r, mag));
                    break;
                }
                if best.map_or(true, |(_, bm)| mag > bm) {
                    best = Some((r, mag));
                }
            }
        }
        let Some((r, _)) = best else { continue };
        m.swap_rows(pivot_row, r);
        let inv = m[(pivot_row, col)].inv().expect("nonzero pivot");
        for c in col..cols {
            m[(pivot_row, c)] = inv.clone() * m[(pivot_row, c)].clone();
        }
        m[(pivot_row, col)] = S::one();
        for r in 0..rows {
            if r == pivot_row {
                continue;
            }
            let factor = m[(r, col)].clone();
            if factor.is_zero_tol(eps) {
                m[(r, col)] = S::zero();
                continue;
            }
            for c in col..cols {
                m[(r, c)] = m[(r, c)].clone() - factor.clone() * m[(pivot_row, c)].clone();
            }
            m[(r, col)] = S::zero();
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Rank by elimination. The float backend's public `rank` operation in
/// [`crate::kernel::rank`] prefers singular values; this is the shared pivot
/// count used internally.
pub fn rank_rref<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> usize {
    let mut work = m.clone();
    rref_in_place(&mut work, pol).len()
}

/// Basis of the right kernel, returned as matrix columns. Empty matrix when
/// the kernel is trivial.
pub fn nullspace<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Mat<S> {
    let mut work = m.clone();
    let pivots = rref_in_place(&mut work, pol);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Mat::zeros(cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis[(fc, k)] = S::one();
        for (prow, &pc) in pivots.iter().enumerate() {
            basis[(pc, k)] = -work[(prow, fc)].clone();
        }
    }
    basis
}

/// Solve A X = B for X; None when inconsistent or (for square A) singular.
/// Underdetermined systems get the particular solution with free variables
/// set to zero.
pub fn solve<S: Scalar>(a: &Mat<S>, b: &Mat<S>, pol: &TolerancePolicy) -> Option<Mat<S>> {
    assert_eq!(a.rows(), b.rows(), "shape mismatch in solve");
    let mut work = a.hstack(b);
    let pivots = rref_in_place(&mut work, pol);
    let eps = pivot_eps(a, pol);
    // inconsistency: pivot in the appended strip
    if pivots.iter().any(|&c| c >= a.cols()) {
        return None;
    }
    // rows of zeros in A-part with nonzero B-part
    for r in pivots.len()..a.rows() {
        for c in a.cols()..work.cols() {
            if !work[(r, c)].is_zero_tol(eps.max(pol.scaled_zero(b.max_abs()))) {
                return None;
            }
        }
    }
    let mut x = Mat::zeros(a.cols(), b.cols());
    for (prow, &pc) in pivots.iter().enumerate() {
        for c in 0..b.cols() {
            x[(pc, c)] = work[(prow, a.cols() + c)].clone();
        }
    }
    Some(x)
}

pub fn inverse<S: Scalar>(a: &Mat<S>, pol: &TolerancePolicy) -> Option<Mat<S>> {
    assert!(a.is_square());
    let mut work = a.hstack(&Mat::identity(a.rows()));
    let pivots = rref_in_place(&mut work, pol);
    if pivots.len() != a.rows() || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(work.block(0, a.rows(), a.cols(), work.cols()))
}

pub fn det<S: Scalar>(a: &Mat<S>, pol: &TolerancePolicy) -> S {
    assert!(a.is_square());
    let n = a.rows();
    let eps = pivot_eps(a, pol);
    let mut m = a.clone();
    let mut det = S::one();
    for col in 0..n {
        let mut sel = None;
        for r in col..n {
            if !m[(r, col)].is_zero_tol(eps) {
                sel = Some(r);
                break;
            }
        }
        let Some(r) = sel else { return S::zero() };
        if r != col {
            m.swap_rows(col, r);
            det = -det;
        }
        let pivot = m[(col, col)].clone();
        det = det * pivot.clone();
        let inv = pivot.inv().expect("nonzero pivot");
        for rr in col + 1..n {
            let factor = inv.clone() * m[(rr, col)].clone();
            if factor.is_zero_tol(eps) {
                continue;
            }
            for cc in col..n {
                m[(rr, cc)] = m[(rr, cc)].clone() - factor.clone() * m[(col, cc)].clone();
            }
        }
    }
    det
}

/// Error when any entry is non-finite (always fine for the exact backend).
pub fn check_finite<S: Scalar>(m: &Mat<S>) -> Result<()> {
    if m.has_finite_entries() {
        Ok(())
    } else {
        Err(Error::MalformedInput("matrix contains non-finite entries".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_complex::Complex64;

    type GQ = GaussianRational;

    #[test]
    fn rref_rank_and_nullspace_exact() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank_rref(&m, &pol), 1);
        let ns = nullspace(&m, &pol);
        assert_eq!(ns.cols(), 1);
        let prod = m.matmul(&ns);
        assert!(prod.is_zero_tol(0.0));
    }

    #[test]
    fn solve_and_inverse_exact() {
        let pol = TolerancePolicy::exact();
        let a: Mat<GQ> = Mat::from_int_rows(&[&[2, 1], &[1, 1]]);
        let b: Mat<GQ> = Mat::from_int_rows(&[&[3], &[2]]);
        let x = solve(&a, &b, &pol).unwrap();
        assert!(a.matmul(&x).approx_eq(&b, 0.0));
        let inv = inverse(&a, &pol).unwrap();
        assert!(a.matmul(&inv).is_identity_tol(0.0));
        let singular: Mat<GQ> = Mat::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(inverse(&singular, &pol).is_none());
    }

    #[test]
    fn det_matches_hand_value() {
        let pol = TolerancePolicy::exact();
        let a: Mat<GQ> = Mat::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(det(&a, &pol), GQ::from_int(-2, 0));
    }

    #[test]
    fn float_solve_sane() {
        let pol = TolerancePolicy::float_default();
        let a: Mat<Complex64> = Mat::from_int_rows(&[&[4, 1], &[2, 3]]);
        let b: Mat<Complex64> = Mat::from_int_rows(&[&[5], &[5]]);
        let x = solve(&a, &b, &pol).unwrap();
        assert!(a.matmul(&x).approx_eq(&b, 1e-12));
    }

    #[test]
    fn inconsistent_system_detected() {
        let pol = TolerancePolicy::exact();
        let a: Mat<GQ> = Mat::from_int_rows(&[&[1, 1], &[1, 1]]);
        let b: Mat<GQ> = Mat::from_int_rows(&[&[1], &[2]]);
        assert!(solve(&a, &b, &pol).is_none());
    }
}
