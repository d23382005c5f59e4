//! Orthonormal bases and unitary completions.
//!
//! The float backend normalizes with `sqrt` and always succeeds. The exact
//! backend must produce matrices that are unitary over the Gaussian
//! rationals, where a direction admits a unit vector only when its squared
//! norm is a sum of two rational squares. `find_unit_combo` searches small
//! combinations of an orthogonal basis for a representable vector; inputs
//! assembled from exactly-unitary conjugations always admit one.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::solve::nullspace;

/// Gram-Schmidt without normalization. Returns orthogonal spanning vectors
/// (dependent inputs dropped) with their squared norms.
pub fn gram_schmidt<S: Scalar>(
    cols: &[Vec<S>],
    pol: &TolerancePolicy,
) -> (Vec<Vec<S>>, Vec<S>) {
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut norms: Vec<S> = Vec::new();
    for v in cols {
        let mut w = v.clone();
        for pass in 0..2 {
            for (u, nu) in basis.iter().zip(&norms) {
                let coeff = Mat::dot(u, &w).div(nu).expect("nonzero norm");
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi = wi.clone() - coeff.clone() * ui.clone();
                }
            }
            if S::EXACT {
                break; // exact projection needs one pass
            }
            if pass == 0 {
                // second pass re-orthogonalizes float residue
                continue;
            }
        }
        let scale = v.iter().map(|x| x.abs2_f64()).sum::<f64>().sqrt();
        let nsq = Mat::norm_sq_vec(&w);
        if nsq.is_zero_tol(pol.scaled_zero(scale).powi(2).max(pol.zero_eps * pol.zero_eps)) {
            continue;
        }
        S::normalize_direction(&mut w);
        let nsq = Mat::norm_sq_vec(&w);
        basis.push(w);
        norms.push(nsq);
    }
    (basis, norms)
}

/// Coefficients c with sum |c_i|^2 d_i = 1 for positive real weights d_i.
///
/// Float: trivial. Exact: each weight d is split as |g|^2 * r with r its
/// residual modulo norms. A weight with r = 1 normalizes alone. Otherwise a
/// pair of weights always suffices: every positive-definite rank-two
/// Hermitian form over the Gaussian rationals represents 1, realized by an
/// integer solution of r_i (a^2+b^2) + r_j (c^2+d^2) = t^2. Only a single
/// residual weight (r != 1) is genuinely unrepresentable.
pub fn find_unit_combo<S: Scalar>(weights: &[S]) -> Option<Vec<S>> {
    if weights.is_empty() {
        return None;
    }
    if !S::EXACT {
        let c = S::inv_norm_scalar(&weights[0])?;
        let mut out = vec![S::zero(); weights.len()];
        out[0] = c;
        return Some(out);
    }
    let k = weights.len();
    let residuals: Vec<Option<(S, u64)>> =
        weights.iter().map(|w| S::weight_residual(w)).collect();
    // a weight that is itself a norm
    for i in 0..k {
        if let Some((g, 1)) = &residuals[i] {
            let mut out = vec![S::zero(); k];
            out[i] = g.inv()?;
            return Some(out);
        }
    }
    // otherwise solve on a pair, smallest residuals first
    let mut order: Vec<usize> = (0..k).filter(|&i| residuals[i].is_some()).collect();
    order.sort_by_key(|&i| residuals[i].as_ref().map(|(_, r)| *r).unwrap_or(u64::MAX));
    for a_idx in 0..order.len() {
        for b_idx in (a_idx + 1)..order.len() {
            let (i, j) = (order[a_idx], order[b_idx]);
            let (gi, ri) = residuals[i].as_ref()?;
            let (gj, rj) = residuals[j].as_ref()?;
            if let Some((a, b, c, d, t)) =
                crate::scalar::pair_two_square_split(*ri, *rj)
            {
                // c_i = (a+bi)/(t g_i), c_j = (c+di)/(t g_j) gives
                // |c_i|^2 d_i + |c_j|^2 d_j = (r_i(a^2+b^2)+r_j(c^2+d^2))/t^2 = 1
                let tinv = S::from_int(t as i64, 0).inv()?;
                let ci = S::from_int(a, b).div(gi)? * tinv.clone();
                let cj = S::from_int(c, d).div(gj)? * tinv;
                let mut out = vec![S::zero(); k];
                out[i] = ci;
                out[j] = cj;
                return Some(out);
            }
        }
    }
    None
}

fn unsupported<S: Scalar>(context: &str) -> Error {
    if S::EXACT {
        Error::UnsupportedSpectrum(format!(
            "no Gaussian-rational unit vector found while {context}"
        ))
    } else {
        Error::NumericInconsistency(format!("degenerate subspace while {context}"))
    }
}

/// A unit vector inside the span of the given columns.
pub fn unit_vector_in_span<S: Scalar>(
    span: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<Vec<S>> {
    let cols: Vec<Vec<S>> = (0..span.cols()).map(|c| span.col(c)).collect();
    let (basis, norms) = gram_schmidt(&cols, pol);
    if basis.is_empty() {
        return Err(unsupported::<S>("normalizing the zero subspace"));
    }
    let combo = find_unit_combo(&norms).ok_or_else(|| unsupported::<S>("normalizing"))?;
    let n = basis[0].len();
    let mut u = vec![S::zero(); n];
    for (c, w) in combo.iter().zip(&basis) {
        if c.is_zero_tol(0.0) {
            continue;
        }
        for (ui, wi) in u.iter_mut().zip(w) {
            *ui = ui.clone() + c.clone() * wi.clone();
        }
    }
    debug_assert!(Mat::norm_sq_vec(&u).approx_eq(&S::one(), 1e-9));
    Ok(u)
}

/// Orthonormal basis of the span of the given columns. The result has
/// exactly-unit columns; rank deficiency in the input is tolerated.
pub fn orthonormal_basis<S: Scalar>(span: &Mat<S>, pol: &TolerancePolicy) -> Result<Mat<S>> {
    let mut work: Vec<Vec<S>> = (0..span.cols()).map(|c| span.col(c)).collect();
    let mut out: Vec<Vec<S>> = Vec::new();
    loop {
        let (mut basis, norms) = gram_schmidt(&work, pol);
        if basis.is_empty() {
            break;
        }
        if !S::EXACT {
            // float: normalize every GS vector directly
            for (w, nsq) in basis.iter_mut().zip(&norms) {
                let c = S::inv_norm_scalar(nsq)
                    .ok_or_else(|| unsupported::<S>("normalizing a float basis"))?;
                for x in w.iter_mut() {
                    *x = c.clone() * x.clone();
                }
                out.push(w.clone());
            }
            break;
        }
        let combo =
            find_unit_combo(&norms).ok_or_else(|| unsupported::<S>("building a basis"))?;
        let n = basis[0].len();
        let mut u = vec![S::zero(); n];
        for (c, w) in combo.iter().zip(&basis) {
            for (ui, wi) in u.iter_mut().zip(w) {
                *ui = ui.clone() + c.clone() * wi.clone();
            }
        }
        // project the found unit vector out and continue with the rest
        let mut next: Vec<Vec<S>> = Vec::new();
        for w in &basis {
            let coeff = Mat::dot(&u, w);
            let mut w2 = w.clone();
            for (wi, ui) in w2.iter_mut().zip(&u) {
                *wi = wi.clone() - coeff.clone() * ui.clone();
            }
            next.push(w2);
        }
        out.push(u);
        work = next;
    }
    if out.is_empty() {
        return Ok(Mat::zeros(span.rows(), 0));
    }
    Ok(Mat::from_cols(&out))
}

/// Extend orthonormal columns to a full unitary matrix. Passing zero columns
/// yields an orthonormal basis of the whole space.
pub fn complete_to_unitary<S: Scalar>(cols: &Mat<S>, pol: &TolerancePolicy) -> Result<Mat<S>> {
    let n = cols.rows();
    if cols.cols() == 0 {
        return orthonormal_basis(&Mat::identity(n), pol);
    }
    debug_assert!(cols.adjoint().matmul(cols).is_identity_tol(1e-8));
    if cols.cols() == n {
        return Ok(cols.clone());
    }
    let complement = nullspace(&cols.adjoint(), pol);
    let extra = orthonormal_basis(&complement, pol)?;
    if cols.cols() + extra.cols() != n {
        return Err(Error::Internal(format!(
            "unitary completion found {} + {} columns in dimension {n}",
            cols.cols(),
            extra.cols()
        )));
    }
    Ok(cols.hstack(&extra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_complex::Complex64;

    type GQ = GaussianRational;

    fn exact_pol() -> TolerancePolicy {
        TolerancePolicy::exact()
    }

    #[test]
    fn unit_vector_in_two_dim_span() {
        // span{(1,-i)}: norm^2 = 2, needs alpha with |alpha|^2 = 1/2
        let span: Mat<GQ> = Mat::from_cols(&[vec![GQ::one(), -GQ::i()]]);
        let u = unit_vector_in_span(&span, &exact_pol()).unwrap();
        assert_eq!(Mat::norm_sq_vec(&u), GQ::one());
    }

    #[test]
    fn combo_search_splits_three_three() {
        // neither weight 3 nor 3 normalizes alone, but 3|c1|^2+3|c2|^2 = 1
        // has Gaussian-rational solutions
        let weights = vec![GQ::from_int(3, 0), GQ::from_int(3, 0)];
        let combo = find_unit_combo(&weights).unwrap();
        let total = combo[0].abs2() * weights[0].clone() + combo[1].abs2() * weights[1].clone();
        assert_eq!(total, GQ::one());
    }

    #[test]
    fn orthonormal_basis_exact_unitary() {
        // orthogonal span with Gram diag(3,3): equivalent to the identity
        // form, so a combination search is required and must succeed
        let span: Mat<GQ> = Mat::from_cols(&[
            vec![GQ::one(), GQ::one(), GQ::one(), GQ::zero()],
            vec![GQ::zero(), GQ::one(), -GQ::one(), GQ::one()],
        ]);
        let q = orthonormal_basis(&span, &exact_pol()).unwrap();
        assert_eq!(q.cols(), 2);
        assert!(q.adjoint().matmul(&q).is_identity_tol(0.0));
    }

    #[test]
    fn orthonormal_basis_honest_failure() {
        // Gram diag(2,3) has discriminant 6, not a norm from Q(i), so no
        // exact orthonormal basis exists and the error must say so
        let span: Mat<GQ> = Mat::from_cols(&[
            vec![GQ::one(), GQ::i(), GQ::zero()],
            vec![GQ::one(), -GQ::i(), GQ::one()],
        ]);
        match orthonormal_basis(&span, &exact_pol()) {
            Err(crate::error::Error::UnsupportedSpectrum(_)) => {}
            other => panic!("expected unsupported spectrum, got {other:?}"),
        }
    }

    #[test]
    fn completion_is_unitary_exact() {
        let one_col: Mat<GQ> = Mat::from_cols(&[vec![
            GQ::from_ratios((3, 5), (0, 1)),
            GQ::from_ratios((4, 5), (0, 1)),
        ]]);
        let u = complete_to_unitary(&one_col, &exact_pol()).unwrap();
        assert!(u.adjoint().matmul(&u).is_identity_tol(0.0));
    }

    #[test]
    fn float_paths_always_normalize() {
        let pol = TolerancePolicy::float_default();
        let span: Mat<Complex64> =
            Mat::from_cols(&[vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)]]);
        let q = orthonormal_basis(&span, &pol).unwrap();
        assert!(q.adjoint().matmul(&q).is_identity_tol(1e-12));
        let full = complete_to_unitary(&q, &pol).unwrap();
        assert!(full.adjoint().matmul(&full).is_identity_tol(1e-10));
    }
}
