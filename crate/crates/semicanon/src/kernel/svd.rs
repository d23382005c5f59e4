//! Singular value decomposition with grouped values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::solve::nullspace;
use super::unitary::{complete_to_unitary, orthonormal_basis};

/// U* M V = a_1 I + ... + a_k I + 0 (block diagonal, rectangular zero tail),
/// with strictly decreasing positive `values` carrying multiplicities.
#[derive(Debug, Clone)]
pub struct SvdGrouped<S: Scalar> {
    pub u: Mat<S>,
    pub v: Mat<S>,
    pub values: Vec<(S, usize)>,
}

impl<S: Scalar> SvdGrouped<S> {
    pub fn rank(&self) -> usize {
        self.values.iter().map(|(_, k)| k).sum()
    }

    /// The canonical form U* M V as a dense matrix.
    pub fn canonical(&self, rows: usize, cols: usize) -> Mat<S> {
        let mut out = Mat::zeros(rows, cols);
        let mut at = 0usize;
        for (a, k) in &self.values {
            for _ in 0..*k {
                out[(at, at)] = a.clone();
                at += 1;
            }
        }
        out
    }
}

/// One-sided Jacobi (Hestenes) SVD for the float backend.
/// Returns (U, sigma, V) with U p-by-p and V q-by-q unitary, sigma descending.
pub fn hestenes_svd(m: &Mat<Complex64>) -> (Mat<Complex64>, Vec<f64>, Mat<Complex64>) {
    let (p, q) = (m.rows(), m.cols());
    let mut b = m.clone();
    let mut v: Mat<Complex64> = Mat::identity(q);
    let scale = m.frobenius_norm().max(1.0);
    let tol = 1e-14 * scale * scale;
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..q {
            for j in (i + 1)..q {
                let mut aii = 0.0f64;
                let mut ajj = 0.0f64;
                let mut aij = Complex64::new(0.0, 0.0);
                for r in 0..p {
                    aii += b[(r, i)].norm_sqr();
                    ajj += b[(r, j)].norm_sqr();
                    aij += b[(r, i)].conj() * b[(r, j)];
                }
                if aij.norm() <= tol.max(1e-30) || aij.norm_sqr() <= 1e-28 * aii * ajj {
                    continue;
                }
                rotated = true;
                let phase = aij / aij.norm();
                let tau = (ajj - aii) / (2.0 * aij.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..p {
                    let x = b[(r, i)];
                    let y = b[(r, j)] * phase.conj();
                    b[(r, i)] = x * c - y * s;
                    b[(r, j)] = x * s + y * c;
                }
                for r in 0..q {
                    let x = v[(r, i)];
                    let y = v[(r, j)] * phase.conj();
                    v[(r, i)] = x * c - y * s;
                    v[(r, j)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // column norms are the singular values; sort descending
    let mut order: Vec<usize> = (0..q).collect();
    let norms: Vec<f64> = (0..q)
        .map(|c| (0..p).map(|r| b[(r, c)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &bb| norms[bb].total_cmp(&norms[a]));
    let sigma: Vec<f64> = order.iter().map(|&c| norms[c]).collect();
    let v_sorted = Mat::from_cols(&order.iter().map(|&c| v.col(c)).collect::<Vec<_>>());
    let b_sorted = Mat::from_cols(&order.iter().map(|&c| b.col(c)).collect::<Vec<_>>());
    // left vectors for significant singular values
    let cutoff = 1e-13 * scale;
    let mut u_cols: Vec<Vec<Complex64>> = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        if s > cutoff {
            let inv = Complex64::new(1.0 / s, 0.0);
            u_cols.push(b_sorted.col(k).into_iter().map(|x| x * inv).collect());
        }
    }
    let u_part = if u_cols.is_empty() {
        Mat::zeros(p, 0)
    } else {
        Mat::from_cols(&u_cols)
    };
    let u = complete_to_unitary(&u_part, &TolerancePolicy::float_default())
        .expect("float completion cannot fail");
    (u, sigma, v_sorted)
}

/// Singular values only, for rank decisions in the float backend.
pub fn singular_values_f64<S: Scalar>(m: &Mat<S>) -> Vec<f64> {
    let conv = Mat::<Complex64>::from_fn(m.rows(), m.cols(), |r, c| {
        Complex64::new(m[(r, c)].re_f64(), m[(r, c)].im_f64())
    });
    let (_, sigma, _) = hestenes_svd(&conv);
    sigma
}

fn group_values<S: Scalar>(sigma: &[S], pol: &TolerancePolicy) -> Vec<(S, usize)> {
    let mut groups: Vec<(S, usize)> = Vec::new();
    for s in sigma {
        match groups.last_mut() {
            Some((rep, k))
                if (S::EXACT && rep == s)
                    || (!S::EXACT
                        && (rep.re_f64() - s.re_f64()).abs() <= pol.cluster_eps) =>
            {
                *k += 1;
            }
            _ => groups.push((s.clone(), 1)),
        }
    }
    groups
}

/// Grouped SVD: U* M V = a_1 I + ... + a_k I + 0 with a_1 > ... > a_k > 0.
pub fn svd_grouped<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Result<SvdGrouped<S>> {
    super::solve::check_finite(m)?;
    if S::EXACT {
        return exact_svd(m, pol);
    }
    let conv = Mat::<Complex64>::from_fn(m.rows(), m.cols(), |r, c| {
        Complex64::new(m[(r, c)].re_f64(), m[(r, c)].im_f64())
    });
    let (u, sigma, v) = hestenes_svd(&conv);
    let cutoff = pol.rank_rel_eps * sigma.first().copied().unwrap_or(0.0).max(1.0);
    let sig: Vec<S> = sigma
        .iter()
        .filter(|&&s| s > cutoff)
        .map(|&s| S::from_f64(s, 0.0))
        .collect();
    let back = |mm: &Mat<Complex64>| {
        Mat::<S>::from_fn(mm.rows(), mm.cols(), |r, c| S::from_f64(mm[(r, c)].re, mm[(r, c)].im))
    };
    Ok(SvdGrouped { u: back(&u), v: back(&v), values: group_values(&sig, pol) })
}

fn exact_svd<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Result<SvdGrouped<S>> {
    let h = m.adjoint().matmul(m); // q x q Hermitian PSD
    let eigs = super::eigen::eigenvalues(&h, pol)?;
    let mut distinct: Vec<S> = Vec::new();
    for e in &eigs {
        if !distinct.contains(e) {
            distinct.push(e.clone());
        }
    }
    // descending by value (all real nonnegative)
    distinct.sort_by(|a, b| b.lex_cmp(a));
    let mut v_cols: Vec<Vec<S>> = Vec::new();
    let mut u_cols: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<(S, usize)> = Vec::new();
    for mu in &distinct {
        if mu.is_zero_tol(0.0) {
            continue;
        }
        let sigma = S::sqrt_positive(mu).ok_or_else(|| {
            Error::UnsupportedSpectrum(format!(
                "singular value squared {mu} is not a rational square"
            ))
        })?;
        let mut shifted = h.clone();
        for i in 0..shifted.rows() {
            shifted[(i, i)] = shifted[(i, i)].clone() - mu.clone();
        }
        let space = nullspace(&shifted, pol);
        let basis = orthonormal_basis(&space, pol)?;
        let inv_sigma = sigma.inv().expect("positive");
        for c in 0..basis.cols() {
            let vcol = basis.col(c);
            let ucol: Vec<S> =
                m.apply(&vcol).into_iter().map(|x| inv_sigma.clone() * x).collect();
            v_cols.push(vcol);
            u_cols.push(ucol);
        }
        values.push((sigma, basis.cols()));
    }
    // kernel of M fills out V; kernel of M* fills out U
    let v_part = if v_cols.is_empty() { Mat::zeros(m.cols(), 0) } else { Mat::from_cols(&v_cols) };
    let v = complete_with_kernel(&v_part, &nullspace(m, pol), pol)?;
    let u_part = if u_cols.is_empty() { Mat::zeros(m.rows(), 0) } else { Mat::from_cols(&u_cols) };
    let v_len = v_cols.len();
    let u = complete_with_kernel(&u_part, &nullspace(&m.adjoint(), pol), pol)?;
    debug_assert_eq!(v_len, u_cols.len());
    Ok(SvdGrouped { u, v, values })
}

/// Extend orthonormal `cols` by an orthonormal basis of `kernel`.
fn complete_with_kernel<S: Scalar>(
    cols: &Mat<S>,
    kernel: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<Mat<S>> {
    let extra = orthonormal_basis(kernel, pol)?;
    let full = if cols.cols() == 0 { extra } else { cols.hstack(&extra) };
    if full.cols() != full.rows() {
        return Err(Error::Internal(format!(
            "singular vector completion: {} columns in dimension {}",
            full.cols(),
            full.rows()
        )));
    }
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type GQ = GaussianRational;

    #[test]
    fn exact_svd_scaled_identity() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[3, 0], &[0, 3]]);
        let svd = svd_grouped(&m, &pol).unwrap();
        assert_eq!(svd.values, vec![(GQ::from_int(3, 0), 2)]);
        let form = svd.u.adjoint().matmul(&m).matmul(&svd.v);
        assert!(form.approx_eq(&svd.canonical(2, 2), 0.0));
    }

    #[test]
    fn exact_svd_nilpotent_rank_one() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 2], &[0, 0]]);
        let svd = svd_grouped(&m, &pol).unwrap();
        assert_eq!(svd.values, vec![(GQ::from_int(2, 0), 1)]);
        let form = svd.u.adjoint().matmul(&m).matmul(&svd.v);
        assert_eq!(form, svd.canonical(2, 2));
        assert!(svd.u.adjoint().matmul(&svd.u).is_identity_tol(0.0));
        assert!(svd.v.adjoint().matmul(&svd.v).is_identity_tol(0.0));
    }

    #[test]
    fn exact_svd_zero_matrix() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::zeros(2, 3);
        let svd = svd_grouped(&m, &pol).unwrap();
        assert!(svd.values.is_empty());
        assert_eq!(svd.v.cols(), 3);
        assert_eq!(svd.u.cols(), 2);
    }

    #[test]
    fn float_svd_reconstructs() {
        let pol = TolerancePolicy::float_default();
        let m: Mat<Complex64> = Mat::from_int_rows(&[&[1, 2, 0], &[0, 1, 1]]);
        let svd = svd_grouped(&m, &pol).unwrap();
        let form = svd.u.adjoint().matmul(&m).matmul(&svd.v);
        // off-diagonal residue should be negligible
        for r in 0..form.rows() {
            for c in 0..form.cols() {
                if r != c {
                    assert!(form[(r, c)].abs2_f64().sqrt() < 1e-10);
                }
            }
        }
        assert_eq!(svd.rank(), 2);
    }

    #[test]
    fn hestenes_values_match_known() {
        let m: Mat<Complex64> = Mat::from_int_rows(&[&[3, 0], &[4, 5]]);
        let (_, sigma, _) = hestenes_svd(&m);
        // singular values of [[3,0],[4,5]] are sqrt(45) and sqrt(5)
        assert!((sigma[0] - 45f64.sqrt()).abs() < 1e-10);
        assert!((sigma[1] - 5f64.sqrt()).abs() < 1e-10);
    }
}
