//! Unitary reduction to block upper triangular "staircase" form: diagonal
//! blocks are scalar, sized by the Weyr characteristic of each eigenvalue,
//! eigenvalues ascending in the lexicographic order, and the coupling block
//! between consecutive equal eigenvalues has full column rank.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::eigen::{cluster_eigenvalues, eigenvalues};
use super::solve::nullspace;
use super::unitary::orthonormal_basis;

#[derive(Debug, Clone)]
pub struct Staircase<S: Scalar> {
    pub q: Mat<S>,
    pub t: Mat<S>,
    /// Diagonal layout: (eigenvalue, block size) in order.
    pub layout: Vec<(S, usize)>,
}

/// Orthonormal columns spanning the part of `space` orthogonal to `prior`.
fn new_directions<S: Scalar>(
    space: &Mat<S>,
    prior: &[Vec<S>],
    pol: &TolerancePolicy,
) -> Result<Mat<S>> {
    let n = space.rows();
    let mut cols: Vec<Vec<S>> = Vec::new();
    for c in 0..space.cols() {
        let mut v = space.col(c);
        for u in prior {
            let coeff = Mat::dot(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi = vi.clone() - coeff.clone() * ui.clone();
            }
        }
        cols.push(v);
    }
    if cols.is_empty() {
        return Ok(Mat::zeros(n, 0));
    }
    orthonormal_basis(&Mat::from_cols(&cols), pol)
}

/// Unitary staircase form Q* M Q = T.
pub fn unitary_staircase<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Result<Staircase<S>> {
    assert!(m.is_square(), "unitary_staircase needs a square matrix");
    super::solve::check_finite(m)?;
    let n = m.rows();
    let eigs = eigenvalues(m, pol)?;
    let clusters = cluster_eigenvalues(&eigs, pol)?;
    let mut q_cols: Vec<Vec<S>> = Vec::new();
    let mut layout: Vec<(S, usize)> = Vec::new();
    // `killer` accumulates (M - mu)^{r_mu} over completed eigenvalues; the
    // invariant flag is ker(killer * (M - lambda)^k)
    let mut killer = Mat::<S>::identity(n);
    for (lambda, mult) in &clusters {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)].clone() - lambda.clone();
        }
        let mut power = killer.clone();
        let mut prev_dim = q_cols.len();
        let target = q_cols.len() + mult;
        while prev_dim < target {
            power = power.matmul(&shifted);
            let space = nullspace(&power, pol);
            let fresh = new_directions(&space, &q_cols, pol)?;
            let step = fresh.cols();
            if step == 0 {
                return Err(Error::NumericInconsistency(format!(
                    "staircase flag stalled at eigenvalue {lambda}"
                )));
            }
            for c in 0..step {
                q_cols.push(fresh.col(c));
            }
            layout.push((lambda.clone(), step));
            prev_dim += step;
        }
        killer = power;
    }
    if q_cols.len() != n {
        return Err(Error::NumericInconsistency(format!(
            "staircase flag spans {} of {n} dimensions",
            q_cols.len()
        )));
    }
    let q = Mat::from_cols(&q_cols);
    let mut t = q.adjoint().matmul(m).matmul(&q);
    // scrub the structural zeros under the block diagonal
    let tol = pol.scaled_zero(m.frobenius_norm()).max(if S::EXACT { 0.0 } else { 1e-9 });
    let offsets: Vec<usize> = layout
        .iter()
        .scan(0usize, |acc, (_, s)| {
            let v = *acc;
            *acc += s;
            Some(v)
        })
        .collect();
    for (bi, (lambda, size)) in layout.iter().enumerate() {
        let off = offsets[bi];
        for r in off..off + size {
            for c in 0..off + size {
                if c < off {
                    if !t[(r, c)].is_zero_tol(tol) {
                        return Err(Error::NumericInconsistency(
                            "staircase residue below the block diagonal".into(),
                        ));
                    }
                    t[(r, c)] = S::zero();
                } else if r != c {
                    if !t[(r, c)].is_zero_tol(tol) {
                        return Err(Error::NumericInconsistency(
                            "staircase diagonal block is not scalar".into(),
                        ));
                    }
                    t[(r, c)] = S::zero();
                } else if S::EXACT {
                    t[(r, c)] = lambda.clone();
                }
            }
        }
    }
    Ok(Staircase { q, t, layout })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rank;
    use crate::scalar::GaussianRational;

    type GQ = GaussianRational;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::exact()
    }

    #[test]
    fn ordered_diagonal() {
        let m: Mat<GQ> = Mat::from_int_rows(&[&[1, 0], &[0, 2]]);
        let st = unitary_staircase(&m, &pol()).unwrap();
        assert_eq!(st.t, m);
        assert_eq!(st.layout, vec![(GQ::one(), 1), (GQ::from_int(2, 0), 1)]);
    }

    #[test]
    fn nilpotent_coupling_value_not_normalized() {
        // the staircase fixes only the diagonal blocks; the coupling keeps
        // its singular value
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 2], &[0, 0]]);
        let st = unitary_staircase(&m, &pol()).unwrap();
        assert_eq!(st.t, m);
        assert_eq!(st.layout, vec![(GQ::zero(), 1), (GQ::zero(), 1)]);
    }

    #[test]
    fn weyr_sizes_after_scrambling() {
        // J_2(0) + J_1(0) conjugated by a unitary permutation-ish matrix
        let m: Mat<GQ> =
            Mat::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let perm: Mat<GQ> = Mat::permutation(&[2, 0, 1]);
        let scrambled = perm.adjoint().matmul(&m).matmul(&perm);
        let st = unitary_staircase(&scrambled, &pol()).unwrap();
        let sizes: Vec<usize> = st.layout.iter().map(|(_, s)| *s).collect();
        assert_eq!(sizes, vec![2, 1]);
        // coupling block between the two levels has full column rank
        let f = st.t.block(0, 2, 2, 3);
        assert_eq!(rank(&f, &pol()).unwrap(), 1);
        // witness identity
        assert!(st.q.adjoint().matmul(&st.q).is_identity_tol(0.0));
        assert!(st.q.adjoint().matmul(&scrambled).matmul(&st.q).approx_eq(&st.t, 0.0));
    }

    #[test]
    fn full_rank_coupling_between_equal_eigenvalues() {
        use num_complex::Complex64;
        let fpol = TolerancePolicy::float_default();
        let m: Mat<Complex64> = Mat::from_int_rows(&[
            &[3, 1, 0, 0],
            &[0, 3, 0, 0],
            &[0, 0, 3, 0],
            &[0, 0, 0, 5],
        ]);
        let st = unitary_staircase(&m, &fpol).unwrap();
        let sizes: Vec<usize> = st.layout.iter().map(|(_, s)| *s).collect();
        assert_eq!(sizes, vec![2, 1, 1]);
        let back = st.q.matmul(&st.t).matmul(&st.q.adjoint());
        assert!(back.approx_eq(&m, 1e-8));
    }
}
