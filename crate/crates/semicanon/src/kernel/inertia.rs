//! Hermitian congruence: diagonalization, Sylvester inertia, and unit
//! normalization of definite diagonal forms.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::solve::nullspace;
use super::unitary::find_unit_combo;

/// Result of reducing a Hermitian matrix D to I_p + (-I_q) + 0_z by
/// congruence: `transform`* D `transform` equals that canonical diagonal.
#[derive(Debug, Clone)]
pub struct Inertia<S: Scalar> {
    pub transform: Mat<S>,
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl<S: Scalar> Inertia<S> {
    pub fn canonical(&self) -> Mat<S> {
        let n = self.positive + self.negative + self.zero;
        let mut out = Mat::zeros(n, n);
        for i in 0..self.positive {
            out[(i, i)] = S::one();
        }
        for i in 0..self.negative {
            let k = self.positive + i;
            out[(k, k)] = -S::one();
        }
        out
    }
}

/// Congruence-diagonalize a Hermitian matrix: returns T nonsingular with
/// T* D T real diagonal, plus the diagonal entries.
pub fn congruence_diagonalize<S: Scalar>(
    d: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<(Mat<S>, Vec<S>)> {
    let n = d.rows();
    let eps = pol.scaled_zero(d.frobenius_norm());
    let mut work = d.clone();
    let mut t = Mat::<S>::identity(n);
    // column operation v_i += w v_j together with the conjugate row operation
    let col_op = |work: &mut Mat<S>, t: &mut Mat<S>, i: usize, j: usize, w: &S| {
        for r in 0..n {
            let add = w.clone() * work[(r, j)].clone();
            work[(r, i)] = work[(r, i)].clone() + add;
        }
        for c in 0..n {
            let add = w.conj() * work[(j, c)].clone();
            work[(i, c)] = work[(i, c)].clone() + add;
        }
        for r in 0..n {
            let add = w.clone() * t[(r, j)].clone();
            t[(r, i)] = t[(r, i)].clone() + add;
        }
    };
    for k in 0..n {
        // pivot: a nonzero diagonal entry at or after k
        let mut pivot = None;
        let mut best = eps;
        for j in k..n {
            let mag = work[(j, j)].abs2_f64().sqrt();
            if !work[(j, j)].is_zero_tol(eps) && (S::EXACT || mag > best) {
                pivot = Some(j);
                if S::EXACT {
                    break;
                }
                best = mag;
            }
        }
        if pivot.is_none() {
            // create one from the largest off-diagonal entry
            let mut largest: Option<(usize, usize, f64)> = None;
            for i in k..n {
                for j in (i + 1)..n {
                    let mag = work[(i, j)].abs2_f64();
                    if !work[(i, j)].is_zero_tol(eps)
                        && largest.map_or(true, |(_, _, m)| mag > m)
                    {
                        largest = Some((i, j, mag));
                    }
                }
            }
            match largest {
                None => break, // remaining block is zero
                Some((i, j, _)) => {
                    let w = work[(i, j)].conj();
                    col_op(&mut work, &mut t, i, j, &w);
                    pivot = Some(i);
                }
            }
        }
        let p = pivot.unwrap();
        if p != k {
            work.swap_cols(k, p);
            work.swap_rows(k, p);
            t.swap_cols(k, p);
        }
        let dk = work[(k, k)].clone();
        let inv = dk.inv().expect("nonzero pivot");
        for j in (k + 1)..n {
            let f = work[(k, j)].clone();
            if f.is_zero_tol(eps) {
                continue;
            }
            let w = -(inv.clone() * f);
            col_op(&mut work, &mut t, j, k, &w);
        }
    }
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let v = work[(i, i)].clone();
        if !v.is_real_tol(pol.cluster_eps.max(eps)) {
            return Err(Error::NumericInconsistency(format!(
                "congruence diagonal entry {v} is not real"
            )));
        }
        diag.push(v.real_part());
    }
    Ok((t, diag))
}

/// For a positive definite diagonal form diag(w_1..w_k), find B invertible
/// with B* diag(w) B = I. Float scales by 1/sqrt; exact searches for unit
/// vectors of the form.
pub fn positive_form_basis<S: Scalar>(weights: &[S]) -> Result<Mat<S>> {
    let k = weights.len();
    if k == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    if !S::EXACT {
        let mut b = Mat::<S>::zeros(k, k);
        for (i, w) in weights.iter().enumerate() {
            let c = S::inv_norm_scalar(w).ok_or_else(|| {
                Error::NumericInconsistency(format!("nonpositive weight {w}"))
            })?;
            b[(i, i)] = c;
        }
        return Ok(b);
    }
    // exact: peel off one unit vector of the form at a time
    let mut basis = Mat::<S>::identity(k); // columns: current coordinates in original space
    let mut current: Vec<S> = weights.to_vec();
    let mut out_cols: Vec<Vec<S>> = Vec::new();
    let pol = TolerancePolicy::exact();
    while !current.is_empty() {
        let combo = find_unit_combo(&current).ok_or_else(|| {
            Error::UnsupportedSpectrum(
                "diagonal form has no Gaussian-rational unit vector".into(),
            )
        })?;
        // express in original coordinates
        let u = basis.apply(&combo);
        out_cols.push(u.clone());
        if current.len() == 1 {
            break;
        }
        // form-orthogonal complement inside the current space:
        // sum_i conj(c_i) w_i x_i = 0
        let mut row = Mat::<S>::zeros(1, current.len());
        for i in 0..current.len() {
            row[(0, i)] = combo[i].conj() * current[i].clone();
        }
        let comp = nullspace(&row, &pol);
        // new coordinates and their Gram diagonalization
        let new_basis = basis.matmul(&comp);
        let mut gram = Mat::<S>::zeros(comp.cols(), comp.cols());
        for a in 0..comp.cols() {
            for b in 0..comp.cols() {
                let mut acc = S::zero();
                for i in 0..current.len() {
                    acc = acc + comp[(i, a)].conj() * current[i].clone() * comp[(i, b)].clone();
                }
                gram[(a, b)] = acc;
            }
        }
        let (t, diag) = congruence_diagonalize(&gram, &pol)?;
        basis = new_basis.matmul(&t);
        current = diag;
    }
    Ok(Mat::from_cols(&out_cols))
}

/// Inertia counts (p, q, z) alone. Unlike [`hermitian_inertia`] this never
/// needs unit normalization, so it succeeds on every exact Hermitian input.
pub fn inertia_counts<S: Scalar>(
    d: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<(usize, usize, usize)> {
    assert!(d.is_square());
    super::solve::check_finite(d)?;
    if !d.is_hermitian_tol(pol.scaled_zero(d.frobenius_norm())) {
        return Err(Error::ContractViolation("input is not Hermitian".into()));
    }
    let (_, diag) = congruence_diagonalize(d, pol)?;
    let eps = pol.scaled_zero(d.frobenius_norm());
    let mut counts = (0usize, 0usize, 0usize);
    for v in &diag {
        if v.is_zero_tol(eps) {
            counts.2 += 1;
        } else if v.re_f64() > 0.0 {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
    }
    Ok(counts)
}

/// Sylvester inertia of a Hermitian matrix with a congruence witness
/// achieving I_p + (-I_q) + 0_z exactly.
pub fn hermitian_inertia<S: Scalar>(d: &Mat<S>, pol: &TolerancePolicy) -> Result<Inertia<S>> {
    assert!(d.is_square());
    super::solve::check_finite(d)?;
    let herm_tol = pol.scaled_zero(d.frobenius_norm());
    if !d.is_hermitian_tol(herm_tol) {
        return Err(Error::ContractViolation("input is not Hermitian".into()));
    }
    let n = d.rows();
    let (t, diag) = congruence_diagonalize(d, pol)?;
    let eps = pol.scaled_zero(d.frobenius_norm());
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    let mut zer: Vec<usize> = Vec::new();
    for (i, v) in diag.iter().enumerate() {
        if v.is_zero_tol(eps) {
            zer.push(i);
        } else if v.re_f64() > 0.0 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    // permute coordinates: positives, then negatives, then zeros
    let order: Vec<usize> = pos.iter().chain(&neg).chain(&zer).copied().collect();
    let perm = Mat::<S>::permutation(&invert_permutation(&order));
    let t = t.matmul(&perm);
    let pos_w: Vec<S> = pos.iter().map(|&i| diag[i].clone()).collect();
    let neg_w: Vec<S> = neg.iter().map(|&i| -diag[i].clone()).collect();
    let bp = positive_form_basis(&pos_w)?;
    let bn = positive_form_basis(&neg_w)?;
    let normalizer = bp.direct_sum(&bn).direct_sum(&Mat::identity(zer.len()));
    let transform = t.matmul(&normalizer);
    let inertia = Inertia {
        transform,
        positive: pos.len(),
        negative: neg.len(),
        zero: zer.len(),
    };
    debug_assert!(
        !S::EXACT
            || inertia
                .transform
                .adjoint()
                .matmul(d)
                .matmul(&inertia.transform)
                .approx_eq(&inertia.canonical(), 0.0)
    );
    let _ = n;
    Ok(inertia)
}

fn invert_permutation(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; order.len()];
    for (new_pos, &old_pos) in order.iter().enumerate() {
        inv[old_pos] = new_pos;
    }
    inv
}
