//! Eigenvalue computation for both backends.
//!
//! Float: Hessenberg reduction followed by shifted QR with deflation.
//! Exact: characteristic polynomial (Faddeev-LeVerrier), square-free part,
//! numeric root estimates, rational reconstruction of each root, and exact
//! verification. Inputs whose eigenvalues are not Gaussian rational are
//! rejected with an unsupported-spectrum error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

const MACH_EPS: f64 = 2.2e-16;

// ---------------------------------------------------------------------------
// float backend
// ---------------------------------------------------------------------------

fn hessenberg(mut h: Mat<Complex64>) -> Mat<Complex64> {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        // Householder on column k below the subdiagonal
        let mut x: Vec<Complex64> = (k + 1..n).map(|r| h[(r, k)]).collect();
        let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm <= MACH_EPS * h.frobenius_norm() {
            continue;
        }
        let alpha = if x[0].norm() > 0.0 {
            -(x[0] / x[0].norm()) * norm
        } else {
            Complex64::new(-norm, 0.0)
        };
        x[0] -= alpha;
        let wnorm2: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        if wnorm2 <= 0.0 {
            continue;
        }
        let scale = 2.0 / wnorm2;
        // H := P H P with P = I - scale * w w*
        for c in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, w) in x.iter().enumerate() {
                dot += w.conj() * h[(k + 1 + i, c)];
            }
            dot *= scale;
            for (i, w) in x.iter().enumerate() {
                let v = h[(k + 1 + i, c)] - dot * w;
                h[(k + 1 + i, c)] = v;
            }
        }
        for r in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, w) in x.iter().enumerate() {
                dot += h[(r, k + 1 + i)] * *w;
            }
            dot *= scale;
            for (i, w) in x.iter().enumerate() {
                let v = h[(r, k + 1 + i)] - dot * w.conj();
                h[(r, k + 1 + i)] = v;
            }
        }
    }
    h
}

fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let h = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / h;
    let s = (f / fn_) * g.conj() / h;
    (c, s)
}

fn eig_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    (l1, l2)
}

/// Eigenvalues of a dense complex matrix, in canonical lexicographic order.
pub fn float_eigenvalues<S: Scalar>(
    data: &[S],
    n: usize,
    _pol: &TolerancePolicy,
) -> Result<Vec<S>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = Mat::<Complex64>::from_fn(n, n, |r, c| {
        Complex64::new(data[r * n + c].re_f64(), data[r * n + c].im_f64())
    });
    if !a.has_finite_entries() {
        return Err(Error::MalformedInput("non-finite entries".into()));
    }
    let mut h = hessenberg(a);
    let mut eigs: Vec<Complex64> = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iters_on_block = 0usize;
    let mut total_iters = 0usize;
    let max_total = 60 * n * n + 200;
    let scale = h.frobenius_norm().max(1.0);
    while hi > 0 {
        if total_iters > max_total {
            return Err(Error::NonConvergence { iterations: total_iters });
        }
        // negligible subdiagonal entries -> exact zeros
        for k in 1..hi {
            let tol = MACH_EPS * (h[(k - 1, k - 1)].norm() + h[(k, k)].norm()).max(MACH_EPS * scale);
            if h[(k, k - 1)].norm() <= tol {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
            }
        }
        // deflate from the bottom
        if hi == 1 || h[(hi - 1, hi - 2)].norm() == 0.0 {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iters_on_block = 0;
            continue;
        }
        if hi == 2 || h[(hi - 2, hi - 3)].norm() == 0.0 {
            let (l1, l2) = eig_2x2(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            );
            eigs.push(l1);
            eigs.push(l2);
            hi -= 2;
            iters_on_block = 0;
            continue;
        }
        // start of the unreduced block ending at hi-1
        let mut lo = hi - 1;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }
        // Wilkinson shift from the trailing 2x2
        let (l1, l2) = eig_2x2(
            h[(hi - 2, hi - 2)],
            h[(hi - 2, hi - 1)],
            h[(hi - 1, hi - 2)],
            h[(hi - 1, hi - 1)],
        );
        let target = h[(hi - 1, hi - 1)];
        let mut sigma = if (l1 - target).norm() < (l2 - target).norm() { l1 } else { l2 };
        iters_on_block += 1;
        total_iters += 1;
        if iters_on_block % 12 == 0 {
            // exceptional shift to break cycling
            sigma = target + Complex64::new(h[(hi - 1, hi - 2)].norm() * 1.217, 0.31);
        }
        // implicit single-shift QR sweep on lo..hi: bulge chase with each
        // Givens rotation applied on both sides before the next is formed
        let mut f = h[(lo, lo)] - sigma;
        let mut g = h[(lo + 1, lo)];
        for k in lo..hi - 1 {
            let (c, s) = givens(f, g);
            let col_start = if k > lo { k - 1 } else { lo };
            for col in col_start..hi {
                let x = h[(k, col)];
                let y = h[(k + 1, col)];
                h[(k, col)] = x * c + y * s;
                h[(k + 1, col)] = -x * s.conj() + y * c;
            }
            for row in lo..(k + 3).min(hi) {
                let x = h[(row, k)];
                let y = h[(row, k + 1)];
                h[(row, k)] = x * c + y * s.conj();
                h[(row, k + 1)] = -x * s + y * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
            }
            if k + 2 < hi {
                f = h[(k + 1, k)];
                g = h[(k + 2, k)];
            }
        }
    }
    eigs.sort_by(|a, b| a.lex_cmp(b));
    Ok(eigs.into_iter().map(|z| S::from_f64(z.re, z.im)).collect())
}

/// Merge eigenvalues into clusters of radius `cluster_eps`, reporting each
/// cluster centroid with its multiplicity, in lexicographic order. Errors
/// when two distinct clusters sit too close to separate reliably.
pub fn cluster_eigenvalues<S: Scalar>(
    values: &[S],
    pol: &TolerancePolicy,
) -> Result<Vec<(S, usize)>> {
    if S::EXACT {
        let mut sorted = values.to_vec();
        crate::scalar::sort_lex(&mut sorted);
        let mut out: Vec<(S, usize)> = Vec::new();
        for v in sorted {
            match out.last_mut() {
                Some((rep, k)) if *rep == v => *k += 1,
                _ => out.push((v, 1)),
            }
        }
        return Ok(out);
    }
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = ((values[i].re_f64() - values[j].re_f64()).powi(2)
                + (values[i].im_f64() - values[j].im_f64()).powi(2))
            .sqrt();
            if d <= pol.cluster_eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<(S, usize)> = Vec::new();
    for (_, members) in groups {
        let k = members.len();
        let re = members.iter().map(|&i| values[i].re_f64()).sum::<f64>() / k as f64;
        let im = members.iter().map(|&i| values[i].im_f64()).sum::<f64>() / k as f64;
        out.push((S::from_f64(re, im), k));
    }
    // ambiguity: distinct centroids closer than twice the merge radius
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let d = ((out[i].0.re_f64() - out[j].0.re_f64()).powi(2)
                + (out[i].0.im_f64() - out[j].0.im_f64()).powi(2))
            .sqrt();
            if d < 2.0 * pol.cluster_eps && pol.cluster_eps > 0.0 {
                return Err(Error::IndeterminateSpectrum(format!(
                    "clusters at {} and {} separated by {d:.3e}, below 2*cluster_eps",
                    out[i].0, out[j].0
                )));
            }
        }
    }
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(out)
}

// ---------------------------------------------------------------------------
// polynomials over a scalar backend (ascending coefficients)
// ---------------------------------------------------------------------------

pub(crate) mod poly {
    use super::Scalar;

    pub fn trim<S: Scalar>(p: &mut Vec<S>) {
        while p.len() > 1 && p.last().map_or(false, |c| c.is_zero_tol(0.0)) {
            p.pop();
        }
    }

    pub fn degree<S: Scalar>(p: &[S]) -> usize {
        p.len().saturating_sub(1)
    }

    pub fn eval<S: Scalar>(p: &[S], x: &S) -> S {
        let mut acc = S::zero();
        for c in p.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative<S: Scalar>(p: &[S]) -> Vec<S> {
        if p.len() <= 1 {
            return vec![S::zero()];
        }
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| S::from_int(k as i64, 0) * c.clone())
            .collect()
    }

    /// Quotient and remainder; divisor must have invertible leading
    /// coefficient.
    pub fn divmod<S: Scalar>(num: &[S], den: &[S]) -> (Vec<S>, Vec<S>) {
        let dn = degree(den);
        let lead = den[dn].inv().expect("nonzero leading coefficient");
        let mut rem = num.to_vec();
        if degree(&rem) < dn {
            return (vec![S::zero()], rem);
        }
        let mut quot = vec![S::zero(); degree(&rem) - dn + 1];
        for k in (0..quot.len()).rev() {
            let coeff = lead.clone() * rem[k + dn].clone();
            quot[k] = coeff.clone();
            for j in 0..=dn {
                rem[k + j] = rem[k + j].clone() - coeff.clone() * den[j].clone();
            }
        }
        trim(&mut rem);
        (quot, rem)
    }

    /// Monic gcd via Euclid.
    pub fn gcd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !(y.len() == 1 && y[0].is_zero_tol(0.0)) {
            let (_, r) = divmod(&x, &y);
            x = y;
            y = r;
        }
        let lead = x.last().unwrap().inv().expect("nonzero");
        x.iter().map(|c| lead.clone() * c.clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// exact backend
// ---------------------------------------------------------------------------

/// Characteristic polynomial det(xI - A), ascending coefficients, monic.
pub fn char_poly<S: Scalar>(a: &Mat<S>) -> Vec<S> {
    assert!(a.is_square());
    let n = a.rows();
    // Faddeev-LeVerrier: exact over any field of characteristic zero
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut m = Mat::<S>::identity(n);
    for k in 1..=n {
        m = a.matmul(&m);
        let c = -(m.trace().div(&S::from_int(k as i64, 0)).expect("k nonzero"));
        for i in 0..n {
            m[(i, i)] = m[(i, i)].clone() + c.clone();
        }
        coeffs[n - k] = c;
    }
    coeffs
}

/// Best rational approximations of x with denominator at most `max_den`,
/// by continued fractions. Returned as (num, den) pairs to try in order.
fn rational_candidates(x: f64, max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    out.push((x.round() as i64, 1));
    let (mut h0, mut k0, mut h1, mut k1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if k1 > max_den || k1 < 0 {
            break;
        }
        out.push((h1, k1));
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a.abs() > 1e17 {
            break;
        }
        frac = inv - a;
        let a = a as i64;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0));
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0));
        match (h2, k2) {
            (Some(h2), Some(k2)) => {
                h0 = h1;
                k0 = k1;
                h1 = h2;
                k1 = k2;
            }
            _ => break,
        }
    }
    out
}

/// Eigenvalues with multiplicity for the exact backend, lexicographically
/// sorted. Errors with `UnsupportedSpectrum` when any eigenvalue fails to be
/// Gaussian rational.
pub fn exact_eigenvalues<S: Scalar>(
    data: &[S],
    n: usize,
    pol: &TolerancePolicy,
) -> Result<Vec<S>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = Mat::from_fn(n, n, |r, c| data[r * n + c].clone());
    let p = char_poly(&a);
    // square-free part isolates each distinct root once
    let dp = poly::derivative(&p);
    let g = poly::gcd(&p, &dp);
    let (sf, rem) = poly::divmod(&p, &g);
    debug_assert!(rem.iter().all(|c| c.is_zero_tol(0.0)));
    let d = poly::degree(&sf);
    // numeric estimates from the companion matrix of the square-free part
    let lead = sf[d].inv().expect("monic-izable");
    let monic: Vec<S> = sf.iter().map(|c| lead.clone() * c.clone()).collect();
    let mut companion = Mat::<Complex64>::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            companion[(i + 1, i)] = Complex64::new(1.0, 0.0);
        }
        companion[(i, d - 1)] = Complex64::new(-monic[i].re_f64(), -monic[i].im_f64());
    }
    let estimates = float_eigenvalues::<Complex64>(
        companion.data(),
        d,
        &TolerancePolicy::float_default(),
    )?;
    let mut roots: Vec<S> = Vec::new();
    'outer: for est in &estimates {
        // reconstruct a nearby Gaussian rational and verify exactly
        for (rn, rd) in rational_candidates(est.re, 1_000_000) {
            for (im_n, im_d) in rational_candidates(est.im, 1_000_000) {
                let cand = S::from_ratio(rn, rd) + S::i() * S::from_ratio(im_n, im_d);
                let close = (cand.re_f64() - est.re).abs() < 1e-4
                    && (cand.im_f64() - est.im).abs() < 1e-4;
                if close
                    && poly::eval(&monic, &cand).is_zero_tol(0.0)
                    && !roots.contains(&cand)
                {
                    roots.push(cand);
                    continue 'outer;
                }
            }
        }
        // estimate may be a duplicate of an already-verified root
        if roots
            .iter()
            .any(|r| (r.re_f64() - est.re).abs() < 1e-6 && (r.im_f64() - est.im).abs() < 1e-6)
        {
            continue;
        }
        return Err(Error::UnsupportedSpectrum(format!(
            "root near {est} is not recognizably Gaussian rational"
        )));
    }
    if roots.len() != d {
        return Err(Error::UnsupportedSpectrum(format!(
            "recovered {} of {} distinct roots",
            roots.len(),
            d
        )));
    }
    // multiplicities by exact repeated division
    let mut out: Vec<S> = Vec::new();
    let mut rest = p;
    for root in &roots {
        let lin = vec![-root.clone(), S::one()];
        loop {
            let (q, r) = poly::divmod(&rest, &lin);
            if r.iter().all(|c| c.is_zero_tol(0.0)) {
                out.push(root.clone());
                rest = q;
            } else {
                break;
            }
        }
    }
    if out.len() != n {
        return Err(Error::UnsupportedSpectrum(
            "characteristic polynomial does not split over the Gaussian rationals".into(),
        ));
    }
    let _ = pol;
    crate::scalar::sort_lex(&mut out);
    Ok(out)
}

/// Backend-dispatching eigenvalue computation on a matrix.
pub fn eigenvalues<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Result<Vec<S>> {
    assert!(m.is_square());
    S::eigenvalues_flat(m.data(), m.rows(), pol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type GQ = GaussianRational;

    #[test]
    fn float_qr_simple_spectrum() {
        let pol = TolerancePolicy::float_default();
        let m: Mat<Complex64> = Mat::from_int_rows(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, -3]]);
        let eigs = eigenvalues(&m, &pol).unwrap();
        let expected = [-3.0, 1.0, 2.0];
        for (e, want) in eigs.iter().zip(expected) {
            assert!((e.re - want).abs() < 1e-9 && e.im.abs() < 1e-9, "{e} vs {want}");
        }
    }

    #[test]
    fn float_qr_rotation_pair() {
        // [[0,1],[-1,0]] has eigenvalues +-i, and -i precedes i lexicographically
        let pol = TolerancePolicy::float_default();
        let m: Mat<Complex64> = Mat::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let eigs = eigenvalues(&m, &pol).unwrap();
        assert!((eigs[0] - Complex64::new(0.0, -1.0)).norm() < 1e-9);
        assert!((eigs[1] - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn exact_eigenvalues_with_multiplicity() {
        let pol = TolerancePolicy::exact();
        // diag(1,1,2) as a dense matrix
        let m: Mat<GQ> = Mat::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let eigs = eigenvalues(&m, &pol).unwrap();
        assert_eq!(eigs, vec![GQ::one(), GQ::one(), GQ::from_int(2, 0)]);
    }

    #[test]
    fn exact_eigenvalues_gaussian() {
        let pol = TolerancePolicy::exact();
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let eigs = eigenvalues(&m, &pol).unwrap();
        assert_eq!(eigs, vec![-GQ::i(), GQ::i()]);
    }

    #[test]
    fn exact_rejects_irrational_spectrum() {
        let pol = TolerancePolicy::exact();
        // eigenvalues +-sqrt(2)
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 2], &[1, 0]]);
        match eigenvalues(&m, &pol) {
            Err(Error::UnsupportedSpectrum(_)) => {}
            other => panic!("expected unsupported spectrum, got {other:?}"),
        }
    }

    #[test]
    fn exact_rational_eigenvalues() {
        let pol = TolerancePolicy::exact();
        // [[1/2, 0],[1, 1/3]]
        let m: Mat<GQ> = Mat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => GQ::from_ratio(1, 2),
            (1, 0) => GQ::one(),
            (1, 1) => GQ::from_ratio(1, 3),
            _ => GQ::zero(),
        });
        let eigs = eigenvalues(&m, &pol).unwrap();
        assert_eq!(eigs, vec![GQ::from_ratio(1, 3), GQ::from_ratio(1, 2)]);
    }

    #[test]
    fn clustering_groups_and_orders() {
        let pol = TolerancePolicy::float_default();
        let vals = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0 + 1e-12, 0.0),
            Complex64::new(3.0, 0.0),
        ];
        let clusters = cluster_eigenvalues(&vals, &pol).unwrap();
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].1, 2);
        assert_eq!(clusters[1].1, 1);
    }
}
