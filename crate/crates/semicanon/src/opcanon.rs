//! Reductions and canonical forms of bounded operators: the triangular
//! reduced form with decoupled cross-eigenvalue blocks, canonical summands of
//! seminormal operators by two independent routes, and the eigenvalue
//! multiplicity inequalities for indecomposable bounded operators.

use crate::error::{Error, Result};
use crate::kernel::jordan::{jordan_decomposition, jordan_structure, JordanStructure};
use crate::kernel::schur::{schur_ordered, EigenOrderSpec, TriangularShape};
use crate::kernel::sylvester::sylvester_solve;
use crate::kernel::unitary::orthonormal_basis;
use crate::kernel::{eigen, kernel_basis, normal_diagonalize, rank};
use crate::kv::{
    apply_similarity, is_bounded, is_metric, is_selfadjoint, is_seminormal,
    operator_summands_to_kv, sort_operator_summands, KvMatrix, OperatorSummand,
    SemiunitaryTransform,
};
use crate::mat::Mat;
use crate::randgen::random_transform;
use crate::scalar::{Scalar, TolerancePolicy};

/// Output of [`reduce_bounded`]: the unitary block lower triangular with
/// eigenvalue groups in order, the isotropic block in Jordan form, and
/// couplings only between equal eigenvalues.
#[derive(Debug, Clone)]
pub struct ReducedForm33<S: Scalar> {
    pub transform: SemiunitaryTransform<S>,
    pub result: KvMatrix<S>,
    /// Distinct eigenvalues of the unitary block, in diagonal order, with
    /// multiplicities.
    pub eigen_order: Vec<(S, usize)>,
    /// Jordan blocks (eigenvalue, size) of the isotropic block, in order.
    pub jordan_blocks: Vec<(S, usize)>,
}

fn scalar_close<S: Scalar>(a: &S, b: &S, pol: &TolerancePolicy) -> bool {
    if S::EXACT {
        a == b
    } else {
        a.approx_eq(b, pol.cluster_eps.max(1e-12))
    }
}

/// Ranges of the diagonal groups: (value, start..end).
fn group_ranges<S: Scalar>(groups: &[(S, usize)]) -> Vec<(S, std::ops::Range<usize>)> {
    let mut out = Vec::new();
    let mut at = 0usize;
    for (v, k) in groups {
        out.push((v.clone(), at..at + k));
        at += k;
    }
    out
}

/// Zero every coupling block between an isotropic Jordan block and a
/// unitary eigenvalue group with a different eigenvalue. The unitary block
/// of `a` must already be block lower triangular with the given groups and
/// the isotropic block in Jordan form with the given blocks.
fn clear_cross_couplings<S: Scalar>(
    a: &KvMatrix<S>,
    unitary_groups: &[(S, usize)],
    jordan_blocks: &[(S, usize)],
    pol: &TolerancePolicy,
) -> Result<(SemiunitaryTransform<S>, KvMatrix<S>)> {
    let space = a.space;
    let mut current = a.clone();
    let mut total = SemiunitaryTransform::identity(space);
    let col_ranges = group_ranges(unitary_groups);
    let row_ranges = group_ranges(jordan_blocks);
    // sweep rows top to bottom, columns right to left; this order leaves
    // already-cleared blocks untouched
    for (mu, rows) in &row_ranges {
        for (lambda, cols) in col_ranges.iter().rev() {
            if scalar_close(lambda, mu, pol) {
                continue;
            }
            let c_block = current.a21.block(rows.start, rows.end, cols.start, cols.end);
            if c_block.is_zero_tol(0.0) {
                continue;
            }
            let j_block = current.a22.block(rows.start, rows.end, rows.start, rows.end);
            let b_block = current.a11.block(cols.start, cols.end, cols.start, cols.end);
            let x = sylvester_solve(&j_block, &b_block, &c_block, pol)?;
            let mut s21 = Mat::zeros(space.isotropic_dim(), space.m);
            s21.set_block(rows.start, cols.start, &x);
            let step = SemiunitaryTransform::new(
                space,
                Mat::identity(space.m),
                s21,
                Mat::identity(space.isotropic_dim()),
            );
            current = apply_similarity(&current, &step, pol)?;
            total = total.compose(&step);
        }
    }
    Ok((total, current))
}

/// Reduce a bounded operator: unitary part to block lower triangular with
/// grouped eigenvalues, isotropic part to Jordan form, couplings between
/// distinct eigenvalues cleared by coupling-equation solves.
pub fn reduce_bounded<S: Scalar>(
    a: &KvMatrix<S>,
    pol: &TolerancePolicy,
) -> Result<ReducedForm33<S>> {
    if !is_bounded(a, pol) {
        return Err(Error::ContractViolation("operator is not bounded".into()));
    }
    let space = a.space;
    let (m, iso) = (space.m, space.isotropic_dim());
    let (p, eigen_order) = if m > 0 {
        let dec = schur_ordered(&a.a11, &EigenOrderSpec::Lex, TriangularShape::Lower, pol)?;
        let groups = eigen::cluster_eigenvalues(&dec.diagonal, pol)?;
        (dec.q, groups)
    } else {
        (Mat::identity(0), Vec::new())
    };
    let (t_j, jordan_blocks) = if iso > 0 {
        let (t, structure) = jordan_decomposition(&a.a22, pol)?;
        let blocks: Vec<(S, usize)> = structure
            .blocks
            .iter()
            .flat_map(|(l, sizes)| sizes.iter().map(move |&s| (l.clone(), s)))
            .collect();
        (t, blocks)
    } else {
        (Mat::identity(0), Vec::new())
    };
    let s1 = SemiunitaryTransform::new(space, p, Mat::zeros(iso, m), t_j);
    let staged = apply_similarity(a, &s1, pol)?;
    let (s2, result) = clear_cross_couplings(&staged, &eigen_order, &jordan_blocks, pol)?;
    let transform = s1.compose(&s2);
    // contract: couplings between distinct eigenvalues vanish
    debug_assert!(verify_reduced_contract(&result, &eigen_order, &jordan_blocks, pol));
    Ok(ReducedForm33 { transform, result, eigen_order, jordan_blocks })
}

/// Blockwise check of the reduced-form contract.
pub fn verify_reduced_contract<S: Scalar>(
    result: &KvMatrix<S>,
    eigen_order: &[(S, usize)],
    jordan_blocks: &[(S, usize)],
    pol: &TolerancePolicy,
) -> bool {
    let tol = pol.scaled_zero(result.to_full().frobenius_norm()).max(if S::EXACT {
        0.0
    } else {
        1e-8
    });
    for (mu, rows) in group_ranges(jordan_blocks) {
        for (lambda, cols) in group_ranges(eigen_order) {
            if scalar_close(&lambda, &mu, pol) {
                continue;
            }
            if !result.a21.block(rows.start, rows.end, cols.start, cols.end).is_zero_tol(tol) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// invariant route to the canonical summands
// ---------------------------------------------------------------------------

fn sizes_at<'a, S: Scalar>(
    structure: &'a JordanStructure<S>,
    lambda: &S,
    pol: &TolerancePolicy,
) -> &'a [usize] {
    structure
        .blocks
        .iter()
        .find(|(l, _)| scalar_close(l, lambda, pol))
        .map(|(_, s)| s.as_slice())
        .unwrap_or(&[])
}

/// Enumerate distinct size-submultisets of `pool` with `k` elements.
fn submultisets(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        pool: &[usize],
        at: usize,
        k: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        if at >= pool.len() || pool.len() - at < k - current.len() {
            return;
        }
        // take pool[at]
        current.push(pool[at]);
        recurse(pool, at + 1, k, current, out);
        current.pop();
        // skip all copies of pool[at]
        let mut next = at + 1;
        while next < pool.len() && pool[next] == pool[at] {
            next += 1;
        }
        recurse(pool, next, k, current, out);
    }
    recurse(pool, 0, k, &mut current, &mut out);
    out
}

fn multiset_eq(a: &[usize], b: &[usize]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Canonical summands of a seminormal operator, extracted from similarity
/// invariants alone: the Jordan structure of the full matrix, of the
/// isotropic block, and the spectrum of the unitary block.
pub fn seminormal_summands<S: Scalar>(
    a: &KvMatrix<S>,
    pol: &TolerancePolicy,
) -> Result<Vec<OperatorSummand<S>>> {
    if !is_seminormal(a, pol) {
        return Err(Error::ContractViolation("operator is not seminormal".into()));
    }
    let full_structure = jordan_structure(&a.to_full(), pol)?;
    let iso_structure = if a.space.isotropic_dim() > 0 {
        jordan_structure(&a.a22, pol)?
    } else {
        JordanStructure { blocks: Vec::new() }
    };
    let unitary_mults: Vec<(S, usize)> = if a.space.m > 0 {
        let evs = eigen::eigenvalues(&a.a11, pol)?;
        eigen::cluster_eigenvalues(&evs, pol)?
    } else {
        Vec::new()
    };
    let mut out: Vec<OperatorSummand<S>> = Vec::new();
    for (lambda, full_sizes) in &full_structure.blocks {
        let k = unitary_mults
            .iter()
            .find(|(l, _)| scalar_close(l, lambda, pol))
            .map(|(_, k)| *k)
            .unwrap_or(0);
        let iso_sizes = sizes_at(&iso_structure, lambda, pol);
        let mut found: Option<Vec<usize>> = None;
        for t in submultisets(full_sizes, k) {
            let mut derived: Vec<usize> =
                full_sizes.iter().copied().collect::<Vec<_>>();
            // remove T, add back n-1 for each n >= 2 in T
            for n in &t {
                let pos = derived.iter().position(|x| x == n).expect("member");
                derived.remove(pos);
                if *n >= 2 {
                    derived.push(*n - 1);
                }
            }
            if multiset_eq(&derived, iso_sizes) {
                if let Some(prev) = &found {
                    if !multiset_eq(prev, &t) {
                        return Err(Error::Internal(format!(
                            "ambiguous summand split at {lambda}: {prev:?} vs {t:?}"
                        )));
                    }
                } else {
                    found = Some(t);
                }
            }
        }
        let t = found.ok_or_else(|| {
            Error::NumericInconsistency(format!(
                "no consistent coupled-summand selection at {lambda}"
            ))
        })?;
        let mut rest: Vec<usize> = full_sizes.clone();
        for n in &t {
            let pos = rest.iter().position(|x| x == n).expect("member");
            rest.remove(pos);
            out.push(OperatorSummand { size: *n, eigenvalue: lambda.clone(), coupled: true });
        }
        for n in rest {
            out.push(OperatorSummand { size: n, eigenvalue: lambda.clone(), coupled: false });
        }
    }
    sort_operator_summands(&mut out);
    Ok(out)
}

/// Canonical summands of a selfadjoint operator; asserts that every coupled
/// eigenvalue is real.
pub fn selfadjoint_canon<S: Scalar>(
    a: &KvMatrix<S>,
    pol: &TolerancePolicy,
) -> Result<Vec<OperatorSummand<S>>> {
    if !is_selfadjoint(a, pol) {
        return Err(Error::ContractViolation("operator is not selfadjoint".into()));
    }
    let summands = seminormal_summands(a, pol)?;
    for s in &summands {
        if s.coupled && !s.eigenvalue.is_real_tol(pol.cluster_eps) {
            return Err(Error::NumericInconsistency(format!(
                "coupled eigenvalue {} of a selfadjoint operator is not real",
                s.eigenvalue
            )));
        }
    }
    Ok(summands)
}

/// Canonical summands of a metric operator; asserts that every coupled
/// eigenvalue has unit modulus.
pub fn metric_canon<S: Scalar>(
    a: &KvMatrix<S>,
    pol: &TolerancePolicy,
) -> Result<Vec<OperatorSummand<S>>> {
    if !is_metric(a, pol) {
        return Err(Error::ContractViolation("operator is not metric".into()));
    }
    let summands = seminormal_summands(a, pol)?;
    for s in &summands {
        if s.coupled {
            let m2 = s.eigenvalue.abs2();
            if !m2.approx_eq(&S::one(), pol.cluster_eps.max(1e-9) * 3.0) {
                return Err(Error::NumericInconsistency(format!(
                    "coupled eigenvalue {} of a metric operator is off the unit circle",
                    s.eigenvalue
                )));
            }
        }
    }
    Ok(summands)
}

// ---------------------------------------------------------------------------
// constructive route: canonical basis with a similarity witness
// ---------------------------------------------------------------------------

/// Canonical basis of a seminormal operator: a semiunitary transform taking
/// the operator exactly to the sorted block-direct sum of its summands.
#[derive(Debug, Clone)]
pub struct CanonicalBasis<S: Scalar> {
    pub transform: SemiunitaryTransform<S>,
    pub canonical: KvMatrix<S>,
    pub summands: Vec<OperatorSummand<S>>,
}

struct ChainData<S> {
    eigenvalue: S,
    /// Offsets into the isotropic strip, top vector first.
    rows: Vec<usize>,
}

/// Chains of the Jordan-form isotropic block, per eigenvalue, longest first.
fn chain_layout<S: Scalar>(structure: &JordanStructure<S>) -> Vec<ChainData<S>> {
    let mut out = Vec::new();
    let mut at = 0usize;
    for (lambda, sizes) in &structure.blocks {
        for &size in sizes {
            out.push(ChainData {
                eigenvalue: lambda.clone(),
                rows: (at..at + size).collect(),
            });
            at += size;
        }
    }
    out
}

pub fn seminormal_canonical_basis<S: Scalar>(
    a: &KvMatrix<S>,
    pol: &TolerancePolicy,
) -> Result<CanonicalBasis<S>> {
    if !is_seminormal(a, pol) {
        return Err(Error::ContractViolation("operator is not seminormal".into()));
    }
    let space = a.space;
    let (m, iso) = (space.m, space.isotropic_dim());
    // stage 1: unitary part to grouped diagonal, isotropic part to Jordan
    let (p, unitary_groups) = if m > 0 {
        normal_diagonalize(&a.a11, pol)?
    } else {
        (Mat::identity(0), Vec::new())
    };
    let (t_j, iso_structure) = if iso > 0 {
        jordan_decomposition(&a.a22, pol)?
    } else {
        (Mat::identity(0), JordanStructure { blocks: Vec::new() })
    };
    let s1 = SemiunitaryTransform::new(space, p, Mat::zeros(iso, m), t_j);
    let staged = apply_similarity(a, &s1, pol)?;
    // stage 2: decouple distinct eigenvalues
    let iso_blocks: Vec<(S, usize)> = iso_structure
        .blocks
        .iter()
        .flat_map(|(l, sizes)| sizes.iter().map(move |&s| (l.clone(), s)))
        .collect();
    let (s2, staged) = clear_cross_couplings(&staged, &unitary_groups, &iso_blocks, pol)?;
    // stage 3: clear coupling rows below each chain top by shift additions
    let chains = chain_layout(&iso_structure);
    let group_cols = group_ranges(&unitary_groups);
    let mut x = Mat::<S>::zeros(iso, m);
    for chain in &chains {
        if let Some((_, cols)) = group_cols
            .iter()
            .find(|(l, _)| scalar_close(l, &chain.eigenvalue, pol))
        {
            for depth in 1..chain.rows.len() {
                for c in cols.clone() {
                    let v = staged.a21[(chain.rows[depth], c)].clone();
                    x[(chain.rows[depth - 1], c)] = -v;
                }
            }
        }
    }
    let s3 = SemiunitaryTransform::new(space, Mat::identity(m), x, Mat::identity(iso));
    let staged = apply_similarity(&staged, &s3, pol)?;
    // stage 4: per eigenvalue, choose the new unitary directions along the
    // flag of chain-annihilation conditions and regenerate chains
    let tol = pol.scaled_zero(staged.to_full().frobenius_norm());
    let mut lambdas: Vec<S> = Vec::new();
    for (l, _) in &unitary_groups {
        if !lambdas.iter().any(|x| scalar_close(x, l, pol)) {
            lambdas.push(l.clone());
        }
    }
    for (l, _) in &iso_structure.blocks {
        if !lambdas.iter().any(|x| scalar_close(x, l, pol)) {
            lambdas.push(l.clone());
        }
    }
    lambdas.sort_by(|a, b| a.lex_cmp(b));

    struct CoupledPick<S> {
        size: usize,
        u: Vec<S>,          // coordinates inside the group's column range
        cols: std::ops::Range<usize>,
        fresh: Vec<Vec<S>>, // iso vectors of the regenerated chain
    }
    let mut coupled: Vec<(S, CoupledPick<S>)> = Vec::new();
    let mut isotropic: Vec<(S, Vec<Vec<S>>)> = Vec::new(); // chain vectors

    for lambda in &lambdas {
        let cols = group_cols
            .iter()
            .find(|(l, _)| scalar_close(l, lambda, pol))
            .map(|(_, r)| r.clone())
            .unwrap_or(0..0);
        let k = cols.len();
        let my_chains: Vec<&ChainData<S>> = chains
            .iter()
            .filter(|c| scalar_close(&c.eigenvalue, lambda, pol))
            .collect();
        // compact coupling: one row per chain (its top row)
        let f = Mat::from_fn(my_chains.len(), k, |ci, j| {
            staged.a21[(my_chains[ci].rows[0], cols.start + j)].clone()
        });
        // distinct chain sizes ascending define the flag levels
        let mut levels: Vec<usize> = my_chains.iter().map(|c| c.rows.len()).collect();
        levels.sort_unstable();
        levels.dedup();
        let mut chosen: Vec<Vec<S>> = Vec::new(); // orthonormal u's so far
        let mut picks: Vec<CoupledPick<S>> = Vec::new();
        let mut level_list = vec![0usize];
        level_list.extend(levels.iter().copied());
        for &level in &level_list {
            if k == 0 {
                break;
            }
            // level-t subspace: annihilated by every chain longer than t
            let deeper: Vec<usize> = my_chains
                .iter()
                .enumerate()
                .filter(|(_, c)| c.rows.len() > level)
                .map(|(i, _)| i)
    .collect();
            let sub = if deeper.is_empty() {
                Mat::identity(k)
            } else {
                let rows = Mat::from_fn(deeper.len(), k, |r, c| f[(deeper[r], c)].clone());
                kernel_basis(&rows, pol)
            };
            if sub.cols() == 0 {
                continue;
            }
            // project away the already-chosen directions, orthonormalize
            let mut cand: Vec<Vec<S>> = Vec::new();
            for c in 0..sub.cols() {
                let mut v = sub.col(c);
                for u in &chosen {
                    let coeff = Mat::dot(u, &v);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi = vi.clone() - coeff.clone() * ui.clone();
                    }
                }
                if !Mat::norm_sq_vec(&v).is_zero_tol(tol.powi(2).max(pol.zero_eps)) {
                    cand.push(v);
                }
            }
            if cand.is_empty() {
                continue;
            }
            let fresh_us = orthonormal_basis(&Mat::from_cols(&cand), pol)?;
            for uc in 0..fresh_us.cols() {
                let u = fresh_us.col(uc);
                // regenerate the chain for this direction
                let mut fresh: Vec<Vec<S>> = Vec::new();
                for depth in 1..=level {
                    let mut vec = vec![S::zero(); iso];
                    for (ci, chain) in my_chains.iter().enumerate() {
                        if chain.rows.len() >= depth {
                            let coeff = Mat::dot(
                                &(0..k).map(|j| f[(ci, j)].conj()).collect::<Vec<_>>(),
                                &u,
                            );
                            if !coeff.is_zero_tol(0.0) {
                                vec[chain.rows[depth - 1]] =
                                    vec[chain.rows[depth - 1]].clone() + coeff;
                            }
                        }
                    }
                    fresh.push(vec);
                }
                chosen.push(u.clone());
                picks.push(CoupledPick { size: level + 1, u, cols: cols.clone(), fresh });
            }
        }
        if chosen.len() != k {
            return Err(Error::NumericInconsistency(format!(
                "flag basis at {lambda} found {} of {k} unitary directions",
                chosen.len()
            )));
        }
        // completion: old chains that stay independent of the fresh vectors
        let mut basis_cols: Vec<Vec<S>> = picks.iter().flat_map(|p| p.fresh.clone()).collect();
        let mut current_rank = if basis_cols.is_empty() {
            0
        } else {
            rank(&Mat::from_cols(&basis_cols), pol)?
        };
        for chain in &my_chains {
            let mut candidate = basis_cols.clone();
            for &row in &chain.rows {
                let mut e = vec![S::zero(); iso];
                e[row] = S::one();
                candidate.push(e);
            }
            let cand_rank = rank(&Mat::from_cols(&candidate), pol)?;
            if cand_rank == current_rank + chain.rows.len() {
                let vecs: Vec<Vec<S>> = chain
                    .rows
                    .iter()
                    .map(|&row| {
                        let mut e = vec![S::zero(); iso];
                        e[row] = S::one();
                        e
                    })
                    .collect();
                isotropic.push((lambda.clone(), vecs));
                basis_cols = candidate;
                current_rank = cand_rank;
            }
        }
        for p in picks {
            coupled.push((lambda.clone(), p));
        }
    }
    // assemble the summand list and sort canonically
    let mut summands: Vec<OperatorSummand<S>> = Vec::new();
    for (l, p) in &coupled {
        summands.push(OperatorSummand { size: p.size, eigenvalue: l.clone(), coupled: true });
    }
    for (l, vecs) in &isotropic {
        summands.push(OperatorSummand { size: vecs.len(), eigenvalue: l.clone(), coupled: false });
    }
    sort_operator_summands(&mut summands);
    // order basis columns to match the sorted assembly
    let mut u_cols: Vec<Vec<S>> = Vec::new();
    let mut iso_cols: Vec<Vec<S>> = Vec::new();
    let mut coupled_used = vec![false; coupled.len()];
    let mut iso_used = vec![false; isotropic.len()];
    for s in &summands {
        if s.coupled {
            let idx = coupled
                .iter()
                .enumerate()
                .position(|(i, (l, p))| {
                    !coupled_used[i] && scalar_close(l, &s.eigenvalue, pol) && p.size == s.size
                })
                .expect("summand matches a pick");
            coupled_used[idx] = true;
            let (_, p) = &coupled[idx];
            let mut u_full = vec![S::zero(); m];
            for (j, col) in p.cols.clone().enumerate() {
                u_full[col] = p.u[j].clone();
            }
            u_cols.push(u_full);
            for v in &p.fresh {
                iso_cols.push(v.clone());
            }
        } else {
            let idx = isotropic
                .iter()
                .enumerate()
                .position(|(i, (l, vecs))| {
                    !iso_used[i] && scalar_close(l, &s.eigenvalue, pol) && vecs.len() == s.size
                })
                .expect("summand matches a chain");
            iso_used[idx] = true;
            for v in &isotropic[idx].1 {
                iso_cols.push(v.clone());
            }
        }
    }
    let s11 = if u_cols.is_empty() { Mat::identity(m) } else { Mat::from_cols(&u_cols) };
    let s22 = if iso_cols.is_empty() { Mat::identity(iso) } else { Mat::from_cols(&iso_cols) };
    let s4 = SemiunitaryTransform::new(space, s11, Mat::zeros(iso, m), s22);
    let transform = s1.compose(&s2).compose(&s3).compose(&s4);
    let canonical = apply_similarity(a, &transform, pol)?;
    let expected = operator_summands_to_kv(&summands);
    let check_tol = if S::EXACT { 0.0 } else { pol.cluster_eps.max(1e-7) };
    if !canonical.approx_eq(&expected, check_tol) {
        return Err(Error::NumericInconsistency(
            "canonical-basis witness does not reproduce the summand assembly".into(),
        ));
    }
    Ok(CanonicalBasis { transform, canonical, summands })
}

// ---------------------------------------------------------------------------
// multiplicity inequalities
// ---------------------------------------------------------------------------

/// Per-eigenvalue record of the multiplicity checks for an indecomposable
/// bounded operator with a proper isotropic part.
#[derive(Debug, Clone)]
pub struct EigenvalueReport<S> {
    pub eigenvalue: S,
    pub shared: bool,
    pub alg_mult_unitary: usize,
    pub geom_mult_unitary: usize,
    pub geom_mult_isotropic: usize,
    /// (block size, count) in the isotropic block.
    pub jordan_counts_isotropic: Vec<(usize, usize)>,
    pub check_shared: bool,
    pub check_algebraic: bool,
    pub check_geometric: bool,
}

#[derive(Debug, Clone)]
pub struct MultiplicityReport<S> {
    pub per_eigenvalue: Vec<EigenvalueReport<S>>,
}

impl<S> MultiplicityReport<S> {
    pub fn all_pass(&self) -> bool {
        self.per_eigenvalue
            .iter()
            .all(|r| r.check_shared && r.check_algebraic && r.check_geometric)
    }
}

/// Evaluate the three eigenvalue-multiplicity checks on a bounded operator
/// the caller asserts to be indecomposable.
pub fn verify_t22<S: Scalar>(
    a: &KvMatrix<S>,
    pol: &TolerancePolicy,
    _assert_indecomposable: bool,
) -> Result<MultiplicityReport<S>> {
    if a.space.m == 0 || a.space.m == a.space.n {
        return Err(Error::HypothesisViolation(
            "the checks require a proper nonzero isotropic part (0 < m < n)".into(),
        ));
    }
    if !is_bounded(a, pol) {
        return Err(Error::ContractViolation("operator is not bounded".into()));
    }
    let unitary = jordan_structure(&a.a11, pol)?;
    let isotropic = jordan_structure(&a.a22, pol)?;
    let mut per = Vec::new();
    for (lambda, iso_sizes) in &isotropic.blocks {
        let uni_sizes = sizes_at(&unitary, lambda, pol);
        let shared = !uni_sizes.is_empty();
        let alg_mult_unitary: usize = uni_sizes.iter().sum();
        let geom_mult_unitary = uni_sizes.len();
        let geom_mult_isotropic = iso_sizes.len();
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for &s in iso_sizes {
            match counts.iter_mut().find(|(size, _)| *size == s) {
                Some((_, c)) => *c += 1,
                None => counts.push((s, 1)),
            }
        }
        let max_count = counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
        per.push(EigenvalueReport {
            eigenvalue: lambda.clone(),
            shared,
            alg_mult_unitary,
            geom_mult_unitary,
            geom_mult_isotropic,
            jordan_counts_isotropic: counts,
            check_shared: shared,
            check_algebraic: alg_mult_unitary >= geom_mult_isotropic,
            check_geometric: geom_mult_unitary >= max_count,
        });
    }
    Ok(MultiplicityReport { per_eigenvalue: per })
}

/// Shape of a generated indecomposable instance: strictly increasing
/// isotropic chain sizes sharing one eigenvalue.
#[derive(Debug, Clone)]
pub struct T22Shape<S> {
    pub sizes: Vec<usize>,
    pub eigenvalue: S,
}

/// Assemble an indecomposable bounded instance: one unitary Jordan chain of
/// length (number of isotropic chains), isotropic chains of the given
/// distinct sizes, and a connected full-row-rank coupling pattern; then
/// scramble by a random semiunitary change of basis.
pub fn t22_instance<S: Scalar>(shape: &T22Shape<S>, seed: u64) -> Result<KvMatrix<S>> {
    if shape.sizes.is_empty() {
        return Err(Error::ContractViolation("shape needs at least one chain".into()));
    }
    for w in shape.sizes.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::ContractViolation(
                "chain sizes must be strictly increasing".into(),
            ));
        }
    }
    let g = shape.sizes.len();
    let m = g;
    let iso: usize = shape.sizes.iter().sum();
    let lambda = &shape.eigenvalue;
    let a11 = crate::kernel::jordan::jordan_block(lambda, m);
    let mut a22 = Mat::<S>::zeros(iso, iso);
    let mut a21 = Mat::<S>::zeros(iso, m);
    let mut at = 0usize;
    for (ci, &size) in shape.sizes.iter().enumerate() {
        for k in 0..size {
            a22[(at + k, at + k)] = lambda.clone();
            if k + 1 < size {
                a22[(at + k + 1, at + k)] = S::one();
            }
        }
        // connected coupling: chain i hits unitary coordinates i and i-1
        a21[(at, ci)] = S::one();
        if ci > 0 {
            a21[(at, ci - 1)] = S::one();
        }
        at += size;
    }
    let space = crate::kv::SemiunitarySpace::new(m + iso, m);
    let instance = KvMatrix::new(space, a11, Mat::zeros(m, iso), a21, a22);
    let s = random_transform::<S>(space, seed);
    apply_similarity(&instance, &s, &crate::scalar::backend_policy::<S>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kv::{operator_summands_eq, SemiunitarySpace};
    use crate::randgen::{random_kv, random_transform, structured_instance, Profile};
    use crate::scalar::GaussianRational;

    type GQ = GaussianRational;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::exact()
    }

    fn kv_of(space: (usize, usize), rows: &[&[i64]]) -> KvMatrix<GQ> {
        KvMatrix::from_full(SemiunitarySpace::new(space.0, space.1), &Mat::from_int_rows(rows))
    }

    #[test]
    fn reduce_bounded_decouples_scalar_case() {
        // A11 = [1], A22 = [2], coupling c: cleared by one solve
        let a = kv_of((2, 1), &[&[1, 0], &[5, 2]]);
        let red = reduce_bounded(&a, &pol()).unwrap();
        assert!(red.result.a21.is_zero_tol(0.0));
        let replay = apply_similarity(&a, &red.transform, &pol()).unwrap();
        assert_eq!(replay, red.result);
    }

    #[test]
    fn reduce_bounded_keeps_matched_coupling() {
        // same eigenvalue above and below: coupling may stay
        let a = kv_of((2, 1), &[&[1, 0], &[5, 1]]);
        let red = reduce_bounded(&a, &pol()).unwrap();
        assert!(verify_reduced_contract(&red.result, &red.eigen_order, &red.jordan_blocks, &pol()));
        assert_eq!(red.result.a21[(0, 0)], GQ::from_int(5, 0));
    }

    #[test]
    fn reduce_bounded_on_canonical_summand() {
        let a = kv_of((2, 1), &[&[0, 0], &[1, 0]]);
        let red = reduce_bounded(&a, &pol()).unwrap();
        assert_eq!(red.result, a);
    }

    #[test]
    fn reduce_bounded_random_instances() {
        for seed in 0..10 {
            let mut rng = crate::randgen::rng_from_seed(seed + 400);
            let space = crate::randgen::random_space(&mut rng, 6);
            let a: KvMatrix<GQ> = random_kv(space, Profile::Bounded, seed);
            let red = reduce_bounded(&a, &pol()).unwrap();
            assert!(
                verify_reduced_contract(&red.result, &red.eigen_order, &red.jordan_blocks, &pol()),
                "seed {seed}"
            );
            let replay = apply_similarity(&a, &red.transform, &pol()).unwrap();
            assert_eq!(replay, red.result, "seed {seed}");
        }
    }

    #[test]
    fn summands_of_canonical_pieces() {
        // [J_2(0)]_1
        let a = kv_of((2, 1), &[&[0, 0], &[1, 0]]);
        let s = seminormal_summands(&a, &pol()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].coupled && s[0].size == 2 && s[0].eigenvalue == GQ::zero());
        // zero 2x2 with m=1: two summands
        let z = kv_of((2, 1), &[&[0, 0], &[0, 0]]);
        let s = seminormal_summands(&z, &pol()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[0].coupled && s[0].size == 1);
        assert!(!s[1].coupled && s[1].size == 1);
    }

    #[test]
    fn summands_invariant_under_conjugation() {
        for seed in 0..8 {
            let space = SemiunitarySpace::new(5, 2);
            let (a, expected) = structured_instance::<GQ>(space, Profile::Seminormal, seed);
            let got = seminormal_summands(&a, &pol()).unwrap();
            assert!(operator_summands_eq(&got, &expected, 0.0), "seed {seed}");
            let s = random_transform::<GQ>(space, seed + 1000);
            let conj = apply_similarity(&a, &s, &pol()).unwrap();
            let got2 = seminormal_summands(&conj, &pol()).unwrap();
            assert!(operator_summands_eq(&got, &got2, 0.0), "seed {seed}");
        }
    }

    #[test]
    fn canonical_basis_witness_exact() {
        for seed in 0..8 {
            let mut rng = crate::randgen::rng_from_seed(seed * 31 + 7);
            let space = crate::randgen::random_space(&mut rng, 6);
            let (a, expected) = structured_instance::<GQ>(space, Profile::Seminormal, seed);
            let cb = seminormal_canonical_basis(&a, &pol()).unwrap();
            // witness identity holds exactly and the summands agree with the
            // invariant route
            assert!(operator_summands_eq(&cb.summands, &expected, 0.0), "seed {seed}");
            let invariant = seminormal_summands(&a, &pol()).unwrap();
            assert!(operator_summands_eq(&cb.summands, &invariant, 0.0), "seed {seed}");
            assert!(cb.transform.s11.adjoint().matmul(&cb.transform.s11).is_identity_tol(0.0));
        }
    }

    #[test]
    fn canonical_basis_simple_cases() {
        // already canonical: [J_2(0)]_1
        let a = kv_of((2, 1), &[&[0, 0], &[1, 0]]);
        let cb = seminormal_canonical_basis(&a, &pol()).unwrap();
        assert_eq!(cb.canonical, a);
        // decoupled diagonal selfadjoint: [3]_1 boxplus [J_1(4)]_0
        let b = kv_of((2, 1), &[&[3, 0], &[0, 4]]);
        let cb = seminormal_canonical_basis(&b, &pol()).unwrap();
        assert_eq!(cb.summands.len(), 2);
        assert!(cb.summands[0].coupled && cb.summands[0].eigenvalue == GQ::from_int(3, 0));
        assert!(!cb.summands[1].coupled && cb.summands[1].eigenvalue == GQ::from_int(4, 0));
    }

    #[test]
    fn selfadjoint_and_metric_constraints() {
        let space = SemiunitarySpace::new(4, 2);
        for seed in 0..5 {
            let (a, _) = structured_instance::<GQ>(space, Profile::Selfadjoint, seed);
            let s = selfadjoint_canon(&a, &pol()).unwrap();
            assert!(s.iter().filter(|x| x.coupled).all(|x| x.eigenvalue.is_real_tol(0.0)));
            let (b, _) = structured_instance::<GQ>(space, Profile::Metric, seed);
            let t = metric_canon(&b, &pol()).unwrap();
            assert!(t
                .iter()
                .filter(|x| x.coupled)
                .all(|x| x.eigenvalue.abs2() == GQ::one()));
        }
    }

    #[test]
    fn t22_checks_on_jordan_summand() {
        // [J_3(5)]_1: A11 = [5], A22 = J_2(5)
        let a = crate::kv::operator_summand_to_kv(&OperatorSummand {
            size: 3,
            eigenvalue: GQ::from_int(5, 0),
            coupled: true,
        });
        let report = verify_t22(&a, &pol(), true).unwrap();
        assert!(report.all_pass());
        let r = &report.per_eigenvalue[0];
        assert_eq!(r.alg_mult_unitary, 1);
        assert_eq!(r.geom_mult_isotropic, 1);
        assert_eq!(r.jordan_counts_isotropic, vec![(2, 1)]);
    }

    #[test]
    fn t22_instances_pass_checks() {
        let shapes = [vec![1], vec![2], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]];
        for (i, sizes) in shapes.iter().enumerate() {
            let shape = T22Shape { sizes: sizes.clone(), eigenvalue: GQ::zero() };
            let inst = t22_instance::<GQ>(&shape, i as u64).unwrap();
            let report = verify_t22(&inst, &pol(), true).unwrap();
            assert!(report.all_pass(), "shape {sizes:?}");
            // determinism
            let again = t22_instance::<GQ>(&shape, i as u64).unwrap();
            assert_eq!(inst, again);
        }
    }

    #[test]
    fn t22_trivial_shape_is_coupled_jordan_pair() {
        let shape = T22Shape { sizes: vec![1], eigenvalue: GQ::zero() };
        let inst = t22_instance::<GQ>(&shape, 0).unwrap();
        // semiunitarily similar to [J_2(0)]_1: same summand multiset
        let s = seminormal_summands(&inst, &pol()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].coupled && s[0].size == 2);
    }

    #[test]
    fn verify_t22_hypothesis_violations() {
        let a = kv_of((2, 2), &[&[1, 0], &[0, 1]]);
        assert!(matches!(
            verify_t22(&a, &pol(), true),
            Err(Error::HypothesisViolation(_))
        ));
    }
}
