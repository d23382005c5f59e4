//! Jordan structure from rank sequences, Jordan bases from kernel chains,
//! and the Weyr form obtained by regrouping a Jordan basis by level.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

use super::eigen::{cluster_eigenvalues, eigenvalues};
use super::rank;
use super::solve::nullspace;

/// Jordan block sizes per eigenvalue, eigenvalues in lexicographic order,
/// sizes descending.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanStructure<S> {
    pub blocks: Vec<(S, Vec<usize>)>,
}

impl<S: Scalar> JordanStructure<S> {
    pub fn total_size(&self) -> usize {
        self.blocks.iter().map(|(_, sizes)| sizes.iter().sum::<usize>()).sum()
    }

    pub fn sizes_at(&self, lambda: &S) -> &[usize] {
        self.blocks
            .iter()
            .find(|(l, _)| l == lambda)
            .map(|(_, s)| s.as_slice())
            .unwrap_or(&[])
    }

    pub fn geometric_multiplicity(&self, lambda: &S) -> usize {
        self.sizes_at(lambda).len()
    }

    pub fn algebraic_multiplicity(&self, lambda: &S) -> usize {
        self.sizes_at(lambda).iter().sum()
    }

    /// Conjugate partition of the block sizes: w_k = number of blocks of
    /// size at least k.
    pub fn weyr_characteristic(&self, lambda: &S) -> Vec<usize> {
        let sizes = self.sizes_at(lambda);
        let max = sizes.first().copied().unwrap_or(0);
        (1..=max).map(|k| sizes.iter().filter(|&&s| s >= k).count()).collect()
    }

    /// Equality of structures where float eigenvalues compare within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|((a, sa), (b, sb))| a.approx_eq(b, tol) && sa == sb)
    }
}

/// Block sizes at each eigenvalue via the rank sequence of (M - lambda I)^k.
pub fn jordan_structure<S: Scalar>(
    m: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<JordanStructure<S>> {
    assert!(m.is_square());
    super::solve::check_finite(m)?;
    let n = m.rows();
    let eigs = eigenvalues(m, pol)?;
    let clusters = cluster_eigenvalues(&eigs, pol)?;
    let mut blocks = Vec::new();
    for (lambda, mult) in clusters {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)].clone() - lambda.clone();
        }
        // ranks of successive powers until they stabilize at n - mult
        let mut ranks = vec![n];
        let mut power = Mat::<S>::identity(n);
        while *ranks.last().unwrap() > n - mult {
            power = power.matmul(&shifted);
            ranks.push(rank(&power, pol)?);
        }
        // number of blocks of size >= k is rank_{k-1} - rank_k
        let weyr: Vec<usize> = (1..ranks.len()).map(|k| ranks[k - 1] - ranks[k]).collect();
        let mut sizes = Vec::new();
        for k in 0..weyr.len() {
            let exactly_k = weyr[k] - weyr.get(k + 1).copied().unwrap_or(0);
            for _ in 0..exactly_k {
                sizes.push(k + 1);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        if sizes.iter().sum::<usize>() != mult {
            return Err(Error::NumericInconsistency(format!(
                "rank sequence at {lambda} sums to {} but multiplicity is {mult}",
                sizes.iter().sum::<usize>()
            )));
        }
        blocks.push((lambda, sizes));
    }
    Ok(JordanStructure { blocks })
}

/// One Jordan chain: the top generalized eigenvector and the chain length.
struct Chain<S> {
    depth: usize,
    top: Vec<S>,
}

/// Kernel-chain construction of a Jordan basis for one eigenvalue.
/// Returns chains sorted by length descending.
fn chains_for_eigenvalue<S: Scalar>(
    m: &Mat<S>,
    lambda: &S,
    sizes: &[usize],
    pol: &TolerancePolicy,
) -> Result<Vec<(usize, Vec<Vec<S>>)>> {
    let n = m.rows();
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] = shifted[(i, i)].clone() - lambda.clone();
    }
    let max_depth = sizes.first().copied().unwrap_or(0);
    // kernel bases of successive powers
    let mut kernels: Vec<Mat<S>> = Vec::new();
    let mut power = Mat::<S>::identity(n);
    for _ in 0..max_depth {
        power = power.matmul(&shifted);
        kernels.push(nullspace(&power, pol));
    }
    let mut tops: Vec<Chain<S>> = Vec::new();
    // avoid-space columns: K_{d-1} plus descendants of longer chains
    for d in (1..=max_depth).rev() {
        let mut avoid_cols: Vec<Vec<S>> = Vec::new();
        if d >= 2 {
            let k_prev = &kernels[d - 2];
            for c in 0..k_prev.cols() {
                avoid_cols.push(k_prev.col(c));
            }
        }
        for chain in &tops {
            // descend the top of each longer chain to depth d
            let mut v = chain.top.clone();
            for _ in 0..(chain.depth - d) {
                v = shifted.apply(&v);
            }
            avoid_cols.push(v);
        }
        let k_d = &kernels[d - 1];
        let mut avoid = if avoid_cols.is_empty() {
            Mat::zeros(n, 0)
        } else {
            Mat::from_cols(&avoid_cols)
        };
        let mut avoid_rank = rank(&avoid, pol)?;
        for c in 0..k_d.cols() {
            let cand = k_d.col(c);
            let test = avoid.hstack(&Mat::from_cols(&[cand.clone()]));
            if rank(&test, pol)? > avoid_rank {
                tops.push(Chain { depth: d, top: cand });
                avoid = test;
                avoid_rank += 1;
            }
        }
    }
    // materialize chains: top, N top, N^2 top, ...
    let mut out: Vec<(usize, Vec<Vec<S>>)> = Vec::new();
    for chain in &tops {
        let mut vecs = Vec::with_capacity(chain.depth);
        let mut v = chain.top.clone();
        for _ in 0..chain.depth {
            vecs.push(v.clone());
            v = shifted.apply(&v);
        }
        out.push((chain.depth, vecs));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    let got: Vec<usize> = out.iter().map(|(d, _)| *d).collect();
    let mut want = sizes.to_vec();
    want.sort_unstable_by(|a, b| b.cmp(a));
    if got != want {
        return Err(Error::NumericInconsistency(format!(
            "chain lengths {got:?} disagree with rank-sequence sizes {want:?} at {lambda}"
        )));
    }
    Ok(out)
}

/// The Jordan matrix of a structure, in the lower-bidiagonal convention
/// (ones directly below the diagonal), blocks ordered by (eigenvalue,
/// size descending).
pub fn jordan_matrix<S: Scalar>(structure: &JordanStructure<S>) -> Mat<S> {
    let n = structure.total_size();
    let mut j = Mat::zeros(n, n);
    let mut at = 0usize;
    for (lambda, sizes) in &structure.blocks {
        for &size in sizes {
            for k in 0..size {
                j[(at + k, at + k)] = lambda.clone();
                if k + 1 < size {
                    j[(at + k + 1, at + k)] = S::one();
                }
            }
            at += size;
        }
    }
    j
}

/// A single lower-bidiagonal Jordan block.
pub fn jordan_block<S: Scalar>(lambda: &S, n: usize) -> Mat<S> {
    jordan_matrix(&JordanStructure { blocks: vec![(lambda.clone(), vec![n])] })
}

/// Jordan decomposition: similarity T with T^-1 M T equal to
/// `jordan_matrix(structure)`.
pub fn jordan_decomposition<S: Scalar>(
    m: &Mat<S>,
    pol: &TolerancePolicy,
) -> Result<(Mat<S>, JordanStructure<S>)> {
    let structure = jordan_structure(m, pol)?;
    let mut cols: Vec<Vec<S>> = Vec::new();
    for (lambda, sizes) in &structure.blocks {
        let chains = chains_for_eigenvalue(m, lambda, sizes, pol)?;
        for (_, vecs) in chains {
            cols.extend(vecs);
        }
    }
    let t = Mat::from_cols(&cols);
    Ok((t, structure))
}

/// The Weyr canonical matrix of a structure: per eigenvalue, diagonal
/// lambda-I blocks sized by the Weyr characteristic with [I; 0]
/// superdiagonal coupling blocks.
pub fn weyr_matrix<S: Scalar>(structure: &JordanStructure<S>) -> Mat<S> {
    let n = structure.total_size();
    let mut w = Mat::zeros(n, n);
    let mut at = 0usize;
    for (lambda, _) in &structure.blocks {
        let weyr = structure.weyr_characteristic(lambda);
        let offsets: Vec<usize> = weyr
            .iter()
            .scan(at, |acc, &s| {
                let v = *acc;
                *acc += s;
                Some(v)
            })
            .collect();
        for (k, &size) in weyr.iter().enumerate() {
            for i in 0..size {
                w[(offsets[k] + i, offsets[k] + i)] = lambda.clone();
            }
            if k + 1 < weyr.len() {
                for i in 0..weyr[k + 1] {
                    w[(offsets[k] + i, offsets[k + 1] + i)] = S::one();
                }
            }
        }
        at += weyr.iter().sum::<usize>();
    }
    w
}

/// Weyr form: nonsingular T with T^-1 M T = W, W the Weyr canonical matrix.
/// W is a pure function of the Jordan structure.
pub fn weyr_form<S: Scalar>(m: &Mat<S>, pol: &TolerancePolicy) -> Result<(Mat<S>, Mat<S>)> {
    let structure = jordan_structure(m, pol)?;
    let mut cols: Vec<Vec<S>> = Vec::new();
    for (lambda, sizes) in &structure.blocks {
        let chains = chains_for_eigenvalue(m, lambda, sizes, pol)?;
        let max_depth = sizes.first().copied().unwrap_or(0);
        // level k takes the depth-k vector of every chain of length >= k;
        // chain c stores vectors [top=N^0 v, N v, ...], and the vector of
        // level k in a chain of length d is N^{d-k} v, i.e. index d-k
        for k in 1..=max_depth {
            for (depth, vecs) in &chains {
                if *depth >= k {
                    cols.push(vecs[depth - k].clone());
                }
            }
        }
    }
    let t = Mat::from_cols(&cols);
    let w = weyr_matrix(&structure);
    Ok((t, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::solve::inverse;
    use crate::scalar::GaussianRational;

    type GQ = GaussianRational;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::exact()
    }

    #[test]
    fn structure_of_jordan_block() {
        let m = jordan_block(&GQ::from_int(5, 0), 3);
        let s = jordan_structure(&m, &pol()).unwrap();
        assert_eq!(s.blocks, vec![(GQ::from_int(5, 0), vec![3])]);
    }

    #[test]
    fn structure_of_diagonal() {
        let m: Mat<GQ> = Mat::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let s = jordan_structure(&m, &pol()).unwrap();
        assert_eq!(
            s.blocks,
            vec![(GQ::one(), vec![1, 1]), (GQ::from_int(2, 0), vec![1])]
        );
    }

    #[test]
    fn structure_from_rank_sequence() {
        // nilpotent with Jordan type {2,1}
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let s = jordan_structure(&m, &pol()).unwrap();
        assert_eq!(s.blocks, vec![(GQ::zero(), vec![2, 1])]);
        assert_eq!(s.weyr_characteristic(&GQ::zero()), vec![2, 1]);
    }

    #[test]
    fn decomposition_reconstructs() {
        let m: Mat<GQ> =
            Mat::from_int_rows(&[&[2, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 1, 3]]);
        let (t, structure) = jordan_decomposition(&m, &pol()).unwrap();
        let tinv = inverse(&t, &pol()).unwrap();
        let j = tinv.matmul(&m).matmul(&t);
        assert_eq!(j, jordan_matrix(&structure));
    }

    #[test]
    fn weyr_of_single_chain_is_jordan() {
        let m = jordan_block(&GQ::zero(), 2);
        let (t, w) = weyr_form(&m, &pol()).unwrap();
        assert_eq!(w, Mat::from_int_rows(&[&[0, 1], &[0, 0]]));
        let tinv = inverse(&t, &pol()).unwrap();
        assert_eq!(tinv.matmul(&m).matmul(&t), w);
    }

    #[test]
    fn weyr_two_one_shape() {
        // nilpotent of type {2,1}: Weyr blocks sized (2,1), coupler [1;0]
        let m: Mat<GQ> = Mat::from_int_rows(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let (t, w) = weyr_form(&m, &pol()).unwrap();
        let expected: Mat<GQ> = Mat::from_int_rows(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(w, expected);
        let tinv = inverse(&t, &pol()).unwrap();
        assert_eq!(tinv.matmul(&m).matmul(&t), w);
    }

    #[test]
    fn weyr_of_scaled_identity() {
        let m: Mat<GQ> = Mat::from_int_rows(&[&[3, 0], &[0, 3]]);
        let (_, w) = weyr_form(&m, &pol()).unwrap();
        assert_eq!(w, m);
    }
}
