//! The semiunitary-space data model: block matrices of operators in a
//! semiorthonormal basis, the transforms that preserve such bases, canonical
//! summands, and block-direct sums.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::kernel::solve::inverse;
use crate::mat::Mat;
use crate::scalar::{Scalar, TolerancePolicy};

/// A complex space of dimension `n` whose scalar product has rank `m`:
/// the first `m` basis vectors are orthonormal, the rest isotropic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiunitarySpace {
    pub n: usize,
    pub m: usize,
}

impl SemiunitarySpace {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(m <= n, "unitary part cannot exceed the dimension");
        SemiunitarySpace { n, m }
    }

    pub fn isotropic_dim(&self) -> usize {
        self.n - self.m
    }
}

/// Gram matrix of the scalar product in a semiorthonormal basis: I_m + 0.
pub fn gram_matrix<S: Scalar>(space: SemiunitarySpace) -> Mat<S> {
    let mut g = Mat::zeros(space.n, space.n);
    for i in 0..space.m {
        g[(i, i)] = S::one();
    }
    g
}

/// Square matrix carrying the 2x2 block split of an operator in a
/// semiorthonormal basis: the leading diagonal block is m-by-m.
#[derive(Debug, Clone, PartialEq)]
pub struct KvMatrix<S: Scalar> {
    pub space: SemiunitarySpace,
    pub a11: Mat<S>,
    pub a12: Mat<S>,
    pub a21: Mat<S>,
    pub a22: Mat<S>,
}

impl<S: Scalar> KvMatrix<S> {
    pub fn new(space: SemiunitarySpace, a11: Mat<S>, a12: Mat<S>, a21: Mat<S>, a22: Mat<S>) -> Self {
        let (m, k) = (space.m, space.isotropic_dim());
        assert_eq!((a11.rows(), a11.cols()), (m, m), "a11 shape");
        assert_eq!((a12.rows(), a12.cols()), (m, k), "a12 shape");
        assert_eq!((a21.rows(), a21.cols()), (k, m), "a21 shape");
        assert_eq!((a22.rows(), a22.cols()), (k, k), "a22 shape");
        KvMatrix { space, a11, a12, a21, a22 }
    }

    pub fn zero(space: SemiunitarySpace) -> Self {
        let (m, k) = (space.m, space.isotropic_dim());
        KvMatrix {
            space,
            a11: Mat::zeros(m, m),
            a12: Mat::zeros(m, k),
            a21: Mat::zeros(k, m),
            a22: Mat::zeros(k, k),
        }
    }

    pub fn from_full(space: SemiunitarySpace, full: &Mat<S>) -> Self {
        assert_eq!(full.rows(), space.n);
        assert_eq!(full.cols(), space.n);
        let m = space.m;
        let n = space.n;
        KvMatrix {
            space,
            a11: full.block(0, m, 0, m),
            a12: full.block(0, m, m, n),
            a21: full.block(m, n, 0, m),
            a22: full.block(m, n, m, n),
        }
    }

    pub fn to_full(&self) -> Mat<S> {
        let top = self.a11.hstack(&self.a12);
        let bottom = self.a21.hstack(&self.a22);
        top.vstack(&bottom)
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn m(&self) -> usize {
        self.space.m
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.space == other.space && self.to_full().approx_eq(&other.to_full(), tol)
    }
}

/// Change of semiorthonormal bases: block lower triangular with a unitary
/// leading block (the implicit upper-right block is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct SemiunitaryTransform<S: Scalar> {
    pub space: SemiunitarySpace,
    pub s11: Mat<S>,
    pub s21: Mat<S>,
    pub s22: Mat<S>,
}

impl<S: Scalar> SemiunitaryTransform<S> {
    pub fn new(space: SemiunitarySpace, s11: Mat<S>, s21: Mat<S>, s22: Mat<S>) -> Self {
        let (m, k) = (space.m, space.isotropic_dim());
        assert_eq!((s11.rows(), s11.cols()), (m, m), "s11 shape");
        assert_eq!((s21.rows(), s21.cols()), (k, m), "s21 shape");
        assert_eq!((s22.rows(), s22.cols()), (k, k), "s22 shape");
        SemiunitaryTransform { space, s11, s21, s22 }
    }

    pub fn identity(space: SemiunitarySpace) -> Self {
        SemiunitaryTransform {
            space,
            s11: Mat::identity(space.m),
            s21: Mat::zeros(space.isotropic_dim(), space.m),
            s22: Mat::identity(space.isotropic_dim()),
        }
    }

    pub fn to_full(&self) -> Mat<S> {
        let top = self.s11.hstack(&Mat::zeros(self.space.m, self.space.isotropic_dim()));
        let bottom = self.s21.hstack(&self.s22);
        top.vstack(&bottom)
    }

    /// Check the structural invariants under the policy.
    pub fn validate(&self, pol: &TolerancePolicy) -> Result<()> {
        let utol = if S::EXACT { 0.0 } else { pol.zero_eps.max(1e-9) };
        if !self.s11.adjoint().matmul(&self.s11).is_identity_tol(utol) {
            return Err(Error::ContractViolation("leading block is not unitary".into()));
        }
        if inverse(&self.s22, pol).is_none() {
            return Err(Error::ContractViolation("isotropic block is singular".into()));
        }
        Ok(())
    }

    pub fn inverse(&self, pol: &TolerancePolicy) -> Result<Self> {
        let s11_inv = self.s11.adjoint();
        let s22_inv = inverse(&self.s22, pol)
            .ok_or_else(|| Error::ContractViolation("isotropic block is singular".into()))?;
        let s21_inv = s22_inv.matmul(&self.s21).matmul(&s11_inv).neg();
        Ok(SemiunitaryTransform::new(self.space, s11_inv, s21_inv, s22_inv))
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.space, other.space);
        let s11 = self.s11.matmul(&other.s11);
        let s21 = self.s21.matmul(&other.s11).add(&self.s22.matmul(&other.s21));
        let s22 = self.s22.matmul(&other.s22);
        SemiunitaryTransform::new(self.space, s11, s21, s22)
    }

    /// Witness that permuting summands of a block-direct sum is a
    /// semiunitary similarity: permutation on the unitary strip paired with
    /// a permutation on the isotropic strip.
    pub fn from_permutations(
        space: SemiunitarySpace,
        unitary_perm: &[usize],
        isotropic_perm: &[usize],
    ) -> Self {
        assert_eq!(unitary_perm.len(), space.m);
        assert_eq!(isotropic_perm.len(), space.isotropic_dim());
        SemiunitaryTransform::new(
            space,
            Mat::permutation(unitary_perm),
            Mat::zeros(space.isotropic_dim(), space.m),
            Mat::permutation(isotropic_perm),
        )
    }
}

/// True when the isotropic part is invariant: the upper-right block is zero.
pub fn is_bounded<S: Scalar>(a: &KvMatrix<S>, pol: &TolerancePolicy) -> bool {
    a.a12.is_zero_tol(pol.scaled_zero(a.to_full().frobenius_norm()))
}

fn unitary_block_tol<S: Scalar>(pol: &TolerancePolicy) -> f64 {
    if S::EXACT {
        0.0
    } else {
        pol.zero_eps.max(1e-9)
    }
}

/// Bounded with Hermitian induced operator on the unitary quotient.
pub fn is_selfadjoint<S: Scalar>(a: &KvMatrix<S>, pol: &TolerancePolicy) -> bool {
    is_bounded(a, pol) && a.a11.is_hermitian_tol(pol.scaled_zero(a.a11.frobenius_norm()).max(unitary_block_tol::<S>(pol)))
}

/// Bounded with unitary induced operator on the unitary quotient.
pub fn is_metric<S: Scalar>(a: &KvMatrix<S>, pol: &TolerancePolicy) -> bool {
    is_bounded(a, pol)
        && a.a11.adjoint().matmul(&a.a11).is_identity_tol(unitary_block_tol::<S>(pol))
}

/// Bounded with normal induced operator on the unitary quotient.
pub fn is_seminormal<S: Scalar>(a: &KvMatrix<S>, pol: &TolerancePolicy) -> bool {
    let tol = unitary_block_tol::<S>(pol).max(pol.scaled_zero(a.a11.frobenius_norm()));
    is_bounded(a, pol)
        && a.a11
            .matmul(&a.a11.adjoint())
            .approx_eq(&a.a11.adjoint().matmul(&a.a11), tol)
}

/// True when B is the adjoint of A with respect to the scalar product:
/// both upper-right blocks vanish and B11 = A11*.
pub fn adjoint_pair_check<S: Scalar>(
    a: &KvMatrix<S>,
    b: &KvMatrix<S>,
    pol: &TolerancePolicy,
) -> Result<bool> {
    if a.space != b.space {
        return Err(Error::ContractViolation("operators live on different spaces".into()));
    }
    let tol = pol.scaled_zero(a.to_full().frobenius_norm().max(b.to_full().frobenius_norm()));
    Ok(is_bounded(a, pol) && is_bounded(b, pol) && b.a11.approx_eq(&a.a11.adjoint(), tol))
}

/// Block-direct sum: the direct sum of the operators on the orthogonal
/// direct sum of the spaces, in the interleaved semiorthonormal basis
/// (unitary strips first, then isotropic strips).
pub fn block_direct_sum<S: Scalar>(a: &KvMatrix<S>, b: &KvMatrix<S>) -> KvMatrix<S> {
    let space = SemiunitarySpace::new(a.n() + b.n(), a.m() + b.m());
    KvMatrix {
        space,
        a11: a.a11.direct_sum(&b.a11),
        a12: a.a12.direct_sum(&b.a12),
        a21: a.a21.direct_sum(&b.a21),
        a22: a.a22.direct_sum(&b.a22),
    }
}

/// Change of basis: S^-1 A S on the same space.
pub fn apply_similarity<S: Scalar>(
    a: &KvMatrix<S>,
    s: &SemiunitaryTransform<S>,
    pol: &TolerancePolicy,
) -> Result<KvMatrix<S>> {
    if a.space != s.space {
        return Err(Error::ContractViolation("transform space mismatch".into()));
    }
    s.validate(pol)?;
    let inv = s.inverse(pol)?;
    let full = inv.to_full().matmul(&a.to_full()).matmul(&s.to_full());
    Ok(KvMatrix::from_full(a.space, &full))
}

/// Change of basis for a form: S* F S on the same space.
pub fn apply_star_congruence<S: Scalar>(
    f: &KvMatrix<S>,
    s: &SemiunitaryTransform<S>,
    pol: &TolerancePolicy,
) -> Result<KvMatrix<S>> {
    if f.space != s.space {
        return Err(Error::ContractViolation("transform space mismatch".into()));
    }
    s.validate(pol)?;
    let sf = s.to_full();
    let full = sf.adjoint().matmul(&f.to_full()).matmul(&sf);
    Ok(KvMatrix::from_full(f.space, &full))
}

// ---------------------------------------------------------------------------
// canonical summands
// ---------------------------------------------------------------------------

/// Canonical operator summand: a Jordan block living on a space whose
/// unitary part has dimension one (coupled) or zero (isotropic).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSummand<S> {
    pub size: usize,
    pub eigenvalue: S,
    /// True for the variant with a one-dimensional unitary part.
    pub coupled: bool,
}

impl<S: Scalar> OperatorSummand<S> {
    /// Canonical sort key: eigenvalue ascending, coupled before isotropic,
    /// size descending.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.eigenvalue
            .lex_cmp(&other.eigenvalue)
            .then_with(|| other.coupled.cmp(&self.coupled))
            .then_with(|| other.size.cmp(&self.size))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.size == other.size
            && self.coupled == other.coupled
            && self.eigenvalue.approx_eq(&other.eigenvalue, tol)
    }
}

/// Canonical Hermitian-form summand.
#[derive(Debug, Clone, PartialEq)]
pub enum HermitianSummand<S> {
    /// 2x2 hyperbolic pair across the unitary/isotropic split.
    Pair,
    /// 1x1 real value on the unitary part.
    RealDiag(S),
    /// 1x1 value +1 on the isotropic part.
    PlusOne,
    /// 1x1 value -1 on the isotropic part.
    MinusOne,
    /// 1x1 zero on the isotropic part.
    Zero,
}

impl<S: Scalar> HermitianSummand<S> {
    fn rank_key(&self) -> u8 {
        match self {
            HermitianSummand::Pair => 0,
            HermitianSummand::RealDiag(_) => 1,
            HermitianSummand::PlusOne => 2,
            HermitianSummand::MinusOne => 3,
            HermitianSummand::Zero => 4,
        }
    }

    /// Canonical sort: pairs, then real diagonal values descending, then
    /// +1, -1, 0.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.rank_key().cmp(&other.rank_key()).then_with(|| match (self, other) {
            (HermitianSummand::RealDiag(a), HermitianSummand::RealDiag(b)) => b.lex_cmp(a),
            _ => Ordering::Equal,
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (HermitianSummand::RealDiag(a), HermitianSummand::RealDiag(b)) => {
                a.approx_eq(b, tol)
            }
            _ => self.rank_key() == other.rank_key(),
        }
    }
}

/// Tagged canonical summand of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum CanonicalSummand<S> {
    Operator(OperatorSummand<S>),
    Hermitian(HermitianSummand<S>),
}

/// The matrix of one operator summand: J_n(lambda) in the lower-bidiagonal
/// convention, with unitary-part dimension 1 (coupled) or 0.
pub fn operator_summand_to_kv<S: Scalar>(s: &OperatorSummand<S>) -> KvMatrix<S> {
    let j = crate::kernel::jordan::jordan_block(&s.eigenvalue, s.size);
    let m = if s.coupled { 1 } else { 0 };
    KvMatrix::from_full(SemiunitarySpace::new(s.size, m), &j)
}

/// The matrix of one Hermitian summand.
pub fn hermitian_summand_to_kv<S: Scalar>(s: &HermitianSummand<S>) -> KvMatrix<S> {
    match s {
        HermitianSummand::Pair => {
            let full: Mat<S> = Mat::from_int_rows(&[&[0, 1], &[1, 0]]);
            KvMatrix::from_full(SemiunitarySpace::new(2, 1), &full)
        }
        HermitianSummand::RealDiag(v) => {
            let full = Mat::from_fn(1, 1, |_, _| v.clone());
            KvMatrix::from_full(SemiunitarySpace::new(1, 1), &full)
        }
        HermitianSummand::PlusOne => {
            let full: Mat<S> = Mat::from_int_rows(&[&[1]]);
            KvMatrix::from_full(SemiunitarySpace::new(1, 0), &full)
        }
        HermitianSummand::MinusOne => {
            let full: Mat<S> = Mat::from_int_rows(&[&[-1]]);
            KvMatrix::from_full(SemiunitarySpace::new(1, 0), &full)
        }
        HermitianSummand::Zero => {
            let full: Mat<S> = Mat::zeros(1, 1);
            KvMatrix::from_full(SemiunitarySpace::new(1, 0), &full)
        }
    }
}

/// Left-fold block-direct sum of operator summands, in list order.
pub fn operator_summands_to_kv<S: Scalar>(list: &[OperatorSummand<S>]) -> KvMatrix<S> {
    let mut acc = KvMatrix::zero(SemiunitarySpace::new(0, 0));
    for s in list {
        acc = block_direct_sum(&acc, &operator_summand_to_kv(s));
    }
    acc
}

/// Left-fold block-direct sum of Hermitian summands, in list order.
pub fn hermitian_summands_to_kv<S: Scalar>(list: &[HermitianSummand<S>]) -> KvMatrix<S> {
    let mut acc = KvMatrix::zero(SemiunitarySpace::new(0, 0));
    for s in list {
        acc = block_direct_sum(&acc, &hermitian_summand_to_kv(s));
    }
    acc
}

/// Sort into the canonical order so multiset equality is list equality.
pub fn sort_operator_summands<S: Scalar>(list: &mut [OperatorSummand<S>]) {
    list.sort_by(|a, b| a.cmp_canonical(b));
}

pub fn sort_hermitian_summands<S: Scalar>(list: &mut [HermitianSummand<S>]) {
    list.sort_by(|a, b| a.cmp_canonical(b));
}

/// Multiset equality after canonical sorting, with tolerance for floats.
pub fn operator_summands_eq<S: Scalar>(
    a: &[OperatorSummand<S>],
    b: &[OperatorSummand<S>],
    tol: f64,
) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    sort_operator_summands(&mut x);
    sort_operator_summands(&mut y);
    x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| p.approx_eq(q, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type GQ = GaussianRational;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::exact()
    }

    #[test]
    fn gram_examples() {
        let g: Mat<GQ> = gram_matrix(SemiunitarySpace::new(2, 1));
        assert_eq!(g, Mat::from_int_rows(&[&[1, 0], &[0, 0]]));
        let g3: Mat<GQ> = gram_matrix(SemiunitarySpace::new(3, 3));
        assert!(g3.is_identity_tol(0.0));
        let g0: Mat<GQ> = gram_matrix(SemiunitarySpace::new(2, 0));
        assert!(g0.is_zero_tol(0.0));
    }

    #[test]
    fn boundedness_examples() {
        let space = SemiunitarySpace::new(2, 1);
        let bounded = KvMatrix::<GQ>::from_full(space, &Mat::from_int_rows(&[&[1, 0], &[1, 1]]));
        assert!(is_bounded(&bounded, &pol()));
        let unbounded =
            KvMatrix::<GQ>::from_full(space, &Mat::from_int_rows(&[&[0, 1], &[0, 0]]));
        assert!(!is_bounded(&unbounded, &pol()));
        // vacuous block when m = 0 or m = n
        let all_iso =
            KvMatrix::<GQ>::from_full(SemiunitarySpace::new(2, 0), &Mat::from_int_rows(&[&[0, 1], &[7, 0]]));
        assert!(is_bounded(&all_iso, &pol()));
    }

    #[test]
    fn predicate_examples() {
        let space = SemiunitarySpace::new(2, 1);
        // A11 = [i], bounded: metric but not selfadjoint
        let mut full: Mat<GQ> = Mat::zeros(2, 2);
        full[(0, 0)] = GQ::i();
        full[(1, 0)] = GQ::from_int(3, 0);
        let a = KvMatrix::from_full(space, &full);
        assert!(is_metric(&a, &pol()));
        assert!(!is_selfadjoint(&a, &pol()));
        assert!(is_seminormal(&a, &pol()));
        // unbounded kills all three
        let mut unb = full.clone();
        unb[(0, 1)] = GQ::one();
        let b = KvMatrix::from_full(space, &unb);
        assert!(!is_selfadjoint(&b, &pol()) && !is_metric(&b, &pol()) && !is_seminormal(&b, &pol()));
    }

    #[test]
    fn adjoint_pair_examples() {
        let space = SemiunitarySpace::new(2, 1);
        let mut fa: Mat<GQ> = Mat::zeros(2, 2);
        fa[(0, 0)] = GQ::from_int(1, 1);
        fa[(1, 0)] = GQ::from_int(5, 0);
        fa[(1, 1)] = GQ::from_int(2, 0);
        let mut fb: Mat<GQ> = Mat::zeros(2, 2);
        fb[(0, 0)] = GQ::from_int(1, -1);
        fb[(1, 0)] = GQ::from_int(-7, 2);
        fb[(1, 1)] = GQ::from_int(9, 0);
        let a = KvMatrix::from_full(space, &fa);
        let b = KvMatrix::from_full(space, &fb);
        assert!(adjoint_pair_check(&a, &b, &pol()).unwrap());
        let mut fb2 = fb.clone();
        fb2[(0, 0)] = GQ::from_int(1, 1);
        let b2 = KvMatrix::from_full(space, &fb2);
        assert!(!adjoint_pair_check(&a, &b2, &pol()).unwrap());
    }

    #[test]
    fn block_direct_sum_interleaves() {
        // [lambda]_1 boxplus [mu]_0 = [[lambda,0],[0,mu]] with m = 1
        let a = operator_summand_to_kv(&OperatorSummand {
            size: 1,
            eigenvalue: GQ::from_int(3, 0),
            coupled: true,
        });
        let b = operator_summand_to_kv(&OperatorSummand {
            size: 1,
            eigenvalue: GQ::from_int(4, 0),
            coupled: false,
        });
        let sum = block_direct_sum(&a, &b);
        assert_eq!(sum.space, SemiunitarySpace::new(2, 1));
        assert_eq!(sum.to_full(), Mat::from_int_rows(&[&[3, 0], &[0, 4]]));
    }

    #[test]
    fn summand_matrices_match_convention() {
        // [J_2(0)]_1 -> [[0,0],[1,0]] with m = 1
        let s = OperatorSummand { size: 2, eigenvalue: GQ::zero(), coupled: true };
        let kv = operator_summand_to_kv(&s);
        assert_eq!(kv.to_full(), Mat::from_int_rows(&[&[0, 0], &[1, 0]]));
        assert_eq!(kv.m(), 1);
        let pair = hermitian_summand_to_kv(&HermitianSummand::<GQ>::Pair);
        assert_eq!(pair.to_full(), Mat::from_int_rows(&[&[0, 1], &[1, 0]]));
        assert_eq!(pair.m(), 1);
    }

    #[test]
    fn similarity_example() {
        let space = SemiunitarySpace::new(2, 1);
        let a = KvMatrix::<GQ>::from_full(space, &Mat::from_int_rows(&[&[0, 0], &[1, 0]]));
        let s = SemiunitaryTransform::new(
            space,
            Mat::from_int_rows(&[&[-1]]),
            Mat::zeros(1, 1),
            Mat::identity(1),
        );
        let out = apply_similarity(&a, &s, &pol()).unwrap();
        assert_eq!(out.to_full(), Mat::from_int_rows(&[&[0, 0], &[-1, 0]]));
    }

    #[test]
    fn congruence_examples() {
        let space = SemiunitarySpace::new(2, 1);
        let s = SemiunitaryTransform::new(
            space,
            Mat::identity(1),
            Mat::zeros(1, 1),
            Mat::from_int_rows(&[&[2]]),
        );
        let f1 = KvMatrix::<GQ>::from_full(space, &Mat::from_int_rows(&[&[1, 0], &[0, 0]]));
        assert_eq!(apply_star_congruence(&f1, &s, &pol()).unwrap(), f1);
        let f2 = KvMatrix::<GQ>::from_full(space, &Mat::from_int_rows(&[&[0, 0], &[0, 1]]));
        let out = apply_star_congruence(&f2, &s, &pol()).unwrap();
        assert_eq!(out.to_full(), Mat::from_int_rows(&[&[0, 0], &[0, 4]]));
    }

    #[test]
    fn similarity_rejects_bad_transforms() {
        let space = SemiunitarySpace::new(2, 1);
        let a = KvMatrix::<GQ>::zero(space);
        let not_unitary = SemiunitaryTransform::new(
            space,
            Mat::from_int_rows(&[&[2]]),
            Mat::zeros(1, 1),
            Mat::identity(1),
        );
        assert!(apply_similarity(&a, &not_unitary, &pol()).is_err());
        let singular = SemiunitaryTransform::new(
            space,
            Mat::identity(1),
            Mat::zeros(1, 1),
            Mat::zeros(1, 1),
        );
        assert!(apply_similarity(&a, &singular, &pol()).is_err());
    }

    #[test]
    fn composition_law_and_inverse() {
        let space = SemiunitarySpace::new(3, 1);
        let s = SemiunitaryTransform::<GQ>::new(
            space,
            Mat::from_int_rows(&[&[-1]]),
            Mat::from_int_rows(&[&[2], &[0]]),
            Mat::from_int_rows(&[&[1, 1], &[0, 1]]),
        );
        let t = SemiunitaryTransform::<GQ>::new(
            space,
            Mat::from_int_rows(&[&[1]]),
            Mat::from_int_rows(&[&[0], &[3]]),
            Mat::from_int_rows(&[&[1, 0], &[2, 1]]),
        );
        let a = KvMatrix::<GQ>::from_full(
            space,
            &Mat::from_int_rows(&[&[1, 0, 0], &[4, 0, 1], &[0, 2, 0]]),
        );
        let left = apply_similarity(&a, &s.compose(&t), &pol()).unwrap();
        let right =
            apply_similarity(&apply_similarity(&a, &s, &pol()).unwrap(), &t, &pol()).unwrap();
        assert_eq!(left, right);
        let round =
            apply_similarity(&left, &s.compose(&t).inverse(&pol()).unwrap(), &pol()).unwrap();
        assert_eq!(round, a);
    }

    #[test]
    fn gram_preserved_by_transforms() {
        let space = SemiunitarySpace::new(3, 2);
        let s = SemiunitaryTransform::<GQ>::new(
            space,
            Mat::from_int_rows(&[&[0, 1], &[-1, 0]]),
            Mat::from_int_rows(&[&[5, -2]]),
            Mat::from_int_rows(&[&[3]]),
        );
        let g: Mat<GQ> = gram_matrix(space);
        let sf = s.to_full();
        assert_eq!(sf.adjoint().matmul(&g).matmul(&sf), g);
    }
}
