//! Deterministic randomized instance generators. Everything is a pure
//! function of the seed, and exact-backend outputs keep entries small so the
//! unit-normalization searches stay cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::jordan::jordan_matrix;
use crate::kernel::jordan::JordanStructure;
use crate::kernel::solve::inverse;
use crate::kv::{
    apply_similarity, apply_star_congruence, block_direct_sum, hermitian_summands_to_kv,
    operator_summands_to_kv, HermitianSummand, KvMatrix, OperatorSummand, SemiunitarySpace,
    SemiunitaryTransform,
};
use crate::mat::Mat;
use crate::scalar::{backend_policy, Scalar};

/// What structure a generated operator should have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    General,
    Bounded,
    Selfadjoint,
    Metric,
    Seminormal,
    HermitianForm,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_int<S: Scalar>(rng: &mut ChaCha8Rng, range: i64, imag: bool) -> S {
    let re = rng.gen_range(-range..=range);
    let im = if imag { rng.gen_range(-range..=range) } else { 0 };
    S::from_int(re, im)
}

/// Exactly unitary random matrix: Cayley transform of a random
/// skew-Hermitian matrix, optionally twisted by unit-modulus diagonal
/// phases. Exact over the Gaussian rationals.
pub fn random_unitary<S: Scalar>(k: usize, rng: &mut ChaCha8Rng) -> Mat<S> {
    let pol = backend_policy::<S>();
    let a: Mat<S> = Mat::from_fn(k, k, |_, _| small_int(rng, 1, true));
    let skew = a.sub(&a.adjoint());
    let mut i_plus = Mat::<S>::identity(k);
    let mut i_minus = Mat::<S>::identity(k);
    for r in 0..k {
        for c in 0..k {
            let half = skew[(r, c)].clone().div(&S::from_int(2, 0)).unwrap();
            i_plus[(r, c)] = i_plus[(r, c)].clone() + half.clone();
            i_minus[(r, c)] = i_minus[(r, c)].clone() - half;
        }
    }
    // I + K/2 is always invertible for skew-Hermitian K
    let cayley = i_minus.matmul(&inverse(&i_plus, &pol).expect("skew Cayley"));
    // unit-modulus phases keep exactness and add determinant variety
    let phases: [(i64, i64, i64); 6] =
        [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (3, 4, 5), (-3, 4, 5), (5, -12, 13)];
    let mut d = Mat::<S>::zeros(k, k);
    for i in 0..k {
        let (a, b, q) = phases[rng.gen_range(0..phases.len())];
        d[(i, i)] = S::from_ratio(a, q) + S::i() * S::from_ratio(b, q);
    }
    cayley.matmul(&d)
}

/// Random nonsingular matrix with determinant one: product of unit
/// triangular factors with small entries.
pub fn random_nonsingular<S: Scalar>(k: usize, rng: &mut ChaCha8Rng) -> Mat<S> {
    let mut lower = Mat::<S>::identity(k);
    let mut upper = Mat::<S>::identity(k);
    for i in 0..k {
        for j in 0..i {
            lower[(i, j)] = small_int(rng, 1, true);
            upper[(j, i)] = small_int(rng, 1, true);
        }
    }
    lower.matmul(&upper)
}

/// Random change of semiorthonormal basis, deterministic in the seed.
pub fn random_transform<S: Scalar>(space: SemiunitarySpace, seed: u64) -> SemiunitaryTransform<S> {
    let mut rng = rng_from_seed(seed);
    random_transform_with(space, &mut rng)
}

pub fn random_transform_with<S: Scalar>(
    space: SemiunitarySpace,
    rng: &mut ChaCha8Rng,
) -> SemiunitaryTransform<S> {
    let (m, k) = (space.m, space.isotropic_dim());
    SemiunitaryTransform::new(
        space,
        random_unitary(m, rng),
        Mat::from_fn(k, m, |_, _| small_int(rng, 1, true)),
        random_nonsingular(k, rng),
    )
}

fn gaussian_pool<S: Scalar>() -> Vec<S> {
    let mut out = Vec::new();
    for re in -2..=2 {
        for im in -1..=1 {
            out.push(S::from_int(re, im));
        }
    }
    out.push(S::from_ratio(1, 2));
    out.push(S::from_ratio(-3, 2) + S::i() * S::from_ratio(1, 2));
    out
}

fn real_pool<S: Scalar>() -> Vec<S> {
    vec![
        S::from_int(-2, 0),
        S::from_int(-1, 0),
        S::zero(),
        S::from_int(1, 0),
        S::from_int(2, 0),
        S::from_int(3, 0),
        S::from_ratio(1, 2),
        S::from_ratio(-5, 2),
    ]
}

fn unit_modulus_pool<S: Scalar>() -> Vec<S> {
    let data: [(i64, i64, i64); 8] = [
        (1, 0, 1),
        (-1, 0, 1),
        (0, 1, 1),
        (0, -1, 1),
        (3, 4, 5),
        (3, -4, 5),
        (-3, 4, 5),
        (5, 12, 13),
    ];
    data.iter()
        .map(|&(a, b, q)| S::from_ratio(a, q) + S::i() * S::from_ratio(b, q))
        .collect()
}

/// Sample operator summands filling a space: exactly `m` coupled summands,
/// isotropic summands for the rest.
fn sample_operator_summands<S: Scalar>(
    space: SemiunitarySpace,
    coupled_pool: &[S],
    isotropic_pool: &[S],
    rng: &mut ChaCha8Rng,
) -> Vec<OperatorSummand<S>> {
    let m = space.m;
    let mut coupled_sizes = vec![1usize; m];
    let mut iso_sizes: Vec<usize> = Vec::new();
    let mut extras = space.isotropic_dim();
    while extras > 0 {
        let choice = rng.gen_range(0..3);
        match choice {
            0 if m > 0 => {
                let i = rng.gen_range(0..m);
                coupled_sizes[i] += 1;
            }
            1 if !iso_sizes.is_empty() => {
                let i = rng.gen_range(0..iso_sizes.len());
                iso_sizes[i] += 1;
            }
            _ => iso_sizes.push(1),
        }
        extras -= 1;
    }
    let mut out = Vec::new();
    for size in coupled_sizes {
        let ev = coupled_pool[rng.gen_range(0..coupled_pool.len())].clone();
        out.push(OperatorSummand { size, eigenvalue: ev, coupled: true });
    }
    for size in iso_sizes {
        let ev = isotropic_pool[rng.gen_range(0..isotropic_pool.len())].clone();
        out.push(OperatorSummand { size, eigenvalue: ev, coupled: false });
    }
    out
}

/// A structured instance together with the summands it was assembled from.
pub fn structured_instance<S: Scalar>(
    space: SemiunitarySpace,
    profile: Profile,
    seed: u64,
) -> (KvMatrix<S>, Vec<OperatorSummand<S>>) {
    assert!(matches!(profile, Profile::Selfadjoint | Profile::Metric | Profile::Seminormal));
    let pol = backend_policy::<S>();
    let mut rng = rng_from_seed(seed);
    let complex_pool = gaussian_pool::<S>();
    let coupled_pool = match profile {
        Profile::Selfadjoint => real_pool::<S>(),
        Profile::Metric => unit_modulus_pool::<S>(),
        _ => complex_pool.clone(),
    };
    let summands = sample_operator_summands(space, &coupled_pool, &complex_pool, &mut rng);
    let canonical = operator_summands_to_kv(&summands);
    let s = random_transform_with::<S>(space, &mut rng);
    let kv = apply_similarity(&canonical, &s, &pol).expect("valid transform");
    (kv, summands)
}

/// A Hermitian-form instance together with its summands.
pub fn hermitian_instance<S: Scalar>(
    space: SemiunitarySpace,
    seed: u64,
) -> (KvMatrix<S>, Vec<HermitianSummand<S>>) {
    let pol = backend_policy::<S>();
    let mut rng = rng_from_seed(seed);
    let iso = space.isotropic_dim();
    let pairs = if space.m.min(iso) > 0 { rng.gen_range(0..=space.m.min(iso)) } else { 0 };
    let mut summands: Vec<HermitianSummand<S>> = Vec::new();
    for _ in 0..pairs {
        summands.push(HermitianSummand::Pair);
    }
    let reals = real_pool::<S>();
    for _ in 0..space.m - pairs {
        summands.push(HermitianSummand::RealDiag(reals[rng.gen_range(0..reals.len())].clone()));
    }
    for _ in 0..iso - pairs {
        summands.push(match rng.gen_range(0..3) {
            0 => HermitianSummand::PlusOne,
            1 => HermitianSummand::MinusOne,
            _ => HermitianSummand::Zero,
        });
    }
    let canonical = hermitian_summands_to_kv(&summands);
    let s = random_transform_with::<S>(space, &mut rng);
    let kv = apply_star_congruence(&canonical, &s, &pol).expect("valid transform");
    (kv, summands)
}

/// Bounded instance whose unitary block has distinct eigenvalues placed in
/// the order the exact triangularization consumes (largest first), keeping
/// the reduction representable over the Gaussian rationals.
fn bounded_instance<S: Scalar>(space: SemiunitarySpace, rng: &mut ChaCha8Rng) -> KvMatrix<S> {
    let pol = backend_policy::<S>();
    let (m, k) = (space.m, space.isotropic_dim());
    // distinct eigenvalues, descending in the lexicographic order
    let mut pool = gaussian_pool::<S>();
    let mut evs: Vec<S> = Vec::new();
    while evs.len() < m {
        let pick = rng.gen_range(0..pool.len());
        evs.push(pool.remove(pick));
    }
    evs.sort_by(|a, b| b.lex_cmp(a));
    let mut t = Mat::<S>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = evs[i].clone();
        for j in (i + 1)..m {
            t[(i, j)] = small_int(rng, 1, true);
        }
    }
    let q: Mat<S> = random_unitary(m, rng);
    let a11 = q.adjoint().matmul(&t).matmul(&q);
    // isotropic part: random Jordan assembly under random similarity
    let complex_pool = gaussian_pool::<S>();
    let mut sizes: Vec<usize> = Vec::new();
    let mut left = k;
    while left > 0 {
        let s = rng.gen_range(1..=left.min(3));
        sizes.push(s);
        left -= s;
    }
    let blocks: Vec<(S, Vec<usize>)> = sizes
        .iter()
        .map(|&s| (complex_pool[rng.gen_range(0..complex_pool.len())].clone(), vec![s]))
        .collect();
    let j = jordan_matrix(&JordanStructure { blocks });
    let p: Mat<S> = random_nonsingular(k, rng);
    let a22 = inverse(&p, &pol).expect("unit determinant").matmul(&j).matmul(&p);
    let a21 = Mat::from_fn(k, m, |_, _| small_int(rng, 2, true));
    KvMatrix::new(space, a11, Mat::zeros(m, k), a21, a22)
}

/// Random instance of the requested profile, deterministic in the seed.
pub fn random_kv<S: Scalar>(space: SemiunitarySpace, profile: Profile, seed: u64) -> KvMatrix<S> {
    match profile {
        Profile::General => {
            let mut rng = rng_from_seed(seed);
            let full = Mat::from_fn(space.n, space.n, |_, _| small_int(&mut rng, 2, true));
            KvMatrix::from_full(space, &full)
        }
        Profile::Bounded => {
            let mut rng = rng_from_seed(seed);
            bounded_instance(space, &mut rng)
        }
        Profile::Selfadjoint | Profile::Metric | Profile::Seminormal => {
            structured_instance(space, profile, seed).0
        }
        Profile::HermitianForm => hermitian_instance(space, seed).0,
    }
}

/// Random semiunitary space with n in 1..=max_n, m in 0..=n.
pub fn random_space(rng: &mut ChaCha8Rng, max_n: usize) -> SemiunitarySpace {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=n);
    SemiunitarySpace::new(n, m)
}

/// Convenience: direct block sum of two generated canonical assemblies (for
/// tests needing two instances on one space).
pub fn block_sum_pair<S: Scalar>(a: &KvMatrix<S>, b: &KvMatrix<S>) -> KvMatrix<S> {
    block_direct_sum(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kv::{is_bounded, is_metric, is_selfadjoint, is_seminormal};
    use crate::scalar::{GaussianRational, TolerancePolicy};

    type GQ = GaussianRational;

    #[test]
    fn deterministic_in_seed() {
        let space = SemiunitarySpace::new(4, 2);
        let a: KvMatrix<GQ> = random_kv(space, Profile::Seminormal, 7);
        let b: KvMatrix<GQ> = random_kv(space, Profile::Seminormal, 7);
        assert_eq!(a, b);
        let c: KvMatrix<GQ> = random_kv(space, Profile::Seminormal, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn profiles_satisfy_predicates() {
        let pol = TolerancePolicy::exact();
        for seed in 0..6 {
            let mut rng = rng_from_seed(seed * 91 + 5);
            let space = random_space(&mut rng, 6);
            let sa: KvMatrix<GQ> = random_kv(space, Profile::Selfadjoint, seed);
            assert!(is_selfadjoint(&sa, &pol), "selfadjoint seed {seed}");
            let me: KvMatrix<GQ> = random_kv(space, Profile::Metric, seed);
            assert!(is_metric(&me, &pol), "metric seed {seed}");
            let sn: KvMatrix<GQ> = random_kv(space, Profile::Seminormal, seed);
            assert!(is_seminormal(&sn, &pol), "seminormal seed {seed}");
            let bd: KvMatrix<GQ> = random_kv(space, Profile::Bounded, seed);
            assert!(is_bounded(&bd, &pol), "bounded seed {seed}");
        }
    }

    #[test]
    fn random_unitary_is_exactly_unitary() {
        for seed in 0..5 {
            let mut rng = rng_from_seed(seed);
            let u: crate::mat::Mat<GQ> = random_unitary(3, &mut rng);
            assert!(u.adjoint().matmul(&u).is_identity_tol(0.0));
        }
    }

    #[test]
    fn hermitian_instances_are_hermitian() {
        for seed in 0..5 {
            let (kv, _) = hermitian_instance::<GQ>(SemiunitarySpace::new(4, 2), seed);
            assert!(kv.to_full().is_hermitian_tol(0.0));
        }
    }
}
