//! Integer routines behind exact unit-norm construction: factorization with a
//! work budget, primality testing, and writing integers as sums of two squares.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Deterministic Miller-Rabin. Exact for inputs below 3.3e24; for larger
/// inputs the fixed bases make this a strong probable-prime test, which is
/// fine here: a composite that slips through only makes a representation
/// search fail, never produces a wrong result.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &[2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent rho with an iteration budget. Returns a nontrivial factor
/// or None when the budget runs out.
fn pollard_brent(n: &BigUint, seed: u64, budget: usize) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut rng_state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next_small = || {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (rng_state >> 33) as u32 | 1
    };
    for _ in 0..6 {
        let c = BigUint::from(next_small());
        let mut x = BigUint::from(next_small());
        let mut y = x.clone();
        let mut d = one.clone();
        let mut count = 0usize;
        let step = |v: &BigUint| (v * v + &c) % n;
        while d.is_one() && count < budget {
            x = step(&x);
            y = step(&step(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            count += 1;
        }
        if !d.is_one() && &d != n {
            return Some(d);
        }
    }
    None
}

/// Factor `n` into primes, giving up (None) if a cofactor resists the budget.
pub fn factor(n: &BigUint) -> Option<Vec<(BigUint, u32)>> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut rem = n.clone();
    let push = |p: BigUint, k: u32, out: &mut Vec<(BigUint, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += k;
        } else {
            out.push((p, k));
        }
    };
    // trial division
    let mut d = 2u64;
    while d < 100_000 {
        if rem.is_one() {
            break;
        }
        let bd = BigUint::from(d);
        if &bd * &bd > rem {
            break;
        }
        let mut k = 0u32;
        while (&rem % &bd).is_zero() {
            rem /= &bd;
            k += 1;
        }
        if k > 0 {
            push(bd, k, &mut out);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    // recursive splitting of what remains
    let mut stack = vec![rem];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, 1, &mut out);
            continue;
        }
        // perfect powers fall to rho as well, but check squares cheaply first
        let r = m.sqrt();
        if &r * &r == m {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        match pollard_brent(&m, m.to_u64_digits().first().copied().unwrap_or(1), 300_000) {
            Some(f) => {
                stack.push(&m / &f);
                stack.push(f);
            }
            None => return None,
        }
    }
    out.sort();
    Some(out)
}

/// Find x with x^2 = -1 (mod p) for prime p = 1 (mod 4).
fn sqrt_minus_one_mod(p: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    let exp = (p - &one) >> 2;
    let p_minus_1 = p - &one;
    for a in 2u32..64 {
        let x = BigUint::from(a).modpow(&exp, p);
        let sq = x.modpow(&BigUint::from(2u32), p);
        if sq == p_minus_1 {
            return Some(x);
        }
    }
    None
}

/// Cornacchia: write prime p = 1 (mod 4) as a^2 + b^2.
fn two_squares_prime(p: &BigUint) -> Option<(BigUint, BigUint)> {
    if p == &BigUint::from(2u32) {
        return Some((BigUint::one(), BigUint::one()));
    }
    let mut a = p.clone();
    let mut b = sqrt_minus_one_mod(p)?;
    let bound = p.sqrt();
    while b > bound {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    let b2 = p - &b * &b;
    let c = b2.sqrt();
    if &c * &c == b2 {
        Some((b, c))
    } else {
        None
    }
}

/// Write n >= 0 as a^2 + b^2 over the integers, or None when impossible or
/// when factoring n exceeds the budget.
pub fn sum_of_two_squares(n: &BigUint) -> Option<(BigInt, BigInt)> {
    if n.is_zero() {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    let factors = factor(n)?;
    // every prime = 3 (mod 4) must occur to an even power
    let three = BigUint::from(3u32);
    let four = BigUint::from(4u32);
    let mut square_part = BigUint::one();
    let mut odd_primes: Vec<BigUint> = Vec::new();
    for (p, k) in &factors {
        let residue = p % &four;
        if residue == three {
            if k % 2 != 0 {
                return None;
            }
            square_part *= p.pow(k / 2);
        } else {
            square_part *= p.pow(k / 2);
            if k % 2 == 1 {
                odd_primes.push(p.clone());
            }
        }
    }
    // compose Gaussian factors for the odd-exponent primes
    let mut a = BigInt::from(square_part);
    let mut b = BigInt::zero();
    for p in odd_primes {
        let (x, y) = two_squares_prime(&p)?;
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        // (a+bi)(x+yi)
        let na = &a * &x - &b * &y;
        let nb = &a * &y + &b * &x;
        a = na;
        b = nb;
    }
    Some((a, b))
}

/// Split n = (sum-of-two-squares part) * (squarefree product of primes
/// = 3 mod 4). Returns ((a, b) with a^2+b^2 = the first part, reduced).
pub fn norm_part_split(n: &BigUint) -> Option<((BigInt, BigInt), BigUint)> {
    if n.is_zero() {
        return None;
    }
    let factors = factor(n)?;
    let four = BigUint::from(4u32);
    let three = BigUint::from(3u32);
    let mut norm_part = BigUint::one();
    let mut reduced = BigUint::one();
    for (p, k) in &factors {
        if p % &four == three {
            norm_part *= p.pow(2 * (k / 2));
            if k % 2 == 1 {
                reduced *= p;
            }
        } else {
            norm_part *= p.pow(*k);
        }
    }
    let rep = sum_of_two_squares(&norm_part)?;
    Some((rep, reduced))
}

/// Sieve of sums of two squares up to `limit` (inclusive); flags[v] says
/// whether v = a^2 + b^2 has an integer solution.
fn two_square_sieve(limit: usize) -> Vec<bool> {
    let mut flags = vec![false; limit + 1];
    let mut a = 0usize;
    while a * a <= limit {
        let mut b = a;
        while a * a + b * b <= limit {
            flags[a * a + b * b] = true;
            b += 1;
        }
        a += 1;
    }
    flags
}

fn two_square_rep_u64(v: u64) -> Option<(i64, i64)> {
    let mut a = 0u64;
    while a * a * 2 <= v {
        let rem = v - a * a;
        let b = (rem as f64).sqrt() as u64;
        for bb in b.saturating_sub(1)..=b + 1 {
            if a * a + bb * bb == v {
                return Some((a as i64, bb as i64));
            }
        }
        a += 1;
    }
    None
}

/// Solve r1*(a^2+b^2) + r2*(c^2+d^2) = t^2 in integers with t > 0.
/// Every positive-definite rank-two Hermitian form over the Gaussian
/// rationals represents every positive rational, so a solution exists; the
/// search is bounded for safety and returns None only past the cap.
pub fn pair_two_square_split(r1: u64, r2: u64) -> Option<(i64, i64, i64, i64, u64)> {
    if r1 == 0 || r2 == 0 {
        return None;
    }
    let (small, large, swapped) = if r1 <= r2 { (r1, r2, false) } else { (r2, r1, true) };
    if large > 5000 {
        return None;
    }
    let t_bound = (4 * large + 24).min(6000);
    let limit = (t_bound * t_bound) as usize;
    let flags = two_square_sieve(limit);
    for t in 1..=t_bound {
        let tt = t * t;
        // enumerate the large-weight part, check the small-weight residual
        let mut c = 0u64;
        while large * c * c <= tt {
            let mut d = 0u64;
            while large * (c * c + d * d) <= tt {
                let s2 = c * c + d * d;
                if flags[s2 as usize] || s2 == 0 {
                    let rem = tt - large * s2;
                    if rem % small == 0 {
                        let s1 = rem / small;
                        if s1 as usize <= limit && (s1 == 0 || flags[s1 as usize]) {
                            if s1 == 0 && s2 == 0 {
                                d += 1;
                                continue;
                            }
                            let (a, b) = if s1 == 0 {
                                (0, 0)
                            } else {
                                two_square_rep_u64(s1)?
                            };
                            let (cc, dd) = if s2 == 0 {
                                (0, 0)
                            } else {
                                two_square_rep_u64(s2)?
                            };
                            return Some(if swapped {
                                (cc, dd, a, b, t)
                            } else {
                                (a, b, cc, dd, t)
                            });
                        }
                    }
                }
                d += 1;
            }
            c += 1;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes = [2u32, 3, 5, 7, 11, 101, 65537];
        for p in primes {
            assert!(is_probable_prime(&BigUint::from(p)), "{p}");
        }
        for c in [1u32, 4, 9, 91, 561, 65535] {
            assert!(!is_probable_prime(&BigUint::from(c)), "{c}");
        }
    }

    #[test]
    fn factor_roundtrip() {
        for n in [2u64, 12, 97, 1 << 20, 600851475143, 999962000357] {
            let n = BigUint::from(n);
            let fs = factor(&n).unwrap();
            let mut prod = BigUint::one();
            for (p, k) in &fs {
                assert!(is_probable_prime(p));
                prod *= p.pow(*k);
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn two_squares_basic() {
        for n in [0u64, 1, 2, 4, 5, 8, 9, 13, 25, 50, 65, 325, 1105] {
            let n = BigUint::from(n);
            let (a, b) = sum_of_two_squares(&n).unwrap();
            assert_eq!(BigUint::try_from(&a * &a + &b * &b).unwrap(), n);
        }
        for n in [3u64, 6, 7, 12, 21, 2023] {
            assert!(sum_of_two_squares(&BigUint::from(n)).is_none(), "{n}");
        }
    }

    #[test]
    fn norm_part_split_examples() {
        // 1185 = 3*5*79: removable 5, reduced 3*79 = 237
        let ((a, b), red) = norm_part_split(&BigUint::from(1185u32)).unwrap();
        assert_eq!(red, BigUint::from(237u32));
        assert_eq!(&a * &a + &b * &b, BigInt::from(5));
        let ((a, b), red) = norm_part_split(&BigUint::from(50u32)).unwrap();
        assert!(red.is_one());
        assert_eq!(&a * &a + &b * &b, BigInt::from(50));
    }

    #[test]
    fn pair_split_solves_hard_pairs() {
        for (r1, r2) in [(3u64, 7u64), (237, 237), (3, 3), (1, 7), (21, 33), (1, 1)] {
            let (a, b, c, d, t) = pair_two_square_split(r1, r2)
                .unwrap_or_else(|| panic!("no solution for ({r1},{r2})"));
            let lhs = r1 as i64 * (a * a + b * b) + r2 as i64 * (c * c + d * d);
            assert_eq!(lhs, (t * t) as i64, "({r1},{r2})");
        }
    }

    #[test]
    fn two_squares_larger() {
        // product of two primes = 1 mod 4
        let n = BigUint::from(104729u64) * BigUint::from(1299709u64);
        let (a, b) = sum_of_two_squares(&n).unwrap();
        assert_eq!(BigUint::try_from(&a * &a + &b * &b).unwrap(), n);
        // one factor = 3 mod 4 to an odd power
        let m = BigUint::from(104729u64) * BigUint::from(3u64);
        assert!(sum_of_two_squares(&m).is_none());
    }
}
