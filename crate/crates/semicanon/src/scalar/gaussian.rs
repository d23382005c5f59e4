//! Exact complex numbers with rational real and imaginary parts.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::sum_of_two_squares;
use super::{Scalar, TolerancePolicy};
use crate::error::Result;

type Q = Ratio<BigInt>;

/// An element of Q(i): exact arithmetic, closed under the four field
/// operations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Q,
    im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational {
            re: Ratio::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: Ratio::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn re(&self) -> &Q {
        &self.re
    }

    pub fn im(&self) -> &Q {
        &self.im
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |self|^2 as an exact nonnegative rational.
    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Some Gaussian rational c with |c|^2 = r, when one exists. Requires
    /// factoring the numerator times denominator of r; gives up (None) on a
    /// hard factorization, which callers treat as unrepresentable.
    pub fn with_norm_sq(r: &Q) -> Option<GaussianRational> {
        if r.is_zero() {
            return Some(GaussianRational::from_int(0, 0));
        }
        if r.is_negative() {
            return None;
        }
        let p = r.numer().magnitude().clone();
        let q = r.denom().magnitude().clone();
        // |(a+bi)/q|^2 = (a^2+b^2)/q^2 = p/q  <=>  a^2+b^2 = p*q
        let (a, b) = sum_of_two_squares(&(&p * &q))?;
        let den = BigInt::from(q);
        Some(GaussianRational {
            re: Ratio::new(a, den.clone()),
            im: Ratio::new(b, den),
        })
    }

    fn q_to_f64(q: &Q) -> f64 {
        q.to_f64().unwrap_or_else(|| {
            // fall back through a scaled division for extreme magnitudes
            let n = q.numer().to_f64().unwrap_or(f64::MAX);
            let d = q.denom().to_f64().unwrap_or(f64::MAX);
            n / d
        })
    }
}

/// Nearest integer to p/q, ties resolved toward the truncated quotient.
fn round_ratio(p: &BigInt, q: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (d, _) = p.div_rem(q);
    let mut best = d.clone();
    let mut best_err = (p - &d * q).magnitude().clone();
    for cand in [&d - 1i32, &d + 1i32] {
        let diff: BigInt = p - &cand * q;
        let err = diff.magnitude().clone();
        if err < best_err {
            best_err = err;
            best = cand;
        }
    }
    best
}

/// Euclidean gcd over the Gaussian integers (unique up to a unit).
fn gauss_gcd(mut a: (BigInt, BigInt), mut b: (BigInt, BigInt)) -> (BigInt, BigInt) {
    loop {
        if b.0.is_zero() && b.1.is_zero() {
            return a;
        }
        let norm_b = &b.0 * &b.0 + &b.1 * &b.1;
        // round(a * conj(b) / |b|^2)
        let num_re = &a.0 * &b.0 + &a.1 * &b.1;
        let num_im = &a.1 * &b.0 - &a.0 * &b.1;
        let q_re = round_ratio(&num_re, &norm_b);
        let q_im = round_ratio(&num_im, &norm_b);
        let r_re = &a.0 - (&q_re * &b.0 - &q_im * &b.1);
        let r_im = &a.1 - (&q_re * &b.1 + &q_im * &b.0);
        a = b;
        b = (r_re, r_im);
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussianRational { re, im }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussianRational { re: Q::zero(), im: Q::zero() }
    }

    fn one() -> Self {
        GaussianRational { re: Q::one(), im: Q::zero() }
    }

    fn i() -> Self {
        GaussianRational { re: Q::zero(), im: Q::one() }
    }

    fn from_int(re: i64, im: i64) -> Self {
        GaussianRational { re: Q::from(BigInt::from(re)), im: Q::from(BigInt::from(im)) }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational { re: Ratio::new(BigInt::from(num), BigInt::from(den)), im: Q::zero() }
    }

    fn from_f64(re: f64, im: f64) -> Self {
        let conv = |x: f64| Ratio::from_float(x).unwrap_or_else(Q::zero);
        GaussianRational { re: conv(re), im: conv(im) }
    }

    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_exactly_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    fn abs2(&self) -> Self {
        GaussianRational { re: self.norm_sq(), im: Q::zero() }
    }

    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_exactly_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn abs2_f64(&self) -> f64 {
        Self::q_to_f64(&self.norm_sq())
    }

    fn re_f64(&self) -> f64 {
        Self::q_to_f64(&self.re)
    }

    fn im_f64(&self) -> f64 {
        Self::q_to_f64(&self.im)
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn real_part(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: Q::zero() }
    }

    fn is_real_tol(&self, _tol: f64) -> bool {
        self.im.is_zero()
    }

    fn normalize_direction(v: &mut [Self]) {
        use num_integer::Integer;
        if v.iter().all(|x| x.is_exactly_zero()) {
            return;
        }
        // clear denominators
        let mut lcm = BigInt::from(1);
        for x in v.iter() {
            lcm = lcm.lcm(x.re.denom());
            lcm = lcm.lcm(x.im.denom());
        }
        let scale = Q::from(lcm);
        let mut ints: Vec<(BigInt, BigInt)> = v
            .iter()
            .map(|x| {
                let re = (&x.re * &scale).to_integer();
                let im = (&x.im * &scale).to_integer();
                (re, im)
            })
            .collect();
        // divide by the Gaussian-integer content
        let mut content: Option<(BigInt, BigInt)> = None;
        for z in &ints {
            if z.0.is_zero() && z.1.is_zero() {
                continue;
            }
            content = Some(match content {
                None => z.clone(),
                Some(c) => gauss_gcd(c, z.clone()),
            });
        }
        let content = content.expect("nonzero vector");
        let norm = &content.0 * &content.0 + &content.1 * &content.1;
        if !norm.is_one() {
            for z in ints.iter_mut() {
                // z / content = z * conj(content) / norm, exact by gcd
                let re = (&z.0 * &content.0 + &z.1 * &content.1) / &norm;
                let im = (&z.1 * &content.0 - &z.0 * &content.1) / &norm;
                *z = (re, im);
            }
        }
        for (x, z) in v.iter_mut().zip(ints) {
            *x = GaussianRational { re: Q::from(z.0), im: Q::from(z.1) };
        }
    }

    fn inv_norm_scalar(x: &Self) -> Option<Self> {
        if !x.im.is_zero() || !x.re.is_positive() {
            return None;
        }
        GaussianRational::with_norm_sq(&x.re.recip())
    }

    fn sqrt_positive(x: &Self) -> Option<Self> {
        if !x.im.is_zero() || x.re.is_negative() {
            return None;
        }
        if x.re.is_zero() {
            return Some(Self::zero());
        }
        let num = x.re.numer().magnitude();
        let den = x.re.denom().magnitude();
        let sn = num.sqrt();
        let sd = den.sqrt();
        if &sn * &sn == *num && &sd * &sd == *den {
            Some(GaussianRational {
                re: Ratio::new(BigInt::from(sn), BigInt::from(sd)),
                im: Q::zero(),
            })
        } else {
            None
        }
    }

    fn weight_residual(x: &Self) -> Option<(Self, u64)> {
        use num_traits::ToPrimitive;
        if !x.im.is_zero() || !x.re.is_positive() {
            return None;
        }
        let p = x.re.numer().magnitude().clone();
        let q = x.re.denom().magnitude().clone();
        // p/q = (p*q)/q^2; split p*q = (a^2+b^2) * r
        let ((a, b), reduced) = super::arith::norm_part_split(&(&p * &q))?;
        let r = reduced.to_u64()?;
        let den = BigInt::from(q);
        let g = GaussianRational { re: Ratio::new(a, den.clone()), im: Ratio::new(b, den) };
        Some((g, r))
    }

    fn eigenvalues_flat(data: &[Self], n: usize, pol: &TolerancePolicy) -> Result<Vec<Self>> {
        crate::kernel::eigen::exact_eigenvalues(data, n, pol)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_int(re, im)
    }

    #[test]
    fn field_ops_exact() {
        let a = GaussianRational::from_ratios((1, 3), (2, 5));
        let b = gr(2, -1);
        let prod = a.clone() * b.clone();
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
        let inv = a.inv().unwrap();
        assert!( (a.clone() * inv).is_one());
        assert_eq!(gr(0, 0).inv(), None);
    }

    #[test]
    fn conj_and_norm() {
        let z = gr(3, 4);
        assert_eq!(z.abs2(), gr(25, 0));
        assert_eq!(z.clone() * z.conj(), gr(25, 0));
    }

    #[test]
    fn with_norm_sq_finds_unit() {
        // 1/2 = |(1+i)/2|^2
        let half = Ratio::new(BigInt::from(1), BigInt::from(2));
        let c = GaussianRational::with_norm_sq(&half).unwrap();
        assert_eq!(c.norm_sq(), half);
        // 3 is not a sum of two rational squares
        let three = Ratio::from(BigInt::from(3));
        assert!(GaussianRational::with_norm_sq(&three).is_none());
    }

    #[test]
    fn sqrt_positive_rational_squares() {
        let x = GaussianRational::from_ratios((9, 4), (0, 1));
        assert_eq!(GaussianRational::sqrt_positive(&x).unwrap(), GaussianRational::from_ratio(3, 2));
        let y = gr(2, 0);
        assert!(GaussianRational::sqrt_positive(&y).is_none());
    }

    #[test]
    fn display_format() {
        assert_eq!(format!("{}", gr(1, -2)), "1-2i");
        assert_eq!(format!("{}", GaussianRational::from_ratios((1, 2), (0, 1))), "1/2");
        assert_eq!(format!("{}", gr(0, 1)), "1i");
    }
}
