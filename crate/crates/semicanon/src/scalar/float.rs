//! Floating complex backend over `num_complex::Complex64`.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::{Scalar, TolerancePolicy};
use crate::error::Result;

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_int(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_f64(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            None
        } else {
            Some(Complex64::new(self.re / n, -self.im / n))
        }
    }

    fn abs2(&self) -> Self {
        Complex64::new(self.norm_sqr(), 0.0)
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }

    fn abs2_f64(&self) -> f64 {
        self.norm_sqr()
    }

    fn re_f64(&self) -> f64 {
        self.re
    }

    fn im_f64(&self) -> f64 {
        self.im
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then(self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }

    fn real_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }

    fn is_real_tol(&self, tol: f64) -> bool {
        self.im.abs() <= tol
    }

    fn normalize_direction(v: &mut [Self]) {
        let max = v.iter().map(|x| x.norm_sqr()).fold(0.0f64, f64::max).sqrt();
        if max > 0.0 {
            for x in v.iter_mut() {
                *x /= max;
            }
        }
    }

    fn inv_norm_scalar(x: &Self) -> Option<Self> {
        if x.re <= 0.0 {
            return None;
        }
        Some(Complex64::new(1.0 / x.re.sqrt(), 0.0))
    }

    fn sqrt_positive(x: &Self) -> Option<Self> {
        if x.re < 0.0 {
            return None;
        }
        Some(Complex64::new(x.re.sqrt(), 0.0))
    }

    fn weight_residual(x: &Self) -> Option<(Self, u64)> {
        if x.re <= 0.0 {
            return None;
        }
        Some((Complex64::new(x.re.sqrt(), 0.0), 1))
    }

    fn eigenvalues_flat(data: &[Self], n: usize, pol: &TolerancePolicy) -> Result<Vec<Self>> {
        crate::kernel::eigen::float_eigenvalues(data, n, pol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_hooks() {
        let four = Complex64::new(4.0, 0.0);
        let c = Complex64::inv_norm_scalar(&four).unwrap();
        assert!((c.re - 0.5).abs() < 1e-15);
        assert_eq!(Complex64::sqrt_positive(&four).unwrap().re, 2.0);
        assert!(Complex64::inv_norm_scalar(&Complex64::zero()).is_none());
    }
}
