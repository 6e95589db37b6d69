//! Truncated power series `sum_{k=0}^{M} s_k u^k` over exact rationals or `f64`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations needed by series arithmetic.
pub trait Coefficient:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + core::fmt::Debug
{
    fn from_int(n: i64) -> Self;
    fn div_int(&self, n: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn div_int(&self, n: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Coefficient for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn div_int(&self, n: i64) -> Self {
        self / n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// A power series known through `u^order`; higher terms are discarded by
/// every operation.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coefficients: Vec<T>,
}

impl<T: Coefficient> PowerSeries<T> {
    /// Takes `coefficients[k]` as the coefficient of `u^k`; the order is
    /// `coefficients.len() - 1`.
    pub fn new(coefficients: Vec<T>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "a power series needs at least a constant term"
        );
        Self { coefficients }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![T::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = T::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> &T {
        &self.coefficients[k]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coefficients = self.coefficients.clone();
        coefficients.resize(order + 1, T::zero());
        Self { coefficients }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        )
    }

    /// `d/du`, of order one less (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    /// `exp(s)` for a series with zero constant term, via
    /// `n e_n = sum_{k=1}^n k s_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coefficients[0].is_zero() {
            return Err(Error::InvalidArgument(
                "exp needs a zero constant term".into(),
            ));
        }
        let order = self.order();
        let mut e = vec![T::zero(); order + 1];
        e[0] = T::one();
        for n in 1..=order {
            let mut acc = T::zero();
            for k in 1..=n {
                acc = acc + T::from_int(k as i64) * self.coefficients[k].clone() * e[n - k].clone();
            }
            e[n] = acc.div_int(n as i64);
        }
        Ok(Self::new(e))
    }

    /// `log(s)` for a series with constant term 1, via
    /// `n l_n = n s_n - sum_{k=1}^{n-1} k l_k s_{n-k}`.
    pub fn log(&self) -> Result<Self> {
        if !self.coefficients[0].is_one() {
            return Err(Error::InvalidArgument("log needs constant term 1".into()));
        }
        let order = self.order();
        let mut l = vec![T::zero(); order + 1];
        for n in 1..=order {
            let mut acc = T::from_int(n as i64) * self.coefficients[n].clone();
            for k in 1..n {
                acc = acc - T::from_int(k as i64) * l[k].clone() * self.coefficients[n - k].clone();
            }
            l[n] = acc.div_int(n as i64);
        }
        Ok(Self::new(l))
    }

    /// Value at `u` in floating point, by Horner's rule.
    pub fn evaluate(&self, u: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c.to_f64())
    }

    pub fn to_f64(&self) -> PowerSeries<f64> {
        PowerSeries::new(self.coefficients.iter().map(Coefficient::to_f64).collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Self {
        let order = self.order().min(other.order());
        Self::new(
            (0..=order)
                .map(|k| op(self.coefficients[k].clone(), other.coefficients[k].clone()))
                .collect(),
        )
    }
}

impl<T: Coefficient> Add for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn add(self, other: Self) -> PowerSeries<T> {
        self.zip_with(other, |a, b| a + b)
    }
}

impl<T: Coefficient> Sub for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn sub(self, other: Self) -> PowerSeries<T> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl<T: Coefficient> Neg for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn neg(self) -> PowerSeries<T> {
        PowerSeries::new(self.coefficients.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Coefficient> Mul for &PowerSeries<T> {
    type Output = PowerSeries<T>;

    fn mul(self, other: Self) -> PowerSeries<T> {
        let order = self.order().min(other.order());
        let mut out = vec![T::zero(); order + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(order + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn geometric(order: usize) -> PowerSeries<BigRational> {
        PowerSeries::new(vec![BigRational::one(); order + 1])
    }

    #[test]
    fn log_of_geometric_series() {
        // log(1/(1-u)) = sum u^k / k.
        let log = geometric(8).log().unwrap();
        assert!(log.coefficient(0).is_zero());
        for k in 1..=8 {
            assert_eq!(*log.coefficient(k), rational(1, k as i64));
        }
    }

    #[test]
    fn exp_of_u_is_factorial_series() {
        let mut c = vec![BigRational::zero(); 7];
        c[1] = BigRational::one();
        let e = PowerSeries::new(c).exp().unwrap();
        let mut factorial = 1i64;
        for k in 0..=6 {
            if k > 0 {
                factorial *= k as i64;
            }
            assert_eq!(*e.coefficient(k), rational(1, factorial));
        }
    }

    #[test]
    fn product_and_truncation() {
        let one_minus_u = PowerSeries::new(vec![rational(1, 1), rational(-1, 1), rational(0, 1)]);
        let product = &geometric(5) * &one_minus_u;
        assert_eq!(product.order(), 2);
        assert_eq!(product, PowerSeries::one(2));
        assert_eq!((&product - &PowerSeries::one(2)), PowerSeries::zero(2));
    }

    #[test]
    fn derivative_and_evaluation() {
        let s = PowerSeries::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(s.derivative(), PowerSeries::new(vec![2.0, 6.0]));
        assert_eq!(s.evaluate(2.0), 17.0);
        assert_eq!((-&s).evaluate(1.0), -6.0);
    }

    #[test]
    fn domain_errors() {
        assert!(PowerSeries::new(vec![1.0, 1.0]).exp().is_err());
        assert!(PowerSeries::new(vec![2.0, 1.0]).log().is_err());
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(c in proptest::collection::vec(-20i64..20, 1..10)) {
            let mut coefficients = vec![BigRational::zero()];
            coefficients.extend(c.iter().enumerate().map(|(k, &n)| rational(n, k as i64 + 1)));
            let s = PowerSeries::new(coefficients);
            let e = s.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), s.clone());
            let scaled = s.scale(&rational(2, 1));
            prop_assert_eq!(&e * &e, scaled.exp().unwrap());
        }
    }
}
