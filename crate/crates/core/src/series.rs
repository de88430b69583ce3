//! Truncated power series over `Complex64`.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of `z^0..=z^N`.
//! Binary operations truncate to the smaller operand order. Composition and
//! reversion keep the order of their input.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance used when checking normalization conditions on float coefficients.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Default truncation order for constructions.
pub const DEFAULT_ORDER: usize = 30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("log requires constant term 1, found {0}")]
    LogConstantTerm(Complex64),
    #[error("exp requires constant term 0, found {0}")]
    ExpConstantTerm(Complex64),
    #[error("reciprocal of a series with zero constant term")]
    NotInvertible,
    #[error("composition requires inner series with zero constant term, found {0}")]
    CompositionConstantTerm(Complex64),
    #[error("reversion requires a0 = 0 and a1 = 1, found a0 = {a0}, a1 = {a1}")]
    NotNormalized { a0: Complex64, a1: Complex64 },
    #[error("series of order {order} cannot be divided by z^{shift}")]
    ShiftUnderflow { order: usize, shift: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= NORMALIZATION_TOL
}

impl TruncatedSeries {
    /// Builds a series from coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Builds the series from a coefficient rule `n -> a_n`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_fn(order, |n| self.coeff(n))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    /// Largest coefficient-wise distance over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n).map(|k| (self.coeffs[k] - other.coeffs[k]).norm()).fold(0.0, f64::max)
    }

    /// Multiplication by `z^shift`, keeping the order.
    pub fn shift_up(&self, shift: usize) -> Self {
        Self::from_fn(self.order(), |n| if n >= shift { self.coeffs[n - shift] } else { Complex64::default() })
    }

    /// Division by `z^shift`; the lowest `shift` coefficients are discarded and
    /// the order drops by `shift`.
    pub fn shift_down(&self, shift: usize) -> Result<Self, SeriesError> {
        if shift > self.order() {
            return Err(SeriesError::ShiftUnderflow { order: self.order(), shift });
        }
        Ok(Self::new(self.coeffs[shift..].to_vec()))
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |n| self.coeffs[n + 1] * (n as f64 + 1.0))
    }

    /// Antiderivative with zero constant term; order grows by one.
    pub fn integrate(&self) -> Self {
        Self::from_fn(self.order() + 1, |n| if n == 0 { Complex64::default() } else { self.coeffs[n - 1] / n as f64 })
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let mut b = vec![Complex64::default(); n + 1];
        b[0] = a0.inv();
        for k in 1..=n {
            let acc: Complex64 = (1..=k).map(|j| self.coeffs[j] * b[k - j]).sum();
            b[k] = -acc * b[0];
        }
        Ok(Self::new(b))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.recip()?)
    }

    /// Logarithm of a series with unit constant term.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if !near(a0, Complex64::new(1.0, 0.0)) {
            return Err(SeriesError::LogConstantTerm(a0));
        }
        // n L_n = n a_n - sum_{k=1}^{n-1} k L_k a_{n-k}
        let n = self.order();
        let mut l = vec![Complex64::default(); n + 1];
        for m in 1..=n {
            let acc: Complex64 = (1..m).map(|k| l[k] * self.coeffs[m - k] * k as f64).sum();
            l[m] = self.coeffs[m] - acc / m as f64;
        }
        Ok(Self::new(l))
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs[0];
        if a0.norm() > NORMALIZATION_TOL {
            return Err(SeriesError::ExpConstantTerm(a0));
        }
        // E' = a' E  =>  n E_n = sum_{k=1}^{n} k a_k E_{n-k}
        let n = self.order();
        let mut e = vec![Complex64::default(); n + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for m in 1..=n {
            let acc: Complex64 = (1..=m).map(|k| self.coeffs[k] * e[m - k] * k as f64).sum();
            e[m] = acc / m as f64;
        }
        Ok(Self::new(e))
    }

    /// `self(inner(z))`, truncated at the order of `self`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        let b0 = inner.coeffs[0];
        if b0.norm() > NORMALIZATION_TOL {
            return Err(SeriesError::CompositionConstantTerm(b0));
        }
        let n = self.order();
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of `z + a_2 z^2 + ...`.
    ///
    /// Solves `self(b(w)) = w` one coefficient at a time: with `b_n` unknown,
    /// the coefficient of `w^n` in `self(b(w))` is `b_n` plus terms that only
    /// involve `b_2..b_{n-1}`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        let (a0, a1) = (self.coeff(0), self.coeff(1));
        if a0.norm() > NORMALIZATION_TOL || !near(a1, Complex64::new(1.0, 0.0)) || self.order() == 0 {
            return Err(SeriesError::NotNormalized { a0, a1 });
        }
        let n = self.order();
        let mut b = Self::identity(n);
        for m in 2..=n {
            let mut pow = b.clone();
            let mut coeff_m = Complex64::default();
            for k in 2..=m {
                pow = &pow * &b;
                coeff_m += self.coeffs[k] * pow.coeffs[m];
            }
            b.coeffs[m] = -coeff_m;
        }
        Ok(b)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries::from_fn(n, |k| self.coeffs[k] + rhs.coeffs[k])
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries::from_fn(n, |k| self.coeffs[k] - rhs.coeffs[k])
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries::from_fn(n, |k| (0..=k).map(|j| self.coeffs[j] * rhs.coeffs[k - j]).sum())
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;

            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) {
        assert_eq!(a.order(), b.order());
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "series differ by {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn add_cancels_and_identity() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]);
        let b = TruncatedSeries::from_real(&[1.0, -1.0, 0.0]);
        assert_eq!(&a + &b, TruncatedSeries::from_real(&[2.0, 0.0, 0.0]));
        assert_eq!(&a + &TruncatedSeries::zero(2), a);
    }

    #[test]
    fn binary_ops_truncate_to_min_order() {
        let a = TruncatedSeries::from_real(&[1.0, 2.0, 3.0, 4.0]);
        let b = TruncatedSeries::from_real(&[1.0, 1.0]);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a - &b).order(), 1);
    }

    #[test]
    fn mul_small_cases() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]);
        let b = TruncatedSeries::from_real(&[1.0, -1.0, 0.0]);
        assert_eq!(&a * &b, TruncatedSeries::from_real(&[1.0, 0.0, -1.0]));
        assert_eq!(&a * &TruncatedSeries::one(2), a);
    }

    #[test]
    fn geometric_series_times_one_minus_z() {
        let n = 30;
        let geo = TruncatedSeries::from_fn(n, |_| c(1.0));
        let one_minus_z = &TruncatedSeries::one(n) - &TruncatedSeries::identity(n);
        assert_close(&(&one_minus_z * &geo), &TruncatedSeries::one(n), 0.0);
    }

    #[test]
    fn log_of_geometric_series() {
        let n = 20;
        let geo = TruncatedSeries::from_fn(n, |_| c(1.0));
        let expect = TruncatedSeries::from_fn(n, |k| if k == 0 { c(0.0) } else { c(1.0 / k as f64) });
        assert_close(&geo.log().unwrap(), &expect, 1e-15);
        assert_close(&TruncatedSeries::one(5).log().unwrap(), &TruncatedSeries::zero(5), 0.0);
    }

    #[test]
    fn log_rejects_non_unit_constant() {
        let a = TruncatedSeries::from_real(&[2.0, 1.0]);
        assert!(matches!(a.log(), Err(SeriesError::LogConstantTerm(_))));
    }

    #[test]
    fn exp_small_cases() {
        assert_close(&TruncatedSeries::zero(6).exp().unwrap(), &TruncatedSeries::one(6), 0.0);
        let mut fact = 1.0;
        let expect = TruncatedSeries::from_fn(15, |k| {
            if k > 0 {
                fact *= k as f64;
            }
            c(1.0 / fact)
        });
        assert_close(&TruncatedSeries::identity(15).exp().unwrap(), &expect, 1e-15);
        assert!(TruncatedSeries::from_real(&[0.5, 1.0]).exp().is_err());
    }

    #[test]
    fn derivative_and_integrate() {
        // f0 = z + (2/3) z^3 + (2/5) z^5
        let f0 = TruncatedSeries::from_real(&[0.0, 1.0, 0.0, 2.0 / 3.0, 0.0, 2.0 / 5.0]);
        assert_close(&f0.derivative(), &TruncatedSeries::from_real(&[1.0, 0.0, 2.0, 0.0, 2.0]), 1e-15);
        assert_eq!(TruncatedSeries::constant(c(3.0), 3).derivative(), TruncatedSeries::zero(2));
        assert_eq!(TruncatedSeries::one(0).integrate(), TruncatedSeries::identity(1));
        let two_z = TruncatedSeries::from_real(&[0.0, 2.0]);
        assert_eq!(two_z.integrate(), TruncatedSeries::from_real(&[0.0, 0.0, 1.0]));
        assert_eq!(TruncatedSeries::one(0).derivative(), TruncatedSeries::zero(0));
    }

    #[test]
    fn revert_identity_and_catalan() {
        assert_eq!(TruncatedSeries::identity(8).revert().unwrap(), TruncatedSeries::identity(8));
        // w - w^2 + 2w^3 - 5w^4 + 14w^5: signed Catalan numbers
        let a = TruncatedSeries::from_real(&[0.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let b = a.revert().unwrap();
        assert_close(&b, &TruncatedSeries::from_real(&[0.0, 1.0, -1.0, 2.0, -5.0, 14.0]), 1e-13);
        assert_close(&a.compose(&b).unwrap(), &TruncatedSeries::identity(5), 1e-13);
    }

    #[test]
    fn revert_rejects_unnormalized() {
        let a = TruncatedSeries::from_real(&[0.0, 2.0, 1.0]);
        assert!(matches!(a.revert(), Err(SeriesError::NotNormalized { .. })));
        let b = TruncatedSeries::from_real(&[0.1, 1.0, 1.0]);
        assert!(b.revert().is_err());
    }

    #[test]
    fn compose_rejects_nonzero_inner_constant() {
        let a = TruncatedSeries::identity(3);
        assert!(a.compose(&TruncatedSeries::one(3)).is_err());
    }

    #[test]
    fn shifts() {
        let a = TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(a.shift_down(1).unwrap(), TruncatedSeries::from_real(&[1.0, 2.0, 3.0]));
        assert_eq!(a.shift_up(1), TruncatedSeries::from_real(&[0.0, 0.0, 1.0, 2.0]));
        assert!(a.shift_down(4).is_err());
    }
}
