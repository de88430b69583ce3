//! Coefficient maps for the classes R and R1, inverse coefficients, Hankel
//! determinants and the extremal functions.
//!
//! For `f(z) = z + a2 z^2 + ...` in R we have `f' = p` with `p` in the
//! Carathéodory class, so `a_n = c_{n-1} / n`. For R1, `(z f')' = p` gives
//! `a_n = c_{n-1} / n^2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caratheodory::{h3_schur_r, h3_schur_r1, schur_to_c, CaratheodoryCoeffs, SchurParams};
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("expected a series normalized as z + O(z^2), found a0 = {a0}, a1 = {a1}")]
    NotNormalized { a0: Complex64, a1: Complex64 },
    #[error("truncation order {got} is below the required {need}")]
    OrderTooSmall { got: usize, need: usize },
    #[error("Hankel determinant of size {q} must satisfy 1 <= q <= 4")]
    HankelSize { q: usize },
    #[error("Hankel determinant H_{q}({n}) needs coefficients up to index {need}, only {have} supplied")]
    HankelCoefficients { q: usize, n: usize, need: usize, have: usize },
}

/// The two function classes whose inverse coefficients are studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionClass {
    /// `Re f'(z) > 0`.
    #[serde(rename = "R")]
    R,
    /// `Re (z f'(z))' > 0`.
    #[serde(rename = "R1")]
    R1,
}

impl FunctionClass {
    /// The integer that clears denominators of `H3(1)(f^{-1})` as a
    /// polynomial in `c1..c4`.
    pub fn normalizer(self) -> i64 {
        match self {
            FunctionClass::R => 8640,
            FunctionClass::R1 => 74_649_600,
        }
    }

    /// The sharp bound on `|H3(1)(f^{-1})|` as a reduced fraction.
    pub fn sharp_bound(self) -> (i64, i64) {
        match self {
            FunctionClass::R => (44, 135),
            FunctionClass::R1 => (1, 64),
        }
    }

    pub fn sharp_bound_f64(self) -> f64 {
        let (n, d) = self.sharp_bound();
        n as f64 / d as f64
    }

    pub fn label(self) -> &'static str {
        match self {
            FunctionClass::R => "R",
            FunctionClass::R1 => "R1",
        }
    }

    pub fn coeffs_from_caratheodory(self, c: &CaratheodoryCoeffs) -> ClassCoeffs {
        match self {
            FunctionClass::R => from_caratheodory_r(c),
            FunctionClass::R1 => from_caratheodory_r1(c),
        }
    }

    pub fn h3_closed_form(self, c: &CaratheodoryCoeffs) -> Complex64 {
        match self {
            FunctionClass::R => h3_inverse_r(c),
            FunctionClass::R1 => h3_inverse_r1(c),
        }
    }

    pub fn h3_schur(self, t: &SchurParams) -> Complex64 {
        match self {
            FunctionClass::R => h3_schur_r(t),
            FunctionClass::R1 => h3_schur_r1(t),
        }
    }

    /// `H3(1)(f^{-1})` through the coefficient map and the closed-form
    /// inverse coefficients.
    pub fn h3_pipeline(self, t: &SchurParams) -> Complex64 {
        inverse_coeffs(&self.coeffs_from_caratheodory(&schur_to_c(t))).h3()
    }
}

impl std::str::FromStr for FunctionClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(Self::R),
            "r1" => Ok(Self::R1),
            other => Err(format!("unknown class `{other}` (expected r or r1)")),
        }
    }
}

/// Taylor coefficients `a2..a5` of `f` (with `a1 = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassCoeffs {
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
    pub a5: Complex64,
}

impl ClassCoeffs {
    pub fn new(a2: Complex64, a3: Complex64, a4: Complex64, a5: Complex64) -> Self {
        Self { a2, a3, a4, a5 }
    }

    pub fn real(a2: f64, a3: f64, a4: f64, a5: f64) -> Self {
        let r = |x| Complex64::new(x, 0.0);
        Self::new(r(a2), r(a3), r(a4), r(a5))
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a2, self.a3, self.a4, self.a5]
    }

    /// Reads `a2..a5` from a series normalized as `z + ...`.
    pub fn from_series(f: &TruncatedSeries) -> Result<Self, ClassError> {
        check_normalized(f)?;
        Ok(Self::new(f.coeff(2), f.coeff(3), f.coeff(4), f.coeff(5)))
    }

    /// `z + a2 z^2 + ... + a5 z^5` as a series of the given order (>= 5).
    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        let a = self.as_array();
        TruncatedSeries::from_fn(order.max(5), |n| match n {
            1 => Complex64::new(1.0, 0.0),
            2..=5 => a[n - 2],
            _ => Complex64::default(),
        })
    }
}

/// Taylor coefficients `A2..A5` of `f^{-1}` (with `A1 = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InverseCoeffs {
    #[serde(rename = "A2")]
    pub a2: Complex64,
    #[serde(rename = "A3")]
    pub a3: Complex64,
    #[serde(rename = "A4")]
    pub a4: Complex64,
    #[serde(rename = "A5")]
    pub a5: Complex64,
}

impl InverseCoeffs {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a2, self.a3, self.a4, self.a5]
    }

    pub fn h3(&self) -> Complex64 {
        h3(self.a2, self.a3, self.a4, self.a5)
    }
}

fn check_normalized(f: &TruncatedSeries) -> Result<(), ClassError> {
    let (a0, a1) = (f.coeff(0), f.coeff(1));
    if a0.norm() > crate::series::NORMALIZATION_TOL || (a1 - 1.0).norm() > crate::series::NORMALIZATION_TOL {
        return Err(ClassError::NotNormalized { a0, a1 });
    }
    Ok(())
}

pub fn from_caratheodory_r(c: &CaratheodoryCoeffs) -> ClassCoeffs {
    ClassCoeffs::new(c.c1 / 2.0, c.c2 / 3.0, c.c3 / 4.0, c.c4 / 5.0)
}

pub fn from_caratheodory_r1(c: &CaratheodoryCoeffs) -> ClassCoeffs {
    ClassCoeffs::new(c.c1 / 4.0, c.c2 / 9.0, c.c3 / 16.0, c.c4 / 25.0)
}

/// Closed-form inverse coefficients `A2..A5` in terms of `a2..a5`.
pub fn inverse_coeffs(a: &ClassCoeffs) -> InverseCoeffs {
    let ClassCoeffs { a2, a3, a4, a5 } = *a;
    InverseCoeffs {
        a2: -a2,
        a3: 2.0 * a2 * a2 - a3,
        a4: 5.0 * a2 * a3 - 5.0 * a2.powu(3) - a4,
        a5: 14.0 * a2.powu(4) - 21.0 * a3 * a2 * a2 + 6.0 * a2 * a4 + 3.0 * a3 * a3 - a5,
    }
}

/// Inverse coefficients obtained by numerically reverting the series
/// `z + a2 z^2 + ... + a5 z^5`.
pub fn inverse_coeffs_by_reversion(a: &ClassCoeffs) -> InverseCoeffs {
    let inv = a.to_series(5).revert().expect("z + O(z^2) is always revertible");
    InverseCoeffs { a2: inv.coeff(2), a3: inv.coeff(3), a4: inv.coeff(4), a5: inv.coeff(5) }
}

/// `H3(1)` of a sequence with leading coefficient 1.
pub fn h3(x2: Complex64, x3: Complex64, x4: Complex64, x5: Complex64) -> Complex64 {
    2.0 * x2 * x3 * x4 - x3.powu(3) - x4 * x4 + x3 * x5 - x2 * x2 * x5
}

/// Determinant of the `q x q` Hankel matrix `[a_{n+i+j}]`, where
/// `coeffs[k]` is the coefficient `a_k`.
pub fn hankel(q: usize, n: usize, coeffs: &[Complex64]) -> Result<Complex64, ClassError> {
    if q == 0 || q > 4 {
        return Err(ClassError::HankelSize { q });
    }
    let need = n + 2 * q - 2;
    if coeffs.len() <= need {
        return Err(ClassError::HankelCoefficients { q, n, need, have: coeffs.len() });
    }
    let m: Vec<Vec<Complex64>> = (0..q).map(|i| (0..q).map(|j| coeffs[n + i + j]).collect()).collect();
    Ok(det(&m))
}

fn det(m: &[Vec<Complex64>]) -> Complex64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        k => (0..k)
            .map(|col| {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][col] * det(&minor)
            })
            .sum(),
    }
}

/// `H3(1)(f^{-1})` for `f` in R as a polynomial in `c1..c4`.
pub fn h3_inverse_r(c: &CaratheodoryCoeffs) -> Complex64 {
    let CaratheodoryCoeffs { c1, c2, c3, c4 } = *c;
    let c1s = c1 * c1;
    (-540.0 * c1s * c1s * c2 - 432.0 * c1s * c4 + 720.0 * c1s * c2 * c2 + 576.0 * c2 * c4 - 540.0 * c3 * c3
        + 720.0 * c1 * c2 * c3
        + 135.0 * c1s.powu(3)
        - 640.0 * c2.powu(3))
        / 8640.0
}

/// `H3(1)(f^{-1})` for `f` in R1 as a polynomial in `c1..c4`.
pub fn h3_inverse_r1(c: &CaratheodoryCoeffs) -> Complex64 {
    let CaratheodoryCoeffs { c1, c2, c3, c4 } = *c;
    let c1s = c1 * c1;
    (-97200.0 * c1s * c1s * c2 - 186_624.0 * c1s * c4 + 172_800.0 * c1s * c2 * c2 + 331_776.0 * c2 * c4
        - 291_600.0 * c3 * c3
        + 18225.0 * c1s.powu(3)
        + 259_200.0 * c1 * c2 * c3
        - 204_800.0 * c2.powu(3))
        / 74_649_600.0
}

/// `H3(1)(f^{-1})` where `f^{-1}` is computed by series reversion.
pub fn h3_of_inverse_series(f: &TruncatedSeries) -> Result<Complex64, ClassError> {
    check_normalized(f)?;
    if f.order() < 5 {
        return Err(ClassError::OrderTooSmall { got: f.order(), need: 5 });
    }
    let inv = f.truncate(5).revert()?;
    hankel(3, 1, inv.coeffs())
}

/// `f(z) = z + z log(g(z)/z) - ∫_0^z log(g(s)/s) ds`; maps starlike `g` to R.
pub fn r_from_starlike(g: &TruncatedSeries) -> Result<TruncatedSeries, ClassError> {
    check_normalized(g)?;
    let n = g.order();
    let log_ratio = g.shift_down(1)?.log()?;
    let z_log = log_ratio.truncate(n).shift_up(1);
    let integral = log_ratio.integrate();
    Ok(&(&TruncatedSeries::identity(n) + &z_log) - &integral)
}

/// `g(z) = z exp(∫_0^z (f'(s) - 1)/s ds)`; the inverse of [`r_from_starlike`].
pub fn starlike_from_r(f: &TruncatedSeries) -> Result<TruncatedSeries, ClassError> {
    check_normalized(f)?;
    let n = f.order();
    if n < 2 {
        return Ok(TruncatedSeries::identity(n));
    }
    let fp_minus_one = &f.derivative() - &TruncatedSeries::one(n - 1);
    let exponent = fp_minus_one.shift_down(1)?.integrate();
    let e = exponent.exp()?;
    Ok(TruncatedSeries::from_fn(n, |k| if k == 0 { Complex64::default() } else { e.coeff(k - 1) }))
}

/// `-z + 2 artanh z = z + (2/3) z^3 + (2/5) z^5 + ...`, built as
/// `log(1+z) - log(1-z) - z`.
pub fn extremal_f0_arctanh(order: usize) -> Result<TruncatedSeries, ClassError> {
    if order < 5 {
        return Err(ClassError::OrderTooSmall { got: order, need: 5 });
    }
    let z = TruncatedSeries::identity(order);
    let one = TruncatedSeries::one(order);
    let two_artanh = &(&one + &z).log()? - &(&one - &z).log()?;
    Ok(&two_artanh - &z)
}

/// The R1 extremal function with `(z f')' = (1 + z^3)/(1 - z^3)`:
/// `z + z^4/8 + 2 z^7/49 + ...`.
pub fn extremal_fstar_r1(order: usize) -> Result<TruncatedSeries, ClassError> {
    if order < 7 {
        return Err(ClassError::OrderTooSmall { got: order, need: 7 });
    }
    let one = TruncatedSeries::one(order);
    let z3 = TruncatedSeries::identity(order).shift_up(2);
    let p = (&one + &z3).div(&(&one - &z3))?;
    let z_fprime = p.integrate();
    let fprime = z_fprime.shift_down(1)?;
    Ok(fprime.integrate().truncate(order))
}

/// `-z - 2 e^{iθ} log(1 - e^{-iθ} z)`, for which `|a_n| = 2/n` for every `n`.
pub fn extremal_f0_theta(theta: f64, order: usize) -> Result<TruncatedSeries, ClassError> {
    if order < 2 {
        return Err(ClassError::OrderTooSmall { got: order, need: 2 });
    }
    let rot = Complex64::from_polar(1.0, -theta);
    let inner = &TruncatedSeries::one(order) - &TruncatedSeries::identity(order).scale(rot);
    let f = inner.log()?.scale(-2.0 * rot.conj());
    Ok(&f - &TruncatedSeries::identity(order))
}
