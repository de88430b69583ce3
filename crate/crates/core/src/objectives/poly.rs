//! Exact integer polynomials in one and two variables.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use serde::Serialize;

/// Coefficient bound asserted after construction; products of the objective
/// coefficients stay far below `i64::MAX`.
pub const MAX_COEFF: i64 = 1 << 40;

/// `Σ c[i][j] s^i u^j` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BivariatePoly {
    /// `coeffs[i][j]` is the coefficient of `s^i u^j`.
    coeffs: Vec<Vec<i64>>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![vec![0]] }
    }

    pub fn constant(c: i64) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    pub fn monomial(c: i64, i: usize, j: usize) -> Self {
        let mut coeffs = vec![vec![0; j + 1]; i + 1];
        coeffs[i][j] = c;
        Self { coeffs }.trimmed()
    }

    pub fn s() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn u() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// Builds from `(i, j, coeff)` triples; repeated monomials accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, (i, j, c)| acc + Self::monomial(c, i, j))
    }

    fn from_grid(coeffs: Vec<Vec<i64>>) -> Self {
        Self { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        let du = self.coeffs.iter().map(|row| row.iter().rposition(|&c| c != 0).unwrap_or(0)).max().unwrap_or(0);
        for row in &mut self.coeffs {
            row.resize(du + 1, 0);
        }
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|row| row.iter().all(|&c| c == 0)) {
            self.coeffs.pop();
        }
        self
    }

    /// Degrees `(deg_s, deg_u)`; the zero polynomial reports `(0, 0)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.coeffs.len() - 1, self.coeffs[0].len() - 1)
    }

    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        self.coeffs.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c == 0)
    }

    /// Nonzero monomials as `(i, j, coeff)`, ordered by `i` then `j`.
    pub fn terms(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c != 0 {
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.coeffs.iter().flatten().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().flatten().map(|&c| (c as f64).abs()).sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| &acc * self)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_grid(self.coeffs.iter().map(|row| row.iter().map(|&c| c * k).collect()).collect())
    }

    /// Horner evaluation, outer loop over powers of `u`.
    pub fn eval(&self, s: f64, u: f64) -> f64 {
        let (ds, du) = self.degrees();
        let mut acc = 0.0;
        for j in (0..=du).rev() {
            let mut col = 0.0;
            for i in (0..=ds).rev() {
                col = col * s + self.coeffs[i][j] as f64;
            }
            acc = acc * u + col;
        }
        acc
    }

    /// Exact evaluation at rational points.
    pub fn eval_exact(&self, s: Ratio<i128>, u: Ratio<i128>) -> Ratio<i128> {
        let (ds, du) = self.degrees();
        let mut acc = Ratio::from_integer(0);
        for j in (0..=du).rev() {
            let mut col = Ratio::from_integer(0);
            for i in (0..=ds).rev() {
                col = col * s + Ratio::from_integer(self.coeffs[i][j] as i128);
            }
            acc = acc * u + col;
        }
        acc
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, s: i64, u: i64) -> i128 {
        let (s, u) = (s as i128, u as i128);
        self.coeffs[0].iter().enumerate().rev().fold(0i128, |acc, (j, _)| {
            acc * u + self.coeffs.iter().rev().fold(0i128, |col, row| col * s + row[j] as i128)
        })
    }

    pub fn d_ds(&self) -> Self {
        let (ds, _) = self.degrees();
        if ds == 0 {
            return Self::zero();
        }
        Self::from_grid((1..=ds).map(|i| self.coeffs[i].iter().map(|&c| c * i as i64).collect()).collect())
    }

    pub fn d_du(&self) -> Self {
        let (_, du) = self.degrees();
        if du == 0 {
            return Self::zero();
        }
        Self::from_grid(self.coeffs.iter().map(|row| (1..=du).map(|j| row[j] * j as i64).collect()).collect())
    }

    /// Formal gradient `(∂/∂s, ∂/∂u)`.
    pub fn grad(&self) -> (Self, Self) {
        (self.d_ds(), self.d_du())
    }

    /// Substitutes `s = value` (0 or 1 typically), leaving a polynomial in `u`.
    pub fn at_s(&self, value: i64) -> UniPoly {
        let (ds, du) = self.degrees();
        UniPoly::new((0..=du).map(|j| (0..=ds).rev().fold(0i64, |acc, i| acc * value + self.coeffs[i][j])).collect())
    }

    /// Substitutes `u = value`, leaving a polynomial in `s`.
    pub fn at_u(&self, value: i64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|row| row.iter().rev().fold(0i64, |acc, &c| acc * value + c)).collect())
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;

    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let ds = self.coeffs.len().max(rhs.coeffs.len());
        let du = self.coeffs[0].len().max(rhs.coeffs[0].len());
        BivariatePoly::from_grid(
            (0..ds).map(|i| (0..du).map(|j| self.coeff(i, j) + rhs.coeff(i, j)).collect()).collect(),
        )
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;

    fn neg(self) -> BivariatePoly {
        self.scaled(-1)
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;

    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        self + &(-rhs)
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;

    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let (as_, au) = self.degrees();
        let (bs, bu) = rhs.degrees();
        let mut out = vec![vec![0i64; au + bu + 1]; as_ + bs + 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (k, rrow) in rhs.coeffs.iter().enumerate() {
                    for (l, &b) in rrow.iter().enumerate() {
                        out[i + k][j + l] += a * b;
                    }
                }
            }
        }
        BivariatePoly::from_grid(out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BivariatePoly {
            type Output = BivariatePoly;

            fn $m(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$m(&rhs)
            }
        }

        impl $tr<i64> for BivariatePoly {
            type Output = BivariatePoly;

            fn $m(self, rhs: i64) -> BivariatePoly {
                (&self).$m(&BivariatePoly::constant(rhs))
            }
        }

        impl $tr<BivariatePoly> for i64 {
            type Output = BivariatePoly;

            fn $m(self, rhs: BivariatePoly) -> BivariatePoly {
                (&BivariatePoly::constant(self)).$m(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

/// `Σ c[k] x^k` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniPoly {
    coeffs: Vec<i64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as i64).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_trim() {
        let s = BivariatePoly::s();
        let u = BivariatePoly::u();
        let p = (s.clone() + 1) * (s.clone() - 1);
        assert_eq!(p.terms(), vec![(0, 0, -1), (2, 0, 1)]);
        let q = (u.clone() * 3) - (u * 3);
        assert!(q.is_zero());
        assert_eq!(q.degrees(), (0, 0));
        assert_eq!((s.clone() + 1).pow(3).eval_int(2, 0), 27);
    }

    #[test]
    fn gradient_and_restrictions() {
        // p = 3 s^2 u + 5 u^3 + 7
        let p = BivariatePoly::from_terms([(2, 1, 3), (0, 3, 5), (0, 0, 7)]);
        let (ps, pu) = p.grad();
        assert_eq!(ps.terms(), vec![(1, 1, 6)]);
        assert_eq!(pu.terms(), vec![(0, 2, 15), (2, 0, 3)]);
        assert_eq!(p.at_s(0).coeffs(), &[7, 0, 0, 5]);
        assert_eq!(p.at_s(1).coeffs(), &[7, 3, 0, 5]);
        assert_eq!(p.at_u(1).coeffs(), &[12, 0, 3]);
        assert_eq!(p.at_u(0).coeffs(), &[7]);
        assert!(BivariatePoly::constant(4).d_ds().is_zero());
    }

    #[test]
    fn univariate_basics() {
        let q = UniPoly::new(vec![1, -3, 0, 2, 0, 0]);
        assert_eq!(q.degree(), 3);
        assert_eq!(q.derivative().coeffs(), &[-3, 0, 6]);
        assert_eq!(q.eval(2.0), 11.0);
        assert!(UniPoly::new(vec![]).is_constant());
    }
}
