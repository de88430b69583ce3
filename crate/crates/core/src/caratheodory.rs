//! Carathéodory coefficients and their Schur-parameter description.
//!
//! Every `p(z) = 1 + c1 z + c2 z^2 + ...` with positive real part on the unit
//! disk has its first four coefficients given by [`schur_to_c`] for some
//! `t1..t4` in the closed unit disk. This module also provides an independent
//! generator from finite Herglotz measures, the Toeplitz positivity check,
//! a reproducible sampler, and the expanded third Hankel determinants of
//! inverse functions written directly in Schur parameters.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed on `|t_k| <= 1` and on the Herglotz invariants.
pub const DISK_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CaratheodoryError {
    #[error("Schur parameter t{index} = {value} lies outside the closed unit disk")]
    OutsideDisk { index: usize, value: Complex64 },
    #[error("Herglotz weights must be nonnegative and sum to 1 (sum = {0})")]
    BadWeights(f64),
    #[error("Herglotz point {0} is not on the unit circle")]
    NotUnimodular(Complex64),
    #[error("Herglotz measure needs as many weights as points and at least one atom")]
    AtomMismatch,
    #[error("Toeplitz order must lie in 1..=5, got {0}")]
    ToeplitzOrder(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurParams {
    t: [Complex64; 4],
}

impl SchurParams {
    pub fn new(t: [Complex64; 4]) -> Result<Self, CaratheodoryError> {
        for (k, v) in t.iter().enumerate() {
            if v.norm() > 1.0 + DISK_TOL {
                return Err(CaratheodoryError::OutsideDisk { index: k + 1, value: *v });
            }
        }
        Ok(Self { t })
    }

    /// Real parameters; convenient for boundary points such as `(0, 1, 0, 0)`.
    pub fn real(t1: f64, t2: f64, t3: f64, t4: f64) -> Result<Self, CaratheodoryError> {
        Self::new([t1, t2, t3, t4].map(|x| Complex64::new(x, 0.0)))
    }

    pub fn zero() -> Self {
        Self { t: [Complex64::default(); 4] }
    }

    pub fn values(&self) -> [Complex64; 4] {
        self.t
    }

    pub fn t1(&self) -> Complex64 {
        self.t[0]
    }

    pub fn t2(&self) -> Complex64 {
        self.t[1]
    }

    pub fn t3(&self) -> Complex64 {
        self.t[2]
    }

    pub fn t4(&self) -> Complex64 {
        self.t[3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryCoeffs {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub c4: Complex64,
}

impl CaratheodoryCoeffs {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64, c4: Complex64) -> Self {
        Self { c1, c2, c3, c4 }
    }

    pub fn real(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        let r = |x| Complex64::new(x, 0.0);
        Self::new(r(c1), r(c2), r(c3), r(c4))
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

/// Coefficients `c1..c4` from Schur parameters.
pub fn schur_to_c(t: &SchurParams) -> CaratheodoryCoeffs {
    let [t1, t2, t3, t4] = t.t;
    let w1 = 1.0 - t1.norm_sqr();
    let w2 = 1.0 - t2.norm_sqr();
    let w3 = 1.0 - t3.norm_sqr();
    let t1b = t1.conj();
    let t2b = t2.conj();

    let c1 = 2.0 * t1;
    let c2 = 2.0 * t1 * t1 + 2.0 * w1 * t2;
    let c3 = 2.0 * t1.powu(3) + 4.0 * w1 * t1 * t2 - 2.0 * w1 * t1b * t2 * t2 + 2.0 * w1 * w2 * t3;
    let c4 = 2.0 * t1.powu(4)
        + 2.0 * w1 * (3.0 * t1 * t1 + t1b * t1b * t2 * t2 - 3.0 * t1.norm_sqr() * t2 + t2) * t2
        + 2.0 * w1 * w2 * (2.0 * t1 - 2.0 * t1b * t2 - t2b * t3) * t3
        + 2.0 * w1 * w2 * w3 * t4;
    CaratheodoryCoeffs { c1, c2, c3, c4 }
}

/// A probability measure on the unit circle with finitely many atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzAtoms {
    weights: Vec<f64>,
    points: Vec<Complex64>,
}

impl HerglotzAtoms {
    pub fn new(weights: Vec<f64>, points: Vec<Complex64>) -> Result<Self, CaratheodoryError> {
        if weights.len() != points.len() || weights.is_empty() {
            return Err(CaratheodoryError::AtomMismatch);
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0) || (sum - 1.0).abs() > DISK_TOL {
            return Err(CaratheodoryError::BadWeights(sum));
        }
        if let Some(&x) = points.iter().find(|x| (x.norm() - 1.0).abs() > DISK_TOL) {
            return Err(CaratheodoryError::NotUnimodular(x));
        }
        Ok(Self { weights, points })
    }

    /// Atoms at the given angles (radians).
    pub fn from_angles(weights: Vec<f64>, angles: &[f64]) -> Result<Self, CaratheodoryError> {
        Self::new(weights, angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `c_n = 2 Σ λ_k x_k^n` for any `n >= 1`.
    pub fn moment(&self, n: u32) -> Complex64 {
        2.0 * self.weights.iter().zip(&self.points).map(|(&w, x)| w * x.powu(n)).sum::<Complex64>()
    }
}

pub fn herglotz_c(atoms: &HerglotzAtoms) -> CaratheodoryCoeffs {
    CaratheodoryCoeffs::new(atoms.moment(1), atoms.moment(2), atoms.moment(3), atoms.moment(4))
}

/// Smallest eigenvalue of the Hermitian Toeplitz matrix `[c_{j-i}]` of the
/// given order, with `c_0 = 2` and `c_{-n} = conj(c_n)`.
pub fn toeplitz_min_eig(c: &CaratheodoryCoeffs, order: usize) -> Result<f64, CaratheodoryError> {
    if !(1..=5).contains(&order) {
        return Err(CaratheodoryError::ToeplitzOrder(order));
    }
    let seq = [Complex64::new(2.0, 0.0), c.c1, c.c2, c.c3, c.c4];
    let entry = |i: usize, j: usize| if j >= i { seq[j - i] } else { seq[i - j].conj() };
    // H = A + iB is Hermitian iff [[A, -B], [B, A]] is symmetric; the real
    // embedding has the same spectrum with every eigenvalue doubled.
    let n = order;
    let m = DMatrix::from_fn(2 * n, 2 * n, |r, s| {
        let h = entry(r % n, s % n);
        match (r < n, s < n) {
            (true, true) | (false, false) => h.re,
            (true, false) => -h.im,
            (false, true) => h.im,
        }
    });
    let eig = m.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    #[default]
    Uniform,
    /// Each modulus is snapped to 1 or 0 with probability 1/4 each.
    BoundaryBiased,
}

impl std::str::FromStr for SampleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "boundary-biased" => Ok(Self::BoundaryBiased),
            other => Err(format!("unknown sampling mode `{other}`")),
        }
    }
}

/// Generator keyed by `(seed, index)`; one ChaCha stream per index.
pub(crate) fn index_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn disk_point(rng: &mut impl Rng, mode: SampleMode) -> Complex64 {
    let mut r = rng.random::<f64>().sqrt();
    let angle = rng.random::<f64>() * std::f64::consts::TAU;
    if mode == SampleMode::BoundaryBiased {
        let pick = rng.random::<f64>();
        if pick < 0.25 {
            r = 1.0;
        } else if pick < 0.5 {
            r = 0.0;
        }
    }
    Complex64::from_polar(r, angle)
}

/// Deterministic pseudo-random point of the closed polydisk.
pub fn sample_schur(seed: u64, index: u64, mode: SampleMode) -> SchurParams {
    let mut rng = index_rng(seed, index);
    let t = std::array::from_fn(|_| disk_point(&mut rng, mode));
    SchurParams { t }
}

/// Random Herglotz measure with `n_atoms` atoms and Dirichlet(1,..,1) weights.
pub fn sample_herglotz(seed: u64, index: u64, n_atoms: usize) -> HerglotzAtoms {
    let mut rng = index_rng(seed, index);
    let n = n_atoms.max(1);
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let points = (0..n).map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)).collect();
    HerglotzAtoms { weights, points }
}

/// `H3(1)(f^{-1})` for `f` in R, expanded in Schur parameters.
pub fn h3_schur_r(t: &SchurParams) -> Complex64 {
    let [t1, t2, t3, t4] = t.t;
    let a1 = t1.norm_sqr();
    let w1 = 1.0 - a1;
    let w2 = 1.0 - t2.norm_sqr();
    let w3 = 1.0 - t3.norm_sqr();
    let t1b = t1.conj();

    let head = 208.0 * t1.powu(6)
        + 16.0
            * t2
            * w1
            * (-132.0 * t1.powu(4) + 6.0 * t1 * t1 * (50.0 - 41.0 * a1) * t2
                - 4.0 * (35.0 * a1 * a1 - 61.0 * a1 + 44.0) * t2 * t2
                + 9.0 * t1b * t1b * w1 * t2.powu(3));
    let lin = -288.0 * w1 * w2 * (w1 * t1b * t2 * t2 - 2.0 * (3.0 + a1) * t1 * t2 + 3.0 * t1.powu(3)) * t3;
    let quad = -144.0 * w1 * w2 * (w1 * (t2.norm_sqr() + 15.0) - 8.0 * t1 * t1 * t2.conj()) * t3 * t3;
    let free = 1152.0 * w1 * w2 * w3 * (2.0 * w1 * t2 - t1 * t1) * t4;
    (head + lin + quad + free) / 8640.0
}

/// `H3(1)(f^{-1})` for `f` in R1, expanded in Schur parameters.
pub fn h3_schur_r1(t: &SchurParams) -> Complex64 {
    let [t1, t2, t3, t4] = t.t;
    let a1 = t1.norm_sqr();
    let w1 = 1.0 - a1;
    let w2 = 1.0 - t2.norm_sqr();
    let w3 = 1.0 - t3.norm_sqr();
    let t1b = t1.conj();

    let head = -76288.0 * t1.powu(6)
        + 64.0
            * t2
            * w1
            * (-1740.0 * t1.powu(4) + 6.0 * t1 * t1 * (2986.0 - 1447.0 * a1) * t2
                - 4.0 * (1621.0 * a1 * a1 - 2189.0 * a1 + 1216.0) * t2 * t2
                + 2511.0 * t1b * t1b * w1 * t2.powu(3));
    let lin =
        -10368.0 * w1 * w2 * (31.0 * w1 * t1b * t2 * t2 - 2.0 * (3.0 + 13.0 * a1) * t1 * t2 + 57.0 * t1.powu(3)) * t3;
    let quad = -5184.0 * w1 * w2 * (w1 * (31.0 * t2.norm_sqr() + 225.0) - 32.0 * t1 * t1 * t2.conj()) * t3 * t3;
    let free = 165888.0 * w1 * w2 * w3 * (8.0 * w1 * t2 - t1 * t1) * t4;
    (head + lin + quad + free) / 74_649_600.0
}

/// Branch selector for R: nonnegative selects the `g` objective, negative `g1`.
pub fn branch_condition_r(t1: Complex64, t2: Complex64) -> f64 {
    let w1 = 1.0 - t1.norm_sqr();
    (w1 * (15.0 + t2.norm_sqr()) - 8.0 * t1 * t1 * t2.conj()).norm() - 8.0 * (2.0 * w1 * t2 - t1 * t1).norm()
}

/// Branch selector for R1: nonnegative selects the `h` objective, negative `h1`.
pub fn branch_condition_r1(t1: Complex64, t2: Complex64) -> f64 {
    let w1 = 1.0 - t1.norm_sqr();
    (w1 * (31.0 * t2.norm_sqr() + 225.0) - 32.0 * t1 * t1 * t2.conj()).norm() - 32.0 * (8.0 * w1 * t2 - t1 * t1).norm()
}
