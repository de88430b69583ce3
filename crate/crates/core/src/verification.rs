//! End-to-end reproduction of the two sharp bounds.
//!
//! A report bundles the branch maxima, the assembled bound, the value on the
//! extremal function, Monte Carlo sampling over the Schur polydisk and a
//! cross-check of four independent ways of computing `H3(1)(f^{-1})`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::caratheodory::{sample_herglotz, sample_schur, schur_to_c, SampleMode, SchurParams};
use crate::classes::{
    extremal_f0_arctanh, extremal_f0_theta, extremal_fstar_r1, h3_of_inverse_series, inverse_coeffs_by_reversion,
    ClassError, FunctionClass,
};
use crate::exec::Exec;
use crate::objectives::{envelope, Objective};
use crate::optimizer::{maximize_on_box_with, BoxMaxResult, OptimizeError, PointKind, MIN_GRID};

pub const MIN_SAMPLES: u64 = 100_000;
pub const MIN_CONSISTENCY: usize = 1_000;
/// Absolute slack on `|normalizer * H3| <= envelope`.
pub const ENVELOPE_TOL: f64 = 1e-9;
pub const EXTREMAL_TOL: f64 = 1e-12;
pub const CONSISTENCY_TOL: f64 = 1e-10;
/// Floor of the denominator in relative discrepancies.
pub const RELATIVE_FLOOR: f64 = 1e-6;
/// Series order used for extremal functions.
pub const EXTREMAL_ORDER: usize = 30;

/// Boundary points where the bounds are attained; always sampled.
pub const ANCHORS: [[f64; 4]; 2] = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("grid_n must be at least {MIN_GRID}, got {0}")]
    Grid(usize),
    #[error("n_samples must be at least {MIN_SAMPLES}, got {0}")]
    Samples(u64),
    #[error("consistency sample count must be at least {MIN_CONSISTENCY}, got {0}")]
    Consistency(usize),
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Class(#[from] ClassError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub grid_n: usize,
    pub n_samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub mode: SampleMode,
    pub consistency_n: usize,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid_n: 128,
            n_samples: 1_000_000,
            seed: 42,
            tol: 1e-10,
            mode: SampleMode::BoundaryBiased,
            consistency_n: 10_000,
            exec: Exec::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.grid_n < MIN_GRID {
            return Err(VerifyError::Grid(self.grid_n));
        }
        if self.n_samples < MIN_SAMPLES {
            return Err(VerifyError::Samples(self.n_samples));
        }
        if self.consistency_n < MIN_CONSISTENCY {
            return Err(VerifyError::Consistency(self.consistency_n));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(VerifyError::Tolerance(self.tol));
        }
        Ok(())
    }
}

/// `|H3(1)(f^{-1})|` for the class function with Schur parameters `t`.
///
/// Uses the Schur expansion: the envelope is a termwise bound of it, and
/// going through `c` costs about a hundred ulps near the equality cases.
pub fn sample_value(class: FunctionClass, t: &SchurParams) -> f64 {
    class.h3_schur(t).norm()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingSummary {
    /// Random draws; the anchors come on top.
    pub n: u64,
    pub seed: u64,
    pub mode: SampleMode,
    pub anchors: usize,
    pub sup: f64,
    pub argsup: SchurParams,
    /// Draw index of the supremum; `None` when an anchor attains it.
    pub argsup_index: Option<u64>,
    pub violations: u64,
    pub envelope_violations: u64,
}

#[derive(Clone, Copy)]
struct Acc {
    sup: f64,
    arg: Option<(SchurParams, Option<u64>)>,
    violations: u64,
    envelope_violations: u64,
}

impl Acc {
    const EMPTY: Acc = Acc { sup: f64::NEG_INFINITY, arg: None, violations: 0, envelope_violations: 0 };

    fn push(mut self, class: FunctionClass, t: SchurParams, index: Option<u64>, tol: f64) -> Acc {
        let h = sample_value(class, &t);
        if h > class.sharp_bound_f64() + tol {
            self.violations += 1;
        }
        let scaled = class.normalizer() as f64 * h;
        if scaled > envelope(class, t.t1().norm(), t.t2().norm()) + ENVELOPE_TOL {
            self.envelope_violations += 1;
        }
        if h > self.sup {
            self.sup = h;
            self.arg = Some((t, index));
        }
        self
    }

    /// Left operand wins ties, so earlier indices are reported.
    fn merge(self, other: Acc) -> Acc {
        let (sup, arg) = if other.sup > self.sup { (other.sup, other.arg) } else { (self.sup, self.arg) };
        Acc {
            sup,
            arg,
            violations: self.violations + other.violations,
            envelope_violations: self.envelope_violations + other.envelope_violations,
        }
    }
}

/// Evaluates the anchors and `n` seeded draws; the result does not depend
/// on `exec`.
pub fn sample_class(
    class: FunctionClass,
    n: u64,
    seed: u64,
    mode: SampleMode,
    tol: f64,
    exec: Exec,
) -> SamplingSummary {
    let anchors = ANCHORS.iter().fold(Acc::EMPTY, |acc, a| {
        let t = SchurParams::real(a[0], a[1], a[2], a[3]).expect("anchors lie in the closed disk");
        acc.push(class, t, None, tol)
    });
    let draws = exec.fold_chunks(
        n,
        || Acc::EMPTY,
        |acc, i| acc.push(class, sample_schur(seed, i, mode), Some(i), tol),
        Acc::merge,
    );
    let acc = anchors.merge(draws);
    let (argsup, argsup_index) = acc.arg.expect("anchors are always evaluated");
    SamplingSummary {
        n,
        seed,
        mode,
        anchors: ANCHORS.len(),
        sup: acc.sup,
        argsup,
        argsup_index,
        violations: acc.violations,
        envelope_violations: acc.envelope_violations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRow {
    pub abs_t1: f64,
    pub abs_t2: f64,
    pub abs_h3: f64,
}

/// Per-draw rows for the same draws as [`sample_class`] (anchors excluded).
pub fn sample_rows(class: FunctionClass, n: u64, seed: u64, mode: SampleMode, exec: Exec) -> Vec<SampleRow> {
    exec.map(n as usize, |i| {
        let t = sample_schur(seed, i as u64, mode);
        SampleRow { abs_t1: t.t1().norm(), abs_t2: t.t2().norm(), abs_h3: sample_value(class, &t) }
    })
}

fn rel_err(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(RELATIVE_FLOOR)
}

/// Largest pairwise relative discrepancy between the Schur expansion, the
/// closed form in `c`, the closed-form inverse coefficients and series
/// reversion, over the given parameters.
pub fn consistency_on(class: FunctionClass, params: &[SchurParams]) -> f64 {
    params.iter().map(|t| consistency_at(class, t)).fold(0.0, f64::max)
}

fn consistency_at(class: FunctionClass, t: &SchurParams) -> f64 {
    let c = schur_to_c(t);
    let a = class.coeffs_from_caratheodory(&c);
    let paths =
        [class.h3_schur(t), class.h3_closed_form(&c), class.h3_pipeline(t), inverse_coeffs_by_reversion(&a).h3()];
    let mut worst = 0.0f64;
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            worst = worst.max(rel_err(paths[i], paths[j]));
        }
    }
    worst
}

/// [`consistency_on`] over `n` uniform draws from stream `seed`.
pub fn consistency_suite(class: FunctionClass, n: usize, seed: u64, exec: Exec) -> f64 {
    exec.map(n, |i| consistency_at(class, &sample_schur(seed, i as u64, SampleMode::Uniform)))
        .into_iter()
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientBoundReport {
    /// Largest `| |a_n| - 2/n |` over the rotation family.
    pub theta_max_dev: f64,
    /// Largest `|a_n| - 2/n` over sampled measures (non-positive when sound).
    pub herglotz_max_excess: f64,
    /// Largest `| |a_n| - 2/n |` over single-atom measures.
    pub single_atom_max_dev: f64,
    pub passed: bool,
}

const COEFF_N: usize = 30;
const HERGLOTZ_FUNCTIONS: u64 = 1000;

/// Checks `|a_n| <= 2/n` for `n = 2..=30` on R: equality along the rotations
/// of the extremal function and on single-atom measures, inequality on
/// random finite measures (`a_n = c_{n-1}/n`).
pub fn coefficient_bound_check(n_thetas: usize, seed: u64) -> Result<CoefficientBoundReport, ClassError> {
    let n_thetas = n_thetas.max(1);
    let mut theta_max_dev = 0.0f64;
    for k in 0..n_thetas {
        let theta = std::f64::consts::TAU * k as f64 / n_thetas as f64;
        let f = extremal_f0_theta(theta, COEFF_N)?;
        for n in 2..=COEFF_N {
            theta_max_dev = theta_max_dev.max((f.coeff(n).norm() - 2.0 / n as f64).abs());
        }
    }
    let mut herglotz_max_excess = f64::NEG_INFINITY;
    let mut single_atom_max_dev = 0.0f64;
    for i in 0..HERGLOTZ_FUNCTIONS {
        let atoms = 1 + (i % 8) as usize;
        let m = sample_herglotz(seed, i, atoms);
        for n in 2..=COEFF_N {
            let an = m.moment(n as u32 - 1).norm() / n as f64;
            herglotz_max_excess = herglotz_max_excess.max(an - 2.0 / n as f64);
            if atoms == 1 {
                single_atom_max_dev = single_atom_max_dev.max((an - 2.0 / n as f64).abs());
            }
        }
    }
    let passed =
        theta_max_dev <= EXTREMAL_TOL && herglotz_max_excess <= EXTREMAL_TOL && single_atom_max_dev <= EXTREMAL_TOL;
    Ok(CoefficientBoundReport { theta_max_dev, herglotz_max_excess, single_atom_max_dev, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub class: FunctionClass,
    pub normalizer: i64,
    /// Reduced `max / normalizer`; `None` unless the maximum sits at a vertex.
    pub bound: Option<Bound>,
    pub bound_float: f64,
    pub branch_maxima: BTreeMap<Objective, BoxMaxResult>,
    pub extremal_value: f64,
    pub sampling: SamplingSummary,
    pub consistency_max_err: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl TheoremReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are always serializable")
    }
}

struct Expect {
    objective: Objective,
    value: f64,
    tol: f64,
    argmax: (f64, f64),
    argmax_tol: f64,
}

fn expectations(class: FunctionClass) -> [Expect; 2] {
    match class {
        FunctionClass::R => [
            Expect { objective: Objective::G, value: 2816.0, tol: 1e-9, argmax: (0.0, 1.0), argmax_tol: 0.0 },
            Expect { objective: Objective::G1, value: 2816.0, tol: 1e-9, argmax: (0.0, 1.0), argmax_tol: 0.0 },
        ],
        FunctionClass::R1 => [
            Expect { objective: Objective::H, value: 1166400.0, tol: 1e-9, argmax: (0.0, 0.0), argmax_tol: 0.0 },
            Expect {
                objective: Objective::H1,
                value: 588255.08,
                tol: 1.0,
                argmax: (0.08804, 0.66270),
                argmax_tol: 1e-3,
            },
        ],
    }
}

/// Largest branch maximum over `normalizer`, reduced exactly when the
/// maximum is an integer attained at a vertex.
pub fn assemble_bound<'a>(normalizer: i64, maxima: impl IntoIterator<Item = &'a BoxMaxResult>) -> (Option<Bound>, f64) {
    let Some(top) = maxima.into_iter().reduce(|a, b| if b.max_value > a.max_value { b } else { a }) else {
        return (None, f64::NAN);
    };
    let exact = top.argmax_kind == PointKind::Vertex && top.max_value.fract() == 0.0;
    let bound = exact.then(|| {
        let r = Ratio::new(top.max_value as i64, normalizer);
        Bound { num: *r.numer(), den: *r.denom() }
    });
    (bound, top.max_value / normalizer as f64)
}

/// `|H3(1)(f^{-1})|` of the class extremal function, via series reversion.
pub fn extremal_value(class: FunctionClass) -> Result<f64, ClassError> {
    let f = match class {
        FunctionClass::R => extremal_f0_arctanh(EXTREMAL_ORDER)?,
        FunctionClass::R1 => extremal_fstar_r1(EXTREMAL_ORDER)?,
    };
    Ok(h3_of_inverse_series(&f)?.norm())
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// Full reproduction for one class.
pub fn verify_class(class: FunctionClass, config: &VerifyConfig) -> Result<TheoremReport, VerifyError> {
    config.validate()?;
    let mut checks = Vec::new();
    let mut branch_maxima = BTreeMap::new();
    for e in expectations(class) {
        let r = maximize_on_box_with(e.objective.poly(), config.grid_n, config.tol, config.exec)?;
        let ok = (r.max_value - e.value).abs() <= e.tol
            && (r.argmax.0 - e.argmax.0).abs() <= e.argmax_tol
            && (r.argmax.1 - e.argmax.1).abs() <= e.argmax_tol;
        checks.push(check(
            format!("max {} = {}", e.objective, e.value),
            ok,
            format!("{} at ({}, {}) [{:?}]", r.max_value, r.argmax.0, r.argmax.1, r.argmax_kind),
        ));
        branch_maxima.insert(e.objective, r);
    }

    let normalizer = class.normalizer();
    let (bound, bound_float) = assemble_bound(normalizer, branch_maxima.values());
    let (num, den) = class.sharp_bound();
    checks.push(check(
        format!("bound = {num}/{den}"),
        bound == Some(Bound { num, den }),
        format!("{} / {normalizer}", bound_float * normalizer as f64),
    ));

    let sharp = class.sharp_bound_f64();
    let extremal_value = extremal_value(class)?;
    checks.push(check(
        "extremal function attains the bound",
        (extremal_value - sharp).abs() <= EXTREMAL_TOL,
        format!("|H3| = {extremal_value}"),
    ));

    let sampling = sample_class(class, config.n_samples, config.seed, config.mode, config.tol, config.exec);
    checks.push(check(
        "no sample exceeds the bound",
        sampling.violations == 0,
        format!("{} violations", sampling.violations),
    ));
    checks.push(check(
        "samples stay under the branch envelope",
        sampling.envelope_violations == 0,
        format!("{} violations", sampling.envelope_violations),
    ));
    checks.push(check(
        "sampled sup reaches 0.99 of the bound",
        sampling.sup >= 0.99 * sharp,
        format!("sup = {}", sampling.sup),
    ));
    checks.push(check(
        "sampled sup equals the bound",
        (sampling.sup - sharp).abs() <= EXTREMAL_TOL,
        format!("sup - bound = {:e}", sampling.sup - sharp),
    ));

    let consistency_max_err = consistency_suite(class, config.consistency_n, config.seed, config.exec);
    checks.push(check(
        "computation paths agree",
        consistency_max_err <= CONSISTENCY_TOL,
        format!("max relative discrepancy {consistency_max_err:e}"),
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(TheoremReport {
        class,
        normalizer,
        bound,
        bound_float,
        branch_maxima,
        extremal_value,
        sampling,
        consistency_max_err,
        checks,
        passed,
    })
}

/// `|H3(1)(f^{-1})| <= 44/135` on R.
pub fn verify_theorem1(config: &VerifyConfig) -> Result<TheoremReport, VerifyError> {
    verify_class(FunctionClass::R, config)
}

/// `|H3(1)(f^{-1})| <= 1/64` on R1.
pub fn verify_theorem2(config: &VerifyConfig) -> Result<TheoremReport, VerifyError> {
    verify_class(FunctionClass::R1, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig { n_samples: MIN_SAMPLES, consistency_n: MIN_CONSISTENCY, grid_n: MIN_GRID, ..Default::default() }
    }

    #[test]
    fn config_validation() {
        assert!(matches!(VerifyConfig { grid_n: 8, ..small() }.validate(), Err(VerifyError::Grid(8))));
        assert!(matches!(VerifyConfig { n_samples: 10, ..small() }.validate(), Err(VerifyError::Samples(10))));
        assert!(matches!(VerifyConfig { tol: f64::NAN, ..small() }.validate(), Err(VerifyError::Tolerance(_))));
        assert!(small().validate().is_ok());
    }

    #[test]
    fn anchors_attain_the_bounds() {
        for class in [FunctionClass::R, FunctionClass::R1] {
            let s = sample_class(class, 0, 1, SampleMode::Uniform, 1e-10, Exec::Sequential);
            assert!((s.sup - class.sharp_bound_f64()).abs() <= 1e-12, "{class:?}");
            assert_eq!(s.argsup_index, None);
            assert_eq!(s.violations, 0);
        }
    }

    #[test]
    fn sampling_is_independent_of_execution() {
        let a = sample_class(FunctionClass::R1, 20_000, 5, SampleMode::BoundaryBiased, 1e-10, Exec::Sequential);
        let b = sample_class(FunctionClass::R1, 20_000, 5, SampleMode::BoundaryBiased, 1e-10, Exec::default());
        assert_eq!(a, b);
        let rows = sample_rows(FunctionClass::R1, 100, 5, SampleMode::BoundaryBiased, Exec::default());
        assert_eq!(rows.len(), 100);
        assert!(rows.iter().all(|r| r.abs_h3 <= a.sup));
    }

    #[test]
    fn consistency_at_special_points() {
        assert_eq!(consistency_on(FunctionClass::R, &[SchurParams::zero()]), 0.0);
        let edge = SchurParams::real(1.0, 0.0, 0.0, 0.0).unwrap();
        for class in [FunctionClass::R, FunctionClass::R1] {
            assert!(consistency_on(class, &[edge]) <= 1e-12);
            assert!(consistency_suite(class, 2000, 3, Exec::default()) <= CONSISTENCY_TOL);
        }
    }

    #[test]
    fn coefficient_bounds() {
        let r = coefficient_bound_check(16, 42).unwrap();
        assert!(r.passed, "{r:?}");
        let f = extremal_f0_theta(0.0, 30).unwrap();
        assert!((f.coeff(5).norm() - 0.4).abs() < 1e-15);
        let f = extremal_f0_theta(std::f64::consts::FRAC_PI_3, 30).unwrap();
        assert!((f.coeff(7).norm() - 2.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn small_reports_pass() {
        let r1 = verify_theorem1(&small()).unwrap();
        assert!(r1.passed, "{:?}", r1.failed_checks().collect::<Vec<_>>());
        assert_eq!(r1.bound, Some(Bound { num: 44, den: 135 }));
        let r2 = verify_theorem2(&small()).unwrap();
        assert!(r2.passed, "{:?}", r2.failed_checks().collect::<Vec<_>>());
        assert_eq!(r2.bound, Some(Bound { num: 1, den: 64 }));
        assert_eq!(r2.branch_maxima[&Objective::H].max_value, 1166400.0);
    }
}
