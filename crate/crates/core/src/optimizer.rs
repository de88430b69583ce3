//! Global maximization of an integer bivariate polynomial on `[0,1]^2`.
//!
//! The box is handled in three passes: exact values at the four vertices,
//! univariate maximization along each side, and interior stationary points
//! found by multistart Newton on the gradient system.

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::objectives::{edge_restrict, BivariatePoly, Edge, UniPoly};

/// Smallest admissible seed lattice for [`maximize_on_box`].
pub const MIN_GRID: usize = 64;
/// Distance from the boundary below which a point is not interior.
pub const INTERIOR_MARGIN: f64 = 1e-7;
/// Stationary points closer than this are merged.
pub const DEDUP_DIST: f64 = 1e-6;
pub const MAX_NEWTON_ITERS: usize = 50;
/// Sample count of the sign-change scan along an edge.
pub const EDGE_SCAN: usize = 4096;
pub const EDGE_ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("seed lattice {0} is below the minimum {MIN_GRID}")]
    GridTooCoarse(usize),
    #[error("invalid interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Vertex,
    Edge,
    Interior,
    /// Outside the closed unit square (exploratory searches only).
    Exterior,
}

/// A candidate point with its objective value.
///
/// `residual` measures stationarity relative to the point's kind: 0 for a
/// vertex, the scaled derivative along the side for an edge point, and the
/// scaled gradient sup-norm otherwise. Scaling divides by the largest
/// absolute coefficient of the differentiated polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub s: f64,
    pub u: f64,
    pub value: f64,
    pub residual: f64,
    pub kind: PointKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxMaxResult {
    pub max_value: f64,
    pub argmax: (f64, f64),
    pub argmax_kind: PointKind,
    pub all_candidates: Vec<CriticalPoint>,
    /// Newton seeds dropped because of a singular Jacobian.
    pub abandoned_seeds: usize,
}

impl BoxMaxResult {
    pub fn interior(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.all_candidates.iter().filter(|c| c.kind == PointKind::Interior)
    }
}

/// Axis-aligned rectangle `[s_lo, s_hi] x [u_lo, u_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub s_lo: f64,
    pub s_hi: f64,
    pub u_lo: f64,
    pub u_hi: f64,
}

impl Region {
    pub const UNIT: Region = Region { s_lo: 0.0, s_hi: 1.0, u_lo: 0.0, u_hi: 1.0 };
    /// The unit square with a margin, for in-box searches.
    pub const PADDED: Region = Region { s_lo: -0.1, s_hi: 1.1, u_lo: -0.1, u_hi: 1.1 };

    pub fn contains(&self, s: f64, u: f64) -> bool {
        (self.s_lo..=self.s_hi).contains(&s) && (self.u_lo..=self.u_hi).contains(&u)
    }
}

pub fn classify(s: f64, u: f64) -> PointKind {
    let inside = |x: f64| x > INTERIOR_MARGIN && x < 1.0 - INTERIOR_MARGIN;
    let within = |x: f64| (-INTERIOR_MARGIN..=1.0 + INTERIOR_MARGIN).contains(&x);
    let at_end = |x: f64| x.abs() <= INTERIOR_MARGIN || (x - 1.0).abs() <= INTERIOR_MARGIN;
    if inside(s) && inside(u) {
        PointKind::Interior
    } else if !(within(s) && within(u)) {
        PointKind::Exterior
    } else if at_end(s) && at_end(u) {
        PointKind::Vertex
    } else {
        PointKind::Edge
    }
}

/// Stationary points of a gradient system `(ps, pu) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSearch {
    pub points: Vec<CriticalPoint>,
    pub abandoned_seeds: usize,
}

enum SeedOutcome {
    Converged(f64, f64, f64),
    Singular,
    Failed,
}

struct GradientSystem<'a> {
    ps: &'a BivariatePoly,
    pu: &'a BivariatePoly,
    pss: BivariatePoly,
    psu: BivariatePoly,
    pus: BivariatePoly,
    puu: BivariatePoly,
    scale: f64,
}

impl<'a> GradientSystem<'a> {
    fn new(ps: &'a BivariatePoly, pu: &'a BivariatePoly) -> Self {
        let (pss, psu) = ps.grad();
        let (pus, puu) = pu.grad();
        let scale = ps.max_abs_coeff().max(pu.max_abs_coeff()).max(1) as f64;
        Self { ps, pu, pss, psu, pus, puu, scale }
    }

    fn residual(&self, s: f64, u: f64) -> f64 {
        self.ps.eval(s, u).abs().max(self.pu.eval(s, u).abs()) / self.scale
    }

    fn step(&self, s: f64, u: f64, fs: f64, fu: f64) -> Option<(f64, f64)> {
        let (a, b) = (self.pss.eval(s, u), self.psu.eval(s, u));
        let (c, d) = (self.pus.eval(s, u), self.puu.eval(s, u));
        let det = a * d - b * c;
        if det == 0.0 || det.abs() <= 1e-14 * (a * d).abs().max((b * c).abs()) {
            return None;
        }
        Some(((d * fs - b * fu) / det, (a * fu - c * fs) / det))
    }

    /// A few extra steps past the threshold, keeping the best residual.
    fn polish(&self, mut s: f64, mut u: f64, mut res: f64) -> SeedOutcome {
        for _ in 0..3 {
            let (fs, fu) = (self.ps.eval(s, u), self.pu.eval(s, u));
            let Some((ds, du)) = self.step(s, u, fs, fu) else { break };
            let (ns, nu) = (s - ds, u - du);
            let nr = self.residual(ns, nu);
            if nr.is_nan() || nr >= res {
                break;
            }
            (s, u, res) = (ns, nu, nr);
        }
        SeedOutcome::Converged(s, u, res)
    }

    fn newton(&self, mut s: f64, mut u: f64, tol: f64) -> SeedOutcome {
        for _ in 0..=MAX_NEWTON_ITERS {
            let (fs, fu) = (self.ps.eval(s, u), self.pu.eval(s, u));
            let res = fs.abs().max(fu.abs()) / self.scale;
            if !res.is_finite() {
                return SeedOutcome::Failed;
            }
            if res <= tol {
                return self.polish(s, u, res);
            }
            let Some((ds, du)) = self.step(s, u, fs, fu) else {
                return SeedOutcome::Singular;
            };
            s -= ds;
            u -= du;
            if !(s.is_finite() && u.is_finite()) || s.abs() > 1e6 || u.abs() > 1e6 {
                return SeedOutcome::Failed;
            }
        }
        SeedOutcome::Failed
    }
}

/// Multistart Newton from a `grid_n x grid_n` cell-centred seed lattice over
/// `region`. Converged points inside `region` are merged within
/// [`DEDUP_DIST`] and returned in lexicographic order. `value` is left at 0;
/// callers that know the primitive fill it in.
pub fn critical_points(
    ps: &BivariatePoly,
    pu: &BivariatePoly,
    region: Region,
    grid_n: usize,
    tol: f64,
    exec: Exec,
) -> CriticalSearch {
    let sys = GradientSystem::new(ps, pu);
    let n = grid_n.max(1);
    let outcomes = exec.map(n * n, |k| {
        let (i, j) = (k / n, k % n);
        let s = region.s_lo + (i as f64 + 0.5) / n as f64 * (region.s_hi - region.s_lo);
        let u = region.u_lo + (j as f64 + 0.5) / n as f64 * (region.u_hi - region.u_lo);
        sys.newton(s, u, tol)
    });

    let mut abandoned = 0;
    let mut found: Vec<(f64, f64, f64)> = Vec::new();
    for o in outcomes {
        match o {
            SeedOutcome::Converged(s, u, r) if region.contains(s, u) => found.push((s, u, r)),
            SeedOutcome::Singular => abandoned += 1,
            _ => {}
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut points: Vec<CriticalPoint> = Vec::new();
    for (s, u, _) in found {
        if points.iter().any(|p| (p.s - s).hypot(p.u - u) <= DEDUP_DIST) {
            continue;
        }
        points.push(CriticalPoint { s, u, value: 0.0, residual: sys.residual(s, u), kind: classify(s, u) });
    }
    CriticalSearch { points, abandoned_seeds: abandoned }
}

/// Stationary points of `p` itself, with values filled in.
pub fn stationary_points(p: &BivariatePoly, region: Region, grid_n: usize, tol: f64, exec: Exec) -> CriticalSearch {
    let (ps, pu) = p.grad();
    let mut search = critical_points(&ps, &pu, region, grid_n, tol, exec);
    for pt in &mut search.points {
        pt.value = p.eval(pt.s, pt.u);
    }
    search
}

/// Result of maximizing a univariate polynomial on an interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeMax {
    pub argmax: f64,
    pub value: f64,
    /// Roots of the derivative strictly inside the interval, ascending.
    pub stationary: Vec<f64>,
}

fn refine_root(dq: &UniPoly, ddq: &UniPoly, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = dq.eval(lo);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let fm = dq.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON_ITERS {
        let d = ddq.eval(x);
        if d == 0.0 {
            break;
        }
        let step = dq.eval(x) / d;
        let next = x - step;
        if !(lo..=hi).contains(&next) {
            break;
        }
        x = next;
        if step.abs() <= EDGE_ROOT_TOL {
            return x;
        }
    }
    // Newton left the bracket: finish by bisection
    while hi - lo > EDGE_ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = dq.eval(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximum of `q` over `[lo, hi]` from the endpoints and the sign changes of
/// `q'` on an [`EDGE_SCAN`]-point scan. Ties go to the smaller abscissa.
pub fn edge_maximize(q: &UniPoly, lo: f64, hi: f64) -> Result<EdgeMax, OptimizeError> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(OptimizeError::EmptyInterval { lo, hi });
    }
    let dq = q.derivative();
    let ddq = dq.derivative();
    let mut stationary = Vec::new();
    if !dq.is_constant() {
        let x_at = |k: usize| lo + (hi - lo) * k as f64 / EDGE_SCAN as f64;
        let mut prev = dq.eval(lo);
        for k in 1..=EDGE_SCAN {
            let x = x_at(k);
            let cur = dq.eval(x);
            if cur == 0.0 && k < EDGE_SCAN {
                stationary.push(x);
            } else if prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0) {
                stationary.push(refine_root(&dq, &ddq, x_at(k - 1), x));
            }
            prev = cur;
        }
    }
    let mut best = (lo, q.eval(lo));
    for x in stationary.iter().copied().chain([hi]) {
        let v = q.eval(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(EdgeMax { argmax: best.0, value: best.1, stationary })
}

fn better(a: &CriticalPoint, b: &CriticalPoint) -> bool {
    use std::cmp::Ordering::*;
    match a.value.total_cmp(&b.value) {
        Greater => true,
        Less => false,
        Equal => match a.s.total_cmp(&b.s).then(a.u.total_cmp(&b.u)) {
            Less => true,
            Greater => false,
            Equal => a.kind < b.kind,
        },
    }
}

/// Maximizes `p` over the unit square: vertices, stationary points of the
/// four side restrictions, and interior stationary points from a
/// `grid_n x grid_n` Newton lattice with convergence threshold `tol`.
pub fn maximize_on_box(p: &BivariatePoly, grid_n: usize, tol: f64) -> Result<BoxMaxResult, OptimizeError> {
    maximize_on_box_with(p, grid_n, tol, Exec::default())
}

pub fn maximize_on_box_with(
    p: &BivariatePoly,
    grid_n: usize,
    tol: f64,
    exec: Exec,
) -> Result<BoxMaxResult, OptimizeError> {
    if grid_n < MIN_GRID {
        return Err(OptimizeError::GridTooCoarse(grid_n));
    }
    let mut candidates = Vec::new();
    for (s, u) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        candidates.push(CriticalPoint {
            s: s as f64,
            u: u as f64,
            value: p.eval_int(s, u) as f64,
            residual: 0.0,
            kind: PointKind::Vertex,
        });
    }
    for edge in Edge::ALL {
        let q = edge_restrict(p, edge);
        let dq = q.derivative();
        let scale = dq.coeffs().iter().map(|c| c.abs()).max().unwrap_or(0).max(1) as f64;
        let em = edge_maximize(&q, 0.0, 1.0)?;
        for x in em.stationary {
            if x <= INTERIOR_MARGIN || x >= 1.0 - INTERIOR_MARGIN {
                continue;
            }
            let (s, u) = edge.point(x);
            candidates.push(CriticalPoint {
                s,
                u,
                value: q.eval(x),
                residual: dq.eval(x).abs() / scale,
                kind: PointKind::Edge,
            });
        }
    }
    let interior = stationary_points(p, Region::UNIT, grid_n, tol, exec);
    candidates.extend(interior.points.into_iter().filter(|c| c.kind == PointKind::Interior));

    let best = *candidates.iter().reduce(|a, b| if better(b, a) { b } else { a }).expect("vertices are always present");
    Ok(BoxMaxResult {
        max_value: best.value,
        argmax: (best.s, best.u),
        argmax_kind: best.kind,
        all_candidates: candidates,
        abandoned_seeds: interior.abandoned_seeds,
    })
}


#[cfg(test)]
mod objective_maxima {
    use super::*;
    use crate::objectives::Objective;

    fn run(o: Objective) -> BoxMaxResult {
        maximize_on_box(o.poly(), 128, 1e-10).unwrap()
    }

    #[test]
    fn g_and_g1_peak_at_vertex_0_1() {
        for o in [Objective::G, Objective::G1] {
            let r = run(o);
            assert_eq!((r.max_value, r.argmax, r.argmax_kind), (2816.0, (0.0, 1.0), PointKind::Vertex), "{o}");
        }
        let g: Vec<_> = run(Objective::G).interior().copied().collect();
        assert_eq!(g.len(), 1);
        assert!((g[0].s - 0.12412).abs() < 1e-5 && (g[0].u - 0.44526).abs() < 1e-5);
        assert!((g[0].value - 2043.96).abs() < 0.01);
        assert!(g[0].residual <= 1e-12);

        let g1 = run(Objective::G1);
        assert_eq!(g1.interior().count(), 0);
        let edge: Vec<_> = g1.all_candidates.iter().filter(|c| c.kind == PointKind::Edge).collect();
        assert_eq!(edge.len(), 1);
        assert!((edge[0].s - 0.7734436).abs() < 1e-6 && edge[0].u == 0.0);
        assert!((edge[0].value - 482.0335).abs() < 1e-3);
    }

    #[test]
    fn h_peaks_at_origin_and_h1_interior_is_lower() {
        let h = run(Objective::H);
        assert_eq!((h.max_value, h.argmax, h.argmax_kind), (1166400.0, (0.0, 0.0), PointKind::Vertex));
        assert_eq!(h.interior().count(), 0);
        let e = h.all_candidates.iter().find(|c| c.kind == PointKind::Edge).unwrap();
        assert!((e.s - 0.51157).abs() < 1e-3 && e.u == 1.0 && (e.value - 365908.58).abs() < 0.5);

        let h1 = run(Objective::H1);
        assert_eq!(h1.argmax_kind, PointKind::Interior);
        assert!((h1.argmax.0 - 0.08804).abs() < 1e-5 && (h1.argmax.1 - 0.66270).abs() < 1e-5);
        assert!((h1.max_value - 588255.08).abs() < 0.01);
        assert!(h1.max_value < 1166400.0);
        assert_eq!(h1.interior().count(), 1);

        // h1(0, u) peaks at u = (3/62) sqrt(186) with value (1327104/31) sqrt(186)
        let q = edge_restrict(Objective::H1.poly(), Edge::S0);
        let m = edge_maximize(&q, 0.0, 1.0).unwrap();
        let r186 = 186f64.sqrt();
        assert!((m.argmax - 3.0 / 62.0 * r186).abs() < 1e-12);
        assert!((m.value - 1327104.0 / 31.0 * r186).abs() <= 1e-9 * m.value);
    }

    #[test]
    fn finer_lattices_do_not_change_the_maximum() {
        for o in Objective::ALL {
            let coarse = maximize_on_box(o.poly(), 64, 1e-10).unwrap();
            let fine = maximize_on_box(o.poly(), 256, 1e-10).unwrap();
            assert!(fine.max_value >= coarse.max_value - 1e-9 * coarse.max_value.abs(), "{o}");
            assert!((fine.argmax.0 - coarse.argmax.0).abs() < 1e-9 && (fine.argmax.1 - coarse.argmax.1).abs() < 1e-9);
        }
    }
}
