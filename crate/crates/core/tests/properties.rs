use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invhankel::caratheodory::{herglotz_c, schur_to_c, toeplitz_min_eig, HerglotzAtoms, SchurParams};
use invhankel::classes::{h3_of_inverse_series, FunctionClass};
use invhankel::exec::Exec;
use invhankel::objectives::{envelope, Objective};
use invhankel::optimizer::{maximize_on_box, maximize_on_box_with, stationary_points, PointKind, Region};
use invhankel::series::TruncatedSeries;
use invhankel::verification::sample_value;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(coeff(), order + 1).prop_map(TruncatedSeries::new)
}

/// `z + a_2 z^2 + ...` with small higher coefficients.
fn normalized(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(coeff(), order - 1).prop_map(move |tail| {
        let mut c = vec![Complex64::default(), Complex64::new(1.0, 0.0)];
        c.extend(tail.into_iter().map(|x| x * 0.5));
        TruncatedSeries::new(c)
    })
}

fn disk() -> impl Strategy<Value = Complex64> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn schur() -> impl Strategy<Value = SchurParams> {
    [disk(), disk(), disk(), disk()].prop_map(|t| SchurParams::new(t).unwrap())
}

proptest! {
    #[test]
    fn mul_commutes_and_associates(a in series(12), b in series(12), c in series(12)) {
        prop_assert!((&a * &b).max_abs_diff(&(&b * &a)) < 1e-12);
        prop_assert!((&(&a * &b) * &c).max_abs_diff(&(&a * &(&b * &c))) < 1e-10);
    }

    #[test]
    fn log_exp_round_trip(a in series(15)) {
        let mut c = a.coeffs().to_vec();
        c[0] = Complex64::default();
        let a0 = TruncatedSeries::new(c);
        prop_assert!(a0.exp().unwrap().log().unwrap().max_abs_diff(&a0) < 1e-9);
    }

    #[test]
    fn revert_composes_to_identity(f in normalized(12)) {
        let g = f.revert().unwrap();
        let id = TruncatedSeries::identity(12);
        prop_assert!(f.compose(&g).unwrap().max_abs_diff(&id) < 1e-8);
        prop_assert!(g.compose(&f).unwrap().max_abs_diff(&id) < 1e-8);
    }

    #[test]
    fn schur_image_is_toeplitz_psd(t in schur()) {
        let c = schur_to_c(&t);
        prop_assert!(toeplitz_min_eig(&c, 5).unwrap() >= -1e-9);
    }

    #[test]
    fn herglotz_moments_are_toeplitz_psd(w in prop::collection::vec(0.01f64..1.0, 1..6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles: Vec<f64> = w.iter().map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
        let total: f64 = w.iter().sum();
        let atoms = HerglotzAtoms::from_angles(w.iter().map(|x| x / total).collect(), &angles).unwrap();
        prop_assert!(toeplitz_min_eig(&herglotz_c(&atoms), 5).unwrap() >= -1e-9);
    }

    #[test]
    fn samples_respect_bound_and_envelope(t in schur()) {
        for class in [FunctionClass::R, FunctionClass::R1] {
            let h = sample_value(class, &t);
            prop_assert!(h <= class.sharp_bound_f64() + 1e-10);
            let scaled = class.normalizer() as f64 * h;
            prop_assert!(scaled <= envelope(class, t.t1().norm(), t.t2().norm()) + 1e-9);
        }
    }

    #[test]
    fn class_functions_through_reversion(t in schur()) {
        for class in [FunctionClass::R, FunctionClass::R1] {
            let a = class.coeffs_from_caratheodory(&schur_to_c(&t));
            let direct = class.h3_schur(&t);
            let via_series = h3_of_inverse_series(&a.to_series(8)).unwrap();
            prop_assert!((direct - via_series).norm() <= 1e-10 * direct.norm().max(1e-3));
        }
    }
}

#[test]
fn box_maximum_dominates_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for obj in Objective::ALL {
        let p = obj.poly();
        let m = maximize_on_box(p, 64, 1e-10).unwrap();
        for _ in 0..100_000 {
            let (s, u) = (rng.random::<f64>(), rng.random::<f64>());
            assert!(p.eval(s, u) <= m.max_value + 1e-9, "{obj} at ({s}, {u})");
        }
    }
}

#[test]
fn interior_points_are_stationary_on_fresh_evaluation() {
    for obj in Objective::ALL {
        let p = obj.poly();
        let (ps, pu) = p.grad();
        let scale = ps.max_abs_coeff().max(pu.max_abs_coeff()) as f64;
        let m = maximize_on_box(p, 128, 1e-10).unwrap();
        for c in m.all_candidates.iter().filter(|c| c.kind == PointKind::Interior) {
            let r = ps.eval(c.s, c.u).abs().max(pu.eval(c.s, c.u).abs()) / scale;
            assert!(r <= 1e-9, "{obj}: residual {r}");
        }
    }
}

#[test]
fn optimizer_is_deterministic_and_monotone_in_grid() {
    for obj in Objective::ALL {
        let p = obj.poly();
        let a = maximize_on_box_with(p, 64, 1e-10, Exec::Sequential).unwrap();
        let b = maximize_on_box_with(p, 64, 1e-10, Exec::default()).unwrap();
        assert_eq!(a, b);
        let mut prev = a.max_value;
        for n in [128, 256] {
            let m = maximize_on_box(p, n, 1e-10).unwrap().max_value;
            assert!(m >= prev - 1e-12, "{obj}: {m} < {prev} at grid {n}");
            prev = m;
        }
    }
}

#[test]
fn padded_search_keeps_in_box_points() {
    let found = stationary_points(Objective::H1.poly(), Region::PADDED, 64, 1e-10, Exec::default());
    let inside: Vec<_> = found.points.iter().filter(|c| c.kind == PointKind::Interior).collect();
    assert_eq!(inside.len(), 1);
    assert!(found.points.iter().all(|c| Region::PADDED.contains(c.s, c.u)));
}
