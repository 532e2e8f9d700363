mod common;

use std::f64::consts::PI;

use grapespin::mie::{
    characteristic_fn, circle_profile, count_cyclic_peaks, ellipse_perimeter, field_map,
    find_resonances, incident_field, mie_coefficients, size_ellipsoid, FieldSample, MieConfig,
    MieSolution, Plane, MIN_SCAN_POINTS, SPEED_OF_LIGHT,
};
use grapespin::special::{h1_sequence, j_sequence, y_sequence};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn water() -> MieConfig {
    MieConfig::new(8.9, 1.0, 0.01, 2.87e9)
}

fn tangential(s: &FieldSample) -> [Complex64; 4] {
    [s.e[1], s.e[2], s.h[1], s.h[2]]
}

fn max_mismatch(inner: &FieldSample, outer: &FieldSample) -> (f64, f64) {
    let (a, b) = (tangential(inner), tangential(outer));
    let e_scale = a[0]
        .norm()
        .max(a[1].norm())
        .max(b[0].norm())
        .max(b[1].norm());
    let h_scale = a[2]
        .norm()
        .max(a[3].norm())
        .max(b[2].norm())
        .max(b[3].norm());
    let e_err = (a[0] - b[0]).norm().max((a[1] - b[1]).norm()) / e_scale;
    let h_err = (a[2] - b[2]).norm().max((a[3] - b[3]).norm()) / h_scale;
    (e_err, h_err)
}

#[test]
fn tangential_fields_continuous_at_surface() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let n1 = rng.random_range(1.5..10.0);
        let rho = rng.random_range(0.3..5.0);
        let cfg = MieConfig::new(n1, 1.0, 1.0, 2.87e9)
            .with_size_parameter(rho)
            .with_n_max(40);
        let sol = MieSolution::new(&cfg).unwrap();
        for _ in 0..20 {
            let theta = rng.random_range(0.0..PI);
            let phi = rng.random_range(-PI..PI);
            let inner = sol.internal_field(cfg.radius, theta, phi).unwrap();
            let outer = sol.external_field(cfg.radius, theta, phi).unwrap();
            let (e_err, h_err) = max_mismatch(&inner, &outer);
            assert!(
                e_err < 1e-6 && h_err < 1e-6,
                "N={n1} rho={rho}: {e_err:e} {h_err:e}"
            );
        }
    }
}

#[test]
fn magnetic_and_lossy_spheres_satisfy_boundary_conditions() {
    let cfg = MieConfig {
        n1: Complex64::new(4.0, 0.3),
        n2: 1.2,
        mu1: 2.0,
        mu2: 1.0,
        radius: 1.0,
        frequency: 1e9,
        n_max: Some(40),
    }
    .with_size_parameter(1.7);
    let sol = MieSolution::new(&cfg).unwrap();
    for (theta, phi) in [(0.3, 0.2), (1.4, -2.0), (2.9, 1.0)] {
        let inner = sol.internal_field(cfg.radius, theta, phi).unwrap();
        let outer = sol.external_field(cfg.radius, theta, phi).unwrap();
        let (e_err, h_err) = max_mismatch(&inner, &outer);
        assert!(e_err < 1e-6 && h_err < 1e-6, "{e_err:e} {h_err:e}");
    }
}

#[test]
fn index_matched_sphere_leaves_plane_wave_unchanged() {
    let cfg = MieConfig::new(1.0, 1.0, 1.0, 2.87e9)
        .with_size_parameter(2.0)
        .with_n_max(30);
    let sol = MieSolution::new(&cfg).unwrap();
    for c in &sol.coefficients {
        assert!(c.a_ext.norm() < 1e-12 && c.b_ext.norm() < 1e-12);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let r = rng.random_range(0.0..3.0) * cfg.radius;
        let theta = rng.random_range(0.0..PI);
        let phi = rng.random_range(-PI..PI);
        let got = sol.field(r, theta, phi).unwrap();
        let want = incident_field(&cfg, r, theta, phi);
        for k in 0..3 {
            assert!((got.e[k] - want.e[k]).norm() < 1e-9);
            assert!((got.h[k] - want.h[k]).norm() < 1e-9 * want.abs_h());
        }
    }
}

#[test]
fn index_matched_map_has_unit_electric_modulus() {
    let cfg = MieConfig::new(1.0, 1.0, 0.01, 2.87e9);
    let map = field_map(&cfg, Plane::Xz, 0.02, 16).unwrap();
    for e in &map.abs_e {
        assert!((e - 1.0).abs() < 1e-9, "{e}");
    }
}

#[test]
fn magnetic_map_mirror_symmetric_in_y() {
    let res = find_resonances(3, &water(), 0.1, 2.0, 1).unwrap();
    let cfg = water().with_size_parameter(res[0].rho_res);
    let map = field_map(&cfg, Plane::Xy, 2.0 * cfg.radius, 33).unwrap();
    let n = map.resolution();
    for iv in 0..n {
        for iu in 0..n {
            let (a, b) = (map.h_at(iu, iv), map.h_at(iu, n - 1 - iv));
            assert!((a - b).abs() <= 1e-10 * a.max(b), "{a} vs {b}");
        }
    }
}

#[test]
fn interior_lobes_match_resonance_order() {
    for order in 1..=3 {
        let res = find_resonances(order, &water(), 0.1, 2.0, 1).unwrap();
        let cfg = water().with_size_parameter(res[0].rho_res);
        let sol = MieSolution::new(&cfg).unwrap();
        let profile = circle_profile(&sol, Plane::Yz, 0.9 * cfg.radius, 720).unwrap();
        assert_eq!(count_cyclic_peaks(&profile), 2 * order, "order {order}");
    }
}

#[test]
fn resonance_coincides_with_internal_amplitude_peak() {
    let (rho_min, rho_max) = (0.1, 2.0);
    let step = (rho_max - rho_min) / (MIN_SCAN_POINTS - 1) as f64;
    for order in 1..=3 {
        let rho_res = find_resonances(order, &water(), rho_min, rho_max, 1).unwrap()[0].rho_res;
        let amplitude = |rho: f64| {
            mie_coefficients(order, &water().with_size_parameter(rho))
                .unwrap()
                .a_int
                .norm()
        };
        let grid: Vec<f64> = (-20..=20).map(|k| rho_res + k as f64 * step).collect();
        let peak = grid
            .iter()
            .cloned()
            .max_by(|a, b| amplitude(*a).partial_cmp(&amplitude(*b)).unwrap())
            .unwrap();
        assert!(
            (peak - rho_res).abs() <= step,
            "order {order}: {peak} vs {rho_res}"
        );
    }
}

#[test]
fn later_modes_ascend() {
    let res = find_resonances(2, &water(), 0.1, 3.0, 3).unwrap();
    assert_eq!(
        res.iter().map(|r| r.mode_index).collect::<Vec<_>>(),
        vec![1, 2, 3]
    );
    assert!(res.windows(2).all(|w| w[1].rho_res > w[0].rho_res));
    for r in &res {
        let d = characteristic_fn(2, r.rho_res, &water()).unwrap().norm();
        for delta in [-1e-4, 1e-4] {
            assert!(
                characteristic_fn(2, r.rho_res + delta, &water())
                    .unwrap()
                    .norm()
                    > d
            );
        }
    }
}

#[test]
fn doubling_frequency_halves_radius() {
    let base = find_resonances(3, &water(), 0.1, 2.0, 2).unwrap();
    let fast = MieConfig {
        frequency: 2.0 * 2.87e9,
        ..water()
    };
    let doubled = find_resonances(3, &fast, 0.1, 2.0, 2).unwrap();
    for (a, b) in base.iter().zip(&doubled) {
        assert_eq!(a.rho_res, b.rho_res);
        assert!((a.radius - 2.0 * b.radius).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_holds_for_all_kinds(n in 1usize..30, x in 0.1f64..50.0) {
        let z = Complex64::new(x, 0.0);
        for seq in [j_sequence(n + 1, z).unwrap(), y_sequence(n + 1, z).unwrap(), h1_sequence(n + 1, z).unwrap()] {
            let lhs = seq[n] * ((2 * n + 1) as f64 / x);
            let rhs = seq[n - 1] + seq[n + 1];
            let scale = lhs.norm().max(seq[n - 1].norm()).max(seq[n + 1].norm());
            prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn coefficients_depend_only_on_size_parameter(
        n1 in 1.5f64..10.0,
        rho in 0.3f64..5.0,
        scale in 0.1f64..10.0,
        order in 1usize..8,
    ) {
        let a = MieConfig::new(n1, 1.0, 1.0, 2.87e9).with_size_parameter(rho);
        let b = MieConfig { radius: a.radius * scale, frequency: a.frequency / scale, ..a.clone() };
        let (ca, cb) = (mie_coefficients(order, &a).unwrap(), mie_coefficients(order, &b).unwrap());
        for (x, y) in [(ca.a_int, cb.a_int), (ca.b_int, cb.b_int), (ca.a_ext, cb.a_ext), (ca.b_ext, cb.b_ext)] {
            prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(1e-300));
        }
    }

    #[test]
    fn smaller_alpha_gives_smaller_minor_axis(a1 in 0.52f64..0.81, a2 in 0.52f64..0.81) {
        prop_assume!(a1 < a2);
        let b1 = size_ellipsoid(13.5e-3, a1, 2.87e9).unwrap();
        let b2 = size_ellipsoid(13.5e-3, a2, 2.87e9).unwrap();
        prop_assert!(b1 < b2);
    }
}

#[test]
fn ramanujan_matches_quadrature() {
    let (a, b) = (13.5e-3, 8.5e-3);
    let exact = common::quadrature_perimeter(a, b);
    let approx = ellipse_perimeter(a, b).unwrap();
    assert!((approx - exact).abs() / exact < 1e-4);
    assert!((approx - 70.0e-3).abs() < 0.1e-3);
    assert!((ellipse_perimeter(a, a).unwrap() - 2.0 * PI * a).abs() <= 1e-12 * a);
}

#[test]
fn flat_ellipse_stays_within_known_band() {
    let exact = common::quadrature_perimeter(1.0, 1e-9);
    assert!((exact - 4.0).abs() < 1e-6);
    let approx = ellipse_perimeter(1.0, 0.0).unwrap();
    assert!((approx - exact).abs() / exact < 5e-4);
}

#[test]
fn sizing_back_substitutes() {
    let f = 2.87e9;
    let b = size_ellipsoid(13.5e-3, 0.645, f).unwrap();
    let target = 0.645 * SPEED_OF_LIGHT / f;
    assert!((target - 67.4e-3).abs() < 0.05e-3);
    assert!((ellipse_perimeter(13.5e-3, b).unwrap() - target).abs() < 1e-9);
    // chosen grape minor semi-axis 8.5 mm
    assert!((b - 8.5e-3).abs() / 8.5e-3 < 0.15);
}
