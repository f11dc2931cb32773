use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qkdv::linear::{
    dispersive_envelope_check, free_evolve, oscillatory_quadrature, stationary_phase_error_fit,
    stationary_phase_predict, EnvelopeOptions, LinearPhase, QuadratureOptions,
};
use qkdv::{Error, Field, Grid};

fn gaussian_hat(xi: f64) -> Complex64 {
    Complex64::new((-xi * xi / 2.0).exp(), 0.0)
}

fn small_grid() -> std::sync::Arc<Grid> {
    Grid::new(20.0, 256).unwrap().shared()
}

#[test]
fn zero_time_is_identity() {
    let g = small_grid();
    let u = Field::from_fn(&g, 0.0, |x| (-x * x).exp() * (1.0 + x));
    let v = free_evolve(&u, 0.0);
    let (a, b) = (u.physical_view(), v.physical_view());
    for (p, q) in a.iter().zip(b.iter()) {
        assert!((p - q).abs() < 1e-13);
    }
}

#[test]
fn plane_wave_picks_up_its_phase() {
    let g = small_grid();
    let k = 5;
    let xi = PI * k as f64 / g.half_length();
    let u = Field::from_fn(&g, 0.0, |x| (xi * x).cos());
    let t = 0.37;
    let v = free_evolve(&u, t);
    let expect = Field::from_fn(&g, 0.0, |x| (xi * x + t * xi.powi(5)).cos());
    for (p, q) in v.physical_view().iter().zip(expect.physical_view().iter()) {
        assert!((p - q).abs() < 1e-12, "{p} vs {q}");
    }
    assert_eq!(v.time(), t);
}

#[test]
fn stationary_point_zeroes_the_phase_derivative() {
    let p = LinearPhase::new(-250.0, 50.0);
    let xi0 = p.stationary_point().unwrap();
    assert!((xi0 - 1.0).abs() < 1e-15);
    assert!(p.derivative(xi0).abs() < 1e-14);
    assert!((p.value(xi0) + 4.0 * xi0.powi(5)).abs() < 1e-14);
    let q = LinearPhase::new(3.0, 2.0);
    assert!(q.stationary_point().is_none());
    for k in 0..100 {
        assert!(q.derivative(k as f64 * 0.05) > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_law_and_reversal(k1 in -512i32..512, k2 in -512i32..512, seed in 0u64..1000) {
        // Dyadic times, so t1 + t2 is exact and only the propagator is tested.
        let (t1, t2) = (k1 as f64 / 1024.0, k2 as f64 / 1024.0);
        let g = small_grid();
        let u = Field::from_fn(&g, 0.0, |x| {
            let s = seed as f64 * 0.01;
            (-(x - s).powi(2)).exp() * (1.0 + 0.3 * (x * s).sin())
        });
        let a = free_evolve(&free_evolve(&u, t1), t2);
        let b = free_evolve(&u, t1 + t2);
        let back = free_evolve(&free_evolve(&u, t1), -t1);
        let scale = u.sup_norm();
        for ((p, q), r) in a.physical_view().iter().zip(b.physical_view().iter()).zip(back.physical_view().iter()) {
            prop_assert!((p - q).abs() < 1e-13 * scale.max(1.0));
            prop_assert!(r.is_finite());
        }
        for (p, r) in u.physical_view().iter().zip(back.physical_view().iter()) {
            prop_assert!((p - r).abs() < 1e-13 * scale.max(1.0));
        }
        let n0 = u.l2_norm();
        prop_assert!((a.l2_norm() - n0).abs() < 1e-13 * n0);
        prop_assert!(a.hermitian_defect() < 1e-13);
    }
}

#[test]
fn quadrature_recovers_data_at_small_time() {
    let v = oscillatory_quadrature(&gaussian_hat, 0.0, 1e-9, 0.0, &QuadratureOptions::default()).unwrap();
    assert!((v.value - 1.0).abs() < 1e-9, "{}", v.value);
}

#[test]
fn quadrature_rejects_bad_input() {
    let o = QuadratureOptions::default();
    assert!(matches!(oscillatory_quadrature(&gaussian_hat, 0.0, 0.0, 0.0, &o), Err(Error::InvalidInput(_))));
    assert!(matches!(oscillatory_quadrature(&gaussian_hat, 0.0, 1.0, 3.5, &o), Err(Error::InvalidInput(_))));
}

#[test]
fn zero_data_has_zero_envelope() {
    let zero = |_: f64| Complex64::new(0.0, 0.0);
    let fit = dispersive_envelope_check(&zero, &[10.0, 100.0], 0.0, &EnvelopeOptions::default()).unwrap();
    assert!(fit.sups.iter().all(|&s| s == 0.0));
    assert!(fit.time_fit.is_none());
}

/// Two independent evaluators of the same linear solution: the spectral
/// multiplier on a large periodic grid, summed at one point, and the
/// adaptive quadrature of the Fourier integral.
#[test]
fn quadrature_matches_spectral_evolution() {
    let t = 50.0;
    let x = -250.0;
    // Box large enough that every frequency with |ĝ| above 1e-9 stays
    // unwrapped at t = 50 (group position −5tξ⁴).
    let grid = Grid::new(262_144.0, 1 << 21).unwrap().shared();
    let u0 = Field::from_spectrum(&grid, 0.0, gaussian_hat);
    let ut = free_evolve(&u0, t);
    let spectral = ut.evaluate_at(&[x])[0];
    let oracle = oscillatory_quadrature(&gaussian_hat, x, t, 0.0, &QuadratureOptions::default()).unwrap();
    assert!((spectral - oracle.value).abs() < 1e-8, "spectral {spectral} oracle {}", oracle.value);
}

#[test]
fn prediction_at_unit_stationary_point() {
    let t = 40.0;
    let p = stationary_phase_predict(&gaussian_hat, -5.0 * t, t).unwrap();
    assert!((p.stationary_point - 1.0).abs() < 1e-14);
    assert!((p.amplitude - (5.0 * t).powf(-0.5)).abs() < 1e-15);
    assert!((p.phase - (-4.0 * t + PI / 4.0)).abs() < 1e-12);
    assert!(matches!(stationary_phase_predict(&gaussian_hat, 0.5, t), Err(Error::OutOfRegion(_))));
    assert!(matches!(stationary_phase_predict(&gaussian_hat, -10.0, 0.5), Err(Error::OutOfRegion(_))));
}

#[test]
fn stationary_phase_error_decays_in_the_oscillatory_region() {
    let (fit, raw) =
        stationary_phase_error_fit(&gaussian_hat, 100.0, 2.0, 50.0, 240, 12, &QuadratureOptions::default()).unwrap();
    let fit = fit.unwrap();
    eprintln!("stationary-phase error slope {:.4} over {} samples", fit.slope, raw.len());
    assert!(fit.slope <= -0.45 + 0.05, "slope {}", fit.slope);
}

#[test]
fn sup_norm_decays_like_t_to_minus_one_fifth() {
    let times = [10.0, 31.6, 100.0, 316.0, 1000.0, 3162.0, 10000.0];
    let fit = dispersive_envelope_check(&gaussian_hat, &times, 0.0, &EnvelopeOptions::default()).unwrap();
    let slope = fit.time_fit.unwrap().slope;
    eprintln!("sup slope {slope:.4}, argmax z {:?}", fit.argmax_z);
    assert!((slope + 0.2).abs() <= 0.02, "slope {slope}");
    let spatial = fit.spatial_fit.unwrap().slope;
    eprintln!("right-side spatial slope {spatial:.3}");
    assert!(spatial <= -7.0 / 8.0 + 0.05);
}

#[test]
fn derivative_order_shifts_the_time_exponent() {
    let times = [100.0, 316.0, 1000.0, 3162.0];
    let o = EnvelopeOptions::default();
    let f0 = dispersive_envelope_check(&gaussian_hat, &times, 0.0, &o).unwrap();
    let f1 = dispersive_envelope_check(&gaussian_hat, &times, 1.0, &o).unwrap();
    let (s0, s1) = (f0.weighted_time_fit.unwrap().slope, f1.weighted_time_fit.unwrap().slope);
    eprintln!("weighted slopes beta=0 {s0:.4}, beta=1 {s1:.4}");
    assert!(((s1 - s0) + 0.2).abs() < 0.03, "difference {}", s1 - s0);
}
