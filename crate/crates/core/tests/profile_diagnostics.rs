use std::sync::Arc;

use proptest::prelude::*;
use qkdv::diagnostics::{edge_tapered, extract_profile, vector_field_identity_check, weighted_norm_physical, weighted_norm_spectral, x_norm};
use qkdv::linear::free_evolve;
use qkdv::solver::{evolve, Nonlinearity, SolverConfig};
use qkdv::{Error, Field, Grid};

fn gaussian(g: &Arc<Grid>, t: f64, amp: f64, width: f64) -> Field {
    Field::from_fn(g, t, |x| amp * (-x * x / (2.0 * width * width)).exp())
}

fn max_diff(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

#[test]
fn profile_at_time_zero_is_the_transform() {
    let g = Grid::new(20.0, 128).unwrap().shared();
    let u = gaussian(&g, 0.0, 1.0, 1.0);
    assert!(max_diff(&extract_profile(&u).fhat, &u.spectral_view()) <= 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn free_flow_leaves_the_profile_alone(t in 0.0f64..500.0, shift in -3.0f64..3.0) {
        let g = Grid::new(20.0, 128).unwrap().shared();
        let u0 = Field::from_fn(&g, 0.0, |x| (-(x - shift).powi(2)).exp() * (1.0 + 0.2 * x));
        let f0 = extract_profile(&u0);
        let u = free_evolve(&u0, t);
        let f = extract_profile(&u);
        prop_assert!(max_diff(&f.fhat, &f0.fhat) <= 1e-13);
        // ‖f̂‖ does not change and f̂(−ξ) = conj f̂(ξ).
        prop_assert!(((f.l2_norm() - u.l2_norm()) / u.l2_norm()).abs() <= 1e-13);
        for i in 1..g.len() {
            if i != g.nyquist_index() {
                prop_assert!((f.fhat[i] - f.fhat[g.partner(i)].conj()).norm() <= 1e-14);
            }
        }
        // Re-attaching the free flow gives the state back.
        let back = f.to_state();
        let d = back.physical_view().iter().zip(u.physical_view().iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(d <= 1e-13);
    }
}

#[test]
fn nonlinear_profile_moves_like_the_fifth_power() {
    let g = Grid::new(64.0, 256).unwrap().shared();
    let change = |eps: f64| {
        let u0 = gaussian(&g, 0.0, eps, 2.0);
        let cfg = SolverConfig::new(0.01, 2.0).fixed();
        let run = evolve(&u0, &cfg).unwrap();
        let f1 = extract_profile(&run.snapshots.iter().find(|s| (s.state.time() - 1.0).abs() < 1e-9).unwrap().state);
        let f2 = extract_profile(&run.final_state);
        max_diff(&f1.fhat, &f2.fhat)
    };
    let ratio = change(0.2) / change(0.1);
    assert!((ratio / 32.0 - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn gaussian_weighted_norm_closed_form() {
    // ‖x e^{−x²/2}‖ = (√π/2)^{1/2}.
    let g = Grid::new(320.0, 4096).unwrap().shared();
    let u = free_evolve(&gaussian(&g, 0.0, 1.0, 1.0), 1.0);
    let snap = extract_profile(&u);
    let exact = (std::f64::consts::PI.sqrt() / 2.0).sqrt();
    let spectral = weighted_norm_spectral(&snap);
    let physical = weighted_norm_physical(&snap);
    assert!((spectral / exact - 1.0).abs() < 1e-8, "{spectral} vs {exact}");
    assert!((spectral / physical - 1.0).abs() < 1e-8);
    let r = x_norm(&snap, &u).unwrap();
    assert!((r.total - (r.sobolev + r.weighted + r.flat)).abs() < 1e-15);
    assert!((r.flat - 1.0).abs() < 1e-12);
    assert!(!r.boundary_warning);
}

#[test]
fn zero_field_norms_and_identity_vanish() {
    let g = Grid::new(20.0, 128).unwrap().shared();
    let u = Field::zeros(&g, 3.0);
    let r = x_norm(&extract_profile(&u), &u).unwrap();
    assert_eq!((r.sobolev, r.weighted, r.flat, r.total), (0.0, 0.0, 0.0, 0.0));
    assert_eq!(vector_field_identity_check(&u, Nonlinearity::Defocusing).unwrap().relative, 0.0);
}

#[test]
fn weighted_norm_needs_late_times() {
    let g = Grid::new(20.0, 128).unwrap().shared();
    let u = gaussian(&g, 0.5, 1.0, 1.0);
    assert!(matches!(x_norm(&extract_profile(&u), &u), Err(Error::InvalidInput(_))));
    assert!(matches!(vector_field_identity_check(&u, Nonlinearity::Off), Err(Error::InvalidInput(_))));
}

#[test]
fn h2_norm_matches_finite_differences() {
    let g = Grid::new(30.0, 1024).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| (-x * x / 4.0).exp() * (1.0 + (0.5 * x).sin()));
    let v = u.physical_view().into_owned();
    let h = g.dx();
    let n = v.len();
    let at = |k: isize| v[k.rem_euclid(n as isize) as usize];
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for k in 0..n as isize {
        let d1 = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
        let d2 = (-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) + 16.0 * at(k + 1) - at(k + 2)) / (12.0 * h * h);
        s0 += at(k) * at(k);
        s1 += d1 * d1;
        s2 += d2 * d2;
    }
    let fd = ((s0 + 2.0 * s1 + s2) * h).sqrt();
    assert!((u.h2_norm() / fd - 1.0).abs() < 1e-6, "{} vs {fd}", u.h2_norm());
}

#[test]
fn identity_holds_along_a_nonlinear_run() {
    let g = Grid::new(1024.0, 2048).unwrap().shared();
    let u0 = gaussian(&g, 0.0, 0.2, 4.0);
    let run = evolve(&u0, &SolverConfig::new(0.01, 10.0).fixed()).unwrap();
    let r = vector_field_identity_check(&run.final_state, Nonlinearity::Defocusing).unwrap();
    let tapered = vector_field_identity_check(&edge_tapered(&run.final_state, 0.7).unwrap(), Nonlinearity::Defocusing).unwrap();
    assert!(r.relative < 1e-6, "{} (tapered {})", r.relative, tapered.relative);
    assert!(tapered.relative < 1e-6);
}

#[test]
fn identity_for_linear_flow() {
    let g = Grid::new(1024.0, 2048).unwrap().shared();
    let u = free_evolve(&gaussian(&g, 0.0, 0.5, 4.0), 10.0);
    let r = vector_field_identity_check(&u, Nonlinearity::Off).unwrap();
    assert!(r.relative < 1e-10, "{}", r.relative);
    assert!(!r.flux_warning);
}
