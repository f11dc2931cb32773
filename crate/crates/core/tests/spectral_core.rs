use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qkdv::spectral::{quintic_product, LittlewoodPaley, SpectralGrid};
use qkdv::{Error, Field, FieldF32, Grid, GridF32};

fn random_field(n: usize, values: &[f64]) -> Field {
    let g = Grid::new(10.0, n).unwrap().shared();
    Field::from_physical(&g, 0.0, values[..n].to_vec()).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_is_exact(values in prop::collection::vec(-1.0f64..1.0, 128)) {
        let u = random_field(128, &values);
        let g = u.grid();
        let back = g.inverse(&g.forward(&values));
        let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!(max_diff(&values, &back) <= 1e-13 * scale.max(1e-300));
    }

    #[test]
    fn parseval(values in prop::collection::vec(-1.0f64..1.0, 64)) {
        let u = random_field(64, &values);
        let (p, s) = (u.mass_physical(), u.mass_spectral());
        prop_assert!(((p - s) / p).abs() <= 1e-12);
    }

    #[test]
    fn unimodular_multiplier_keeps_the_norm(values in prop::collection::vec(-1.0f64..1.0, 64), t in -50.0f64..50.0) {
        // Multipliers drop the Nyquist mode, so compare against the field
        // after the identity multiplier.
        let u = random_field(64, &values).apply_multiplier(|_| Complex64::new(1.0, 0.0));
        let v = u.apply_multiplier(|xi| Complex64::from_polar(1.0, t * xi.powi(5)));
        prop_assert!(((v.l2_norm() - u.l2_norm()) / u.l2_norm()).abs() <= 1e-13);
    }

    #[test]
    fn dyadic_pieces_sum_to_one(xi in 0.01f64..100.0) {
        let lp = LittlewoodPaley::default();
        let j0 = xi.log2().floor() as i32 - 2;
        let sum: f64 = (j0..j0 + 5).map(|j| lp.psi(xi / 2f64.powi(j))).sum::<f64>() + lp.phi(xi / 2f64.powi(j0 - 1));
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn cosine_has_two_coefficients() {
    let g = Grid::new(PI, 32).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| (3.0 * x).cos());
    let s = u.spectral_view();
    for (i, c) in s.iter().enumerate() {
        let k = g.wavenumber(i);
        if k.abs() == 3 {
            assert!((c.norm() - s[3].norm()).abs() < 1e-14 && c.norm() > 1.0);
        } else {
            assert!(c.norm() < 1e-13, "mode {k}: {c}");
        }
    }
}

#[test]
fn gaussian_transform_is_a_gaussian() {
    let g = Grid::new(20.0, 256).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| (-x * x / 2.0).exp());
    for (c, &xi) in u.spectral_view().iter().zip(g.frequencies()) {
        assert!((c - Complex64::new((-xi * xi / 2.0).exp(), 0.0)).norm() < 1e-12, "ξ = {xi}");
    }
}

#[test]
fn derivative_of_a_cosine() {
    let g = Grid::new(PI, 32).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| (3.0 * x).cos());
    let du = u.derivative(1);
    let expect: Vec<f64> = g.nodes().iter().map(|x| -3.0 * (3.0 * x).sin()).collect();
    assert!(max_diff(&du.physical_view(), &expect) < 1e-13);
}

#[test]
fn non_hermitian_symbol_is_flagged() {
    let g = Grid::new(PI, 32).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| x.sin() + (2.0 * x).cos());
    assert!(matches!(u.apply_real_multiplier(|_| Complex64::new(1.0, 0.3)), Err(Error::HermitianLoss(_))));
    assert!(u.apply_real_multiplier(|xi| Complex64::new(0.0, xi)).is_ok());
}

#[test]
fn product_with_constants_is_identity() {
    let g = Grid::new(8.0, 64).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| (-x * x).exp());
    let one = Field::from_fn(&g, 0.0, |_| 1.0);
    let p = quintic_product([&u, &one, &one, &one, &one]).unwrap();
    assert!(max_diff(&p.physical_view(), &u.physical_view()) < 1e-14);
}

#[test]
fn fifth_power_of_a_mode_has_binomial_weights() {
    let g = Grid::new(PI, 64).unwrap().shared();
    let m = 5usize;
    let u = Field::from_fn(&g, 0.0, |x| (m as f64 * x).cos());
    let p = quintic_product([&u, &u, &u, &u, &u]).unwrap();
    let (c, s) = (u.spectral_view()[m], p.spectral_view());
    let weights = [(1, 10.0 / 16.0), (3, 5.0 / 16.0), (5, 1.0 / 16.0)];
    for (i, v) in s.iter().enumerate() {
        let k = g.wavenumber(i);
        let w = weights.iter().find(|(h, _)| (h * m) as i64 == k.abs()).map_or(0.0, |w| w.1);
        assert!((v - c * w).norm() < 1e-13 * c.norm(), "mode {k}: {v}");
    }
}

#[test]
fn padding_removes_aliasing() {
    // A mode at 0.9 of the band edge: unpadded, u⁵ folds back onto resolved
    // modes; with padding 3 nothing but the true product survives.
    let n = 64;
    let k = 29.0;
    let exact = |g: &std::sync::Arc<Grid>| {
        let u = Field::from_fn(g, 0.0, |x| (k * x).cos());
        quintic_product([&u, &u, &u, &u, &u]).unwrap()
    };
    let padded = exact(&SpectralGrid::with_dealias(PI, n, 3).unwrap().shared());
    let plain = exact(&SpectralGrid::with_dealias(PI, n, 1).unwrap().shared());
    let expected = |i: usize| -> bool { (padded.grid().wavenumber(i).abs() as f64 - k).abs() < 0.5 };
    let folded = |f: &Field| f.spectral_view().iter().enumerate().filter(|(i, _)| !expected(*i)).map(|(_, c)| c.norm_sqr()).sum::<f64>();
    assert!(folded(&padded) < 1e-26);
    assert!(folded(&plain) > 1e-2);
}

#[test]
fn telescoping_projections_recover_the_field() {
    let g = Grid::new(40.0, 512).unwrap().shared();
    let u = Field::from_fn(&g, 0.0, |x| (-x * x / 4.0).exp() * (1.0 + (3.0 * x).sin()));
    let lp = LittlewoodPaley::default();
    let mut sum = lp.project_below(&u, -5);
    for j in -4..=6 {
        sum = sum.axpy(1.0, &lp.project_dyadic(&u, j)).unwrap();
    }
    assert!(max_diff(&sum.physical_view(), &u.physical_view()) < 1e-12);
    let split = lp.project_below(&u, 2).axpy(1.0, &lp.project_above(&u, 2)).unwrap();
    assert!(max_diff(&split.physical_view(), &u.physical_view()) < 1e-13);
}

#[test]
fn mismatched_grids_are_rejected() {
    let a = Grid::new(8.0, 64).unwrap().shared();
    let b = Grid::new(9.0, 64).unwrap().shared();
    let u = Field::zeros(&a, 0.0);
    let v = Field::zeros(&b, 0.0);
    assert!(matches!(quintic_product([&u, &u, &v, &u, &u]), Err(Error::GridMismatch)));
}

#[test]
fn single_precision_round_trip() {
    let g = GridF32::new(10.0, 64).unwrap().shared();
    let u = FieldF32::from_fn(&g, 0.0, |x| (-x * x).exp());
    let back = g.inverse(&g.forward(&u.physical_view()));
    let err = u.physical_view().iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0f32, f32::max);
    assert!(err < 1e-6);
}
