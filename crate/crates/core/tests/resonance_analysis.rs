use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qkdv::resonance::{
    coefficient_oracle, derive_resonance_coefficients, exact_catalog, find_stationary_points, inverse_square_oscillatory,
    ode_residual, parse_fraction, saddle_integral, stationary_phase_4d, stationary_phase_sum, ExactCatalogJson,
    Normalization, PointGroup, ProfileEquation, QuinticPhase, SaddleOptions, SearchOptions, StationaryPoint,
};
use qkdv::solver::{evolve, Nonlinearity, SnapshotSchedule, SolverConfig};
use qkdv::{Error, Field, Grid, Rational};

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn pow(b: i128, e: u32) -> i128 {
    b.pow(e)
}

#[test]
fn exact_catalog_matches_closed_forms() {
    let cat = exact_catalog(r(1, 1));
    assert_eq!(cat.len(), 16);
    let d1 = r(pow(4, 4), pow(5, 7));
    let d2 = r(pow(4, 4) * pow(5, 4), pow(3, 11));
    let d3 = r(pow(4, 4) * pow(5, 4), 1);
    let phase = QuinticPhase::new(r(1, 1));
    for p in &cat {
        assert!(phase.gradient(&p.point).iter().all(|g| *g == r(0, 1)), "point {}", p.index);
        let (psi, delta) = match p.group {
            PointGroup::Fifth => (r(624, 625), d1),
            PointGroup::Third => (r(80, 81), d2),
            PointGroup::ZeroPhase => (r(0, 1), d3),
        };
        assert_eq!(p.psi, psi, "psi at point {}", p.index);
        let abs = if p.determinant < r(0, 1) { -p.determinant } else { p.determinant };
        assert_eq!(abs, delta, "delta at point {}", p.index);
    }
    assert_eq!(cat[0].point, [r(1, 5); 4]);
    assert!(cat.iter().any(|p| p.point == [r(-1, 1), r(-1, 1), r(1, 1), r(1, 1)]));
    assert_eq!(cat.iter().filter(|p| p.group == PointGroup::Third).count(), 5);
    assert_eq!(cat.iter().filter(|p| p.group == PointGroup::ZeroPhase).count(), 10);
    assert_eq!(d1, r(256, 78125));
}

#[test]
fn exact_catalog_json_round_trips() {
    let cat = exact_catalog(r(1, 1));
    let json = serde_json::to_string(&ExactCatalogJson::new(r(1, 1), &cat)).unwrap();
    let back: ExactCatalogJson = serde_json::from_str(&json).unwrap();
    assert_eq!(back.points[0].psi, ["624".to_string(), "625".to_string()]);
    for (p, q) in cat.iter().zip(&back.points) {
        assert_eq!(parse_fraction(&q.psi).unwrap(), p.psi);
        assert_eq!(parse_fraction(&q.determinant).unwrap(), p.determinant);
        for i in 0..4 {
            assert_eq!(parse_fraction(&q.point[i]).unwrap(), p.point[i]);
        }
    }
    assert!(parse_fraction(&["1".into(), "0".into()]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn catalog_is_homogeneous(n in 1i128..7, d in 1i128..7, neg in any::<bool>()) {
        let s = if neg { -1 } else { 1 };
        let xi = r(s * n, d);
        let base = exact_catalog(r(1, 1));
        let scaled = exact_catalog(xi);
        let (xi5, xi12) = (xi * xi * xi * xi * xi, (xi * xi * xi).pow(4));
        for (p, q) in base.iter().zip(&scaled) {
            for i in 0..4 {
                prop_assert_eq!(q.point[i], p.point[i] * xi);
            }
            prop_assert_eq!(q.psi, p.psi * xi5);
            prop_assert_eq!(q.determinant, p.determinant * xi12);
        }
    }
}

#[test]
fn multistart_finds_exactly_the_sixteen_points() {
    let cat = find_stationary_points(1.0, &SearchOptions::default()).unwrap();
    assert_eq!(cat.points.len(), 16);
    assert_eq!(cat.search.distinct_roots, 16);
    assert!(cat.search.converged > 1000, "only {} starts converged", cat.search.converged);
    assert!(cat.search.max_gradient < 1e-12);
    let exact = exact_catalog(r(1, 1));
    let f = |q: &Rational| *q.numer() as f64 / *q.denom() as f64;
    for (p, e) in cat.points.iter().zip(&exact) {
        assert!((p.psi - f(&e.psi)).abs() < 1e-12);
        assert!((p.determinant - f(&e.determinant)).abs() < 1e-12 * f(&e.determinant).abs().max(1.0));
        for i in 0..4 {
            assert!((p.point[i] - f(&e.point[i])).abs() < 1e-12);
        }
    }
    assert_eq!(cat.points[0].signature, -4);
    assert!(cat.group(PointGroup::Third).all(|p| p.signature == -2));
    assert!(cat.group(PointGroup::ZeroPhase).all(|p| p.signature == 0));

    let two = find_stationary_points(2.0, &SearchOptions { multistarts: 500, ..Default::default() }).unwrap();
    for (p, q) in cat.points.iter().zip(&two.points) {
        assert!((q.psi - 32.0 * p.psi).abs() < 1e-10);
        assert!((q.delta - 4096.0 * p.delta).abs() < 1e-8 * q.delta);
    }
    assert!(matches!(find_stationary_points(0.0, &SearchOptions::default()), Err(Error::InvalidInput(_))));
}

#[test]
fn coefficients_have_the_expected_closed_forms() {
    for xi in [1.0, -1.0, 2.0, -0.5] {
        let cat = find_stationary_points(xi, &SearchOptions { multistarts: 200, ..Default::default() }).unwrap();
        let bare = derive_resonance_coefficients(&cat, Normalization::Bare).unwrap();
        assert!((bare.c0 - Complex64::new(0.0, -1.0 / 40.0)).norm() < 1e-12);
        assert!((bare.c1.norm() - 5f64.powf(3.5) / 16.0).abs() < 1e-10);
        assert!((bare.c2.norm() - 3f64.powf(5.5) / 80.0).abs() < 1e-10);
        // Both oscillating coefficients come out real up to sign.
        assert!((bare.c1 - Complex64::new(0.0, 5f64.powf(3.5) / 16.0)).norm() < 1e-10);
        assert!((bare.c2 - Complex64::new(xi.signum() * 3f64.powf(5.5) / 80.0, 0.0)).norm() < 1e-10);
        assert!((bare.psi1 - 624.0 / 625.0).abs() < 1e-14 && (bare.psi2 - 80.0 / 81.0).abs() < 1e-14);
        let eq = derive_resonance_coefficients(&cat, Normalization::Equation).unwrap();
        assert!((eq.c0 - Complex64::new(0.0, -1.0 / 200.0)).norm() < 1e-12);
        // Measured signatures of points 1-6 are −4, −2 (mirrored for ξ < 0),
        // against `1 − sign ξ` = 0 or 2.
        let expect = if xi > 0.0 { 6 } else { 1 };
        assert_eq!(bare.signature_discrepancies().len(), expect);
    }
}

#[test]
fn stationary_phase_of_zero_amplitude_is_zero() {
    let cat = find_stationary_points(1.0, &SearchOptions { multistarts: 0, ..Default::default() }).unwrap();
    let v = stationary_phase_4d(&cat, &|_| Complex64::new(0.0, 0.0), &|_| 1.0, 1e3).unwrap();
    assert_eq!(v, Complex64::new(0.0, 0.0));
}

#[test]
fn degenerate_hessians_are_rejected() {
    let p = StationaryPoint {
        index: 1,
        group: PointGroup::Fifth,
        point: [0.0; 4],
        psi: 0.0,
        determinant: 0.0,
        delta: 0.0,
        signature: 0,
        eigenvalues: [0.0; 4],
    };
    let r = stationary_phase_sum(&[p], &|_| Complex64::new(1.0, 0.0), &|_| 1.0, 10.0);
    assert!(matches!(r, Err(Error::Degenerate(_))));
    let zero = nalgebra::Matrix4::zeros();
    let one = |_: &[Complex64; 4]| Complex64::new(1.0, 0.0);
    assert!(matches!(
        saddle_integral(&one, &one, [0.0; 4], &zero, 1.0, &SaddleOptions::default()),
        Err(Error::Degenerate(_))
    ));
}

/// `Ψ = |y|²/2` with Gaussian `F = χ = e^{−|y|²/18}`: the stationary-phase sum,
/// the tensor quadrature and the closed form `(2π/(2/9 − iλ))²` agree.
#[test]
fn toy_gaussian_matches_tensor_quadrature() {
    let lambda = 1e3;
    let a = 1.0 / 18.0;
    let p = StationaryPoint {
        index: 1,
        group: PointGroup::Fifth,
        point: [0.0; 4],
        psi: 0.0,
        determinant: 1.0,
        delta: 1.0,
        signature: 4,
        eigenvalues: [1.0; 4],
    };
    let gauss = |y: &[f64; 4]| (-a * y.iter().map(|v| v * v).sum::<f64>()).exp();
    let sp = stationary_phase_sum(&[p], &|y| Complex64::new(gauss(y), 0.0), &gauss, lambda).unwrap();
    let psi = |y: &[Complex64; 4]| y.iter().map(|v| v * v).sum::<Complex64>() * 0.5;
    let amp = |y: &[Complex64; 4]| (y.iter().map(|v| v * v).sum::<Complex64>() * (-2.0 * a)).exp();
    let quad = saddle_integral(&psi, &amp, [0.0; 4], &nalgebra::Matrix4::identity(), lambda, &SaddleOptions::default())
        .unwrap()
        .value;
    let exact = (Complex64::new(2.0 * PI, 0.0) / Complex64::new(4.0 * a, -lambda)).powu(2);
    eprintln!("stationary phase {sp}, quadrature {quad}, exact {exact}");
    assert!((quad - exact).norm() < 1e-6 * exact.norm());
    assert!((sp - quad).norm() < 1e-3 * quad.norm());
}

/// The quadrature oracle converges to the formula magnitudes as `λ` grows,
/// with a relative error falling at least like `λ⁻¹` over a decade.
#[test]
fn oracle_approaches_the_formula() {
    let cat = find_stationary_points(1.0, &SearchOptions { multistarts: 0, ..Default::default() }).unwrap();
    let opts = SaddleOptions { nodes: 32, ..Default::default() };
    let lo = coefficient_oracle(&cat, 2e3, &opts).unwrap();
    let hi = coefficient_oracle(&cat, 2e4, &opts).unwrap();
    eprintln!(
        "lambda 2e3: |c1| err {:.3e}, |c2| err {:.3e}; lambda 2e4: {:.3e}, {:.3e}",
        lo.c1_relative_error(),
        lo.c2_relative_error(),
        hi.c1_relative_error(),
        hi.c2_relative_error()
    );
    assert!(hi.c1_relative_error() < 2e-3 && hi.c2_relative_error() < 2e-3);
    assert!(hi.c1_relative_error() < lo.c1_relative_error() / 10.0);
    assert!((hi.c1_formula - 5f64.powf(3.5) / 16.0).abs() < 1e-10);
    assert!((hi.c2_formula - 3f64.powf(5.5) / 80.0).abs() < 1e-10);
}

#[test]
fn oscillatory_time_integral_matches_brute_force() {
    for &(omega, a, b) in &[(0.0, 1.0, 3.0), (0.3, 2.0, 50.0), (240.0, 400.0, 425.0), (-57.0, 1.0, 1.5), (3.0, 20.0, 21.0)] {
        // Composite Simpson.
        let n = 2_000_000;
        let h = (b - a) / n as f64;
        let f = |x: f64| Complex64::from_polar(1.0 / (x * x), -omega * x);
        let mut s = f(a) + f(b);
        for k in 1..n {
            s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let s = s * (h / 3.0);
        let v = inverse_square_oscillatory(omega, a, b);
        assert!((v - s).norm() < 1e-9 * s.norm().max(1e-6), "omega {omega}: {v} vs {s}");
    }
}

#[test]
fn linear_runs_have_zero_profile_derivative() {
    let g = Grid::new(64.0, 256).unwrap().shared();
    let u0 = Field::from_fn(&g, 0.0, |x| 0.1 * (-x * x / 8.0).exp());
    let cfg = SolverConfig::new(0.25, 4.0)
        .with_nonlinearity(Nonlinearity::Off)
        .with_schedule(SnapshotSchedule::explicit(vec![2.0, 4.0]));
    let run = evolve(&u0, &cfg).unwrap();
    let eq = ProfileEquation::new(Normalization::Equation).unwrap();
    let res = ode_residual(&run.snapshots[0].profile, &run.snapshots[1].profile, (0.5, 2.0), &eq).unwrap();
    assert!(!res.points.is_empty());
    for p in &res.points {
        assert!(p.lhs.norm() < 1e-13, "lhs {}", p.lhs);
        // Below |ξ| = t^{−1/5} the model terms are switched off.
        if p.xi.powi(5) * 2.0 > 1.0 {
            assert!(p.rhs.norm() > 0.0, "model is silent at xi = {}", p.xi);
        } else if p.xi.powi(5) * 4.0 < 1.0 {
            assert_eq!(p.rhs.norm(), 0.0);
        }
    }
    assert!(res.sampling_warning.is_some());
}
