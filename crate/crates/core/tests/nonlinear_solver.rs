use std::sync::Arc;

use qkdv::linear::free_evolve;
use qkdv::solver::{
    data_norm, evolve, scaling_symmetry_check, step, BoundaryPolicy, Nonlinearity, SnapshotSchedule, SolverConfig,
};
use qkdv::{Error, Field, FieldF32, Grid, GridF32};

fn grid() -> Arc<Grid> {
    Grid::new(32.0, 256).unwrap().shared()
}

fn bump(g: &Arc<Grid>, amp: f64) -> Field {
    Field::from_fn(g, 0.0, |x| amp * (-x * x / 4.0).exp() * (1.0 + 0.3 * x))
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    a.physical_view().iter().zip(b.physical_view().iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

#[test]
fn zero_data_stays_zero() {
    let g = grid();
    let u0 = Field::zeros(&g, 0.0);
    let run = evolve(&u0, &SolverConfig::new(0.1, 5.0)).unwrap();
    assert!(run.final_state.sup_norm() == 0.0);
    let one = step(&u0, 0.3, Nonlinearity::Defocusing).unwrap();
    assert!(one.sup_norm() == 0.0);
}

#[test]
fn linear_runs_match_the_free_flow() {
    let g = grid();
    let u0 = bump(&g, 1.0);
    let cfg = SolverConfig::new(0.125, 3.0).with_nonlinearity(Nonlinearity::Off).fixed();
    let run = evolve(&u0, &cfg).unwrap();
    let exact = free_evolve(&u0, 3.0);
    assert!(max_diff(&run.final_state, &exact) < 1e-13, "{}", max_diff(&run.final_state, &exact));
    let one = step(&u0, 0.25, Nonlinearity::Off).unwrap();
    assert!(max_diff(&one, &free_evolve(&u0, 0.25)) == 0.0);
}

/// A wide bump: its quintic spectrum sits where `dt·ξ⁵ ≪ 1`, so the
/// integrating-factor scheme is in its asymptotic regime, and the run ends
/// long before nonlinear steepening.
fn wide_bump(amp: f64) -> Field {
    let w = 16.0;
    let g = Grid::new(16.0 * w, 256).unwrap().shared();
    Field::from_fn(&g, 0.0, |x| amp * (-x * x / (2.0 * w * w)).exp() * (1.0 + 0.3 * x / w))
}

fn terminal(u0: &Field, dt: f64, t_end: f64) -> Field {
    let cfg = SolverConfig::new(dt, t_end).fixed().with_schedule(SnapshotSchedule::explicit(vec![]));
    evolve(u0, &cfg).unwrap().final_state
}

#[test]
fn time_stepping_is_fourth_order() {
    let u0 = wide_bump(1.0);
    let t_end = 5.0;
    let reference = terminal(&u0, 0.4 / 64.0, t_end);
    let dts = [0.2, 0.1, 0.05];
    let errs: Vec<f64> = dts.iter().map(|&dt| max_diff(&terminal(&u0, dt, t_end), &reference)).collect();
    let order = qkdv::fit::power_law(&dts, &errs).unwrap().slope;
    eprintln!("errors {errs:?}, fitted order {order:.3}");
    assert!((order - 4.0).abs() < 0.2, "order {order}");
}

#[test]
fn mass_and_hamiltonian_are_conserved() {
    let u0 = wide_bump(0.7);
    let run = evolve(&u0, &SolverConfig::new(0.2, 20.0)).unwrap();
    eprintln!(
        "mass drift {:.2e}, hamiltonian drift {:.2e}, alarms {:?}",
        run.ledger.max_mass_drift(),
        run.ledger.max_hamiltonian_drift(),
        run.ledger.alarms
    );
    assert!(run.ledger.max_mass_drift() < 1e-10);
    assert!(run.ledger.max_hamiltonian_drift() < 1e-8);
}

#[test]
fn reversal_returns_the_data() {
    let u0 = wide_bump(1.0);
    let dt = 0.2;
    let forward = terminal(&u0, dt, 2.0);
    let forward_err = max_diff(&forward, &terminal(&u0, dt / 8.0, 2.0));
    let cfg = SolverConfig::new(dt, 0.0).fixed().with_schedule(SnapshotSchedule::explicit(vec![]));
    let back = evolve(&forward, &cfg).unwrap().final_state;
    let back_err = max_diff(&back, &u0);
    eprintln!("forward error {forward_err:.3e}, round-trip error {back_err:.3e}");
    assert_eq!(back.time(), 0.0);
    assert!(back_err <= 10.0 * forward_err);
}

#[test]
fn scaling_symmetry_holds() {
    let g = grid();
    let u0 = bump(&g, 0.7);
    let cfg = SolverConfig::new(0.05, 1.0).fixed();
    let same = scaling_symmetry_check(&u0, 1.0, &cfg).unwrap();
    assert_eq!(same.max_abs, 0.0);
    for lambda in [2.0, 0.5] {
        let d = scaling_symmetry_check(&u0, lambda, &cfg).unwrap();
        eprintln!("lambda {lambda}: discrepancy {:.3e}", d.max_abs);
        assert!(d.max_abs < 1e-8);
    }
}

#[test]
fn snapshots_land_on_schedule() {
    let g = grid();
    let u0 = bump(&g, 0.3);
    let run = evolve(&u0, &SolverConfig::new(0.1, 8.0)).unwrap();
    let times: Vec<f64> = run.snapshots.iter().map(|s| s.state.time()).collect();
    let expect = SnapshotSchedule::geometric(1.0, 8.0, 4).times;
    assert_eq!(times.len(), expect.len());
    for (a, b) in times.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(run.final_state.time(), 8.0);
    assert!(run.snapshots.iter().all(|s| s.profile.provenance.run_id == "run"));
}

#[test]
fn smallness_gate_rejects_large_data() {
    let g = grid();
    let u0 = bump(&g, 2.0);
    let mut cfg = SolverConfig::new(0.1, 1.0);
    cfg.smallness = Some(0.5 * data_norm(&u0));
    assert!(matches!(evolve(&u0, &cfg), Err(Error::InvalidInput(_))));
}

#[test]
fn boundary_policy_aborts_or_warns() {
    let g = grid();
    let u0 = Field::from_fn(&g, 0.0, |x| 0.5 * (-(x - 30.0).powi(2)).exp());
    let mut cfg = SolverConfig::new(0.05, 0.5);
    cfg.boundary = BoundaryPolicy::Abort;
    assert!(matches!(evolve(&u0, &cfg), Err(Error::NumericalAbort { .. })));
    cfg.boundary = BoundaryPolicy::Warn;
    let run = evolve(&u0, &cfg).unwrap();
    assert!(run.ledger.alarms.iter().any(|a| a.starts_with("boundary")));
}

#[test]
fn blow_up_is_reported_as_an_abort() {
    let g = grid();
    let u0 = bump(&g, 6.0);
    let cfg = SolverConfig::new(0.5, 20.0).fixed();
    assert!(matches!(evolve(&u0, &cfg), Err(Error::NumericalAbort { .. })));
}

#[test]
fn single_precision_runs() {
    let g = GridF32::new(32.0, 128).unwrap().shared();
    let u0 = FieldF32::from_fn(&g, 0.0, |x| 0.5 * (-x * x / 4.0).exp());
    let run = evolve(&u0, &SolverConfig::new(0.05f32, 2.0)).unwrap();
    assert!(run.ledger.max_mass_drift() < 1e-4);
}
