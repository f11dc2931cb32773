use std::path::Path;

use proptest::prelude::*;
use qkdv::orchestrator::{
    decode_snapshot, encode_snapshot, load_run, read_snapshot, run, verify_run, CheckStatus, ExperimentConfig, GridConfig, InitialData,
    RunManifest, RunStatus, ScheduleConfig, MANIFEST_FILE,
};
use qkdv::solver::BoundaryPolicy;
use qkdv::{Error, Field, Grid};

/// A run small enough for a unit test: 128 nodes up to `t = 4`.
fn small(name: &str) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::reference();
    cfg.name = name.into();
    cfg.grid = GridConfig { half_length: 128.0, n: 128, dealias: 3 };
    cfg.initial = InitialData::Gaussian { amplitude: 0.1, width: 6.0, center: 0.0 };
    cfg.solver.t_end = 4.0;
    cfg.diagnostics.regions = false;
    cfg
}

#[test]
fn config_json_round_trip() {
    for cfg in [ExperimentConfig::reference(), ExperimentConfig::packet(0.05), small("x")] {
        let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash().unwrap(), cfg.hash().unwrap());
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let mut doc: serde_json::Value = serde_json::from_str(&small("x").to_json().unwrap()).unwrap();
    doc["solver"]["dtt"] = 0.1.into();
    assert!(matches!(ExperimentConfig::from_json(&doc.to_string()), Err(Error::Config(_))));
}

#[test]
fn environment_overrides() {
    let mut cfg = small("x");
    let vars = [("QKDV_T_END", "12.5"), ("QKDV_AMPLITUDE", "0.05"), ("QKDV_NAME", "renamed"), ("PATH", "/bin")];
    cfg.apply_env(vars.iter().map(|(k, v)| (k.to_string(), v.to_string()))).unwrap();
    assert_eq!(cfg.solver.t_end, 12.5);
    assert_eq!(cfg.initial.amplitude(), 0.05);
    assert_eq!(cfg.name, "renamed");
    assert!(cfg.apply_env([("QKDV_BOGUS".to_string(), "1".to_string())]).is_err());
    // Invalid values leave the configuration unchanged.
    let before = cfg.clone();
    assert!(cfg.set("t_end", "-1").is_err());
    assert!(cfg.set("n", "7").is_err());
    assert_eq!(cfg, before);
}

#[test]
fn schedules_from_config() {
    let times = ScheduleConfig::Geometric { t0: 1.0, per_octave: 2 }.times(4.0).times;
    let expect = [1.0, 2f64.sqrt(), 2.0, 8f64.sqrt(), 4.0];
    assert_eq!(times.len(), expect.len());
    assert!(times.iter().zip(&expect).all(|(a, b)| (a - b).abs() < 1e-14), "{times:?}");
    let times = ScheduleConfig::Uniform { start: 1.0, step: 1.5 }.times(5.0).times;
    assert_eq!(times, vec![1.0, 2.5, 4.0, 5.0]);
    let cfg = small("x");
    assert_eq!(cfg.schedule.times(cfg.solver.t_end).times.last(), Some(&4.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn snapshots_round_trip(values in prop::collection::vec(-1.0f64..1.0, 32), t in 0.0f64..1e3, step in 0usize..100_000) {
        let g = Grid::new(5.0, 32).unwrap().shared();
        let u = Field::from_physical(&g, t, values).unwrap();
        let bytes = encode_snapshot(&u, "run", step).unwrap();
        let (h, v) = decode_snapshot(&bytes, "memory").unwrap();
        prop_assert_eq!(h.step, step);
        prop_assert_eq!(h.t, t);
        prop_assert_eq!(v.spectral_view().into_owned(), u.spectral_view().into_owned());
    }
}

#[test]
fn corrupted_snapshots_are_detected() {
    let g = Grid::new(5.0, 32).unwrap().shared();
    let u = Field::from_fn(&g, 1.0, |x| (-x * x).exp());
    let bytes = encode_snapshot(&u, "run", 3).unwrap();
    let mut flipped = bytes.clone();
    let last = flipped.len() - 3;
    flipped[last] ^= 0x40;
    assert!(matches!(decode_snapshot(&flipped, "memory"), Err(Error::Format { .. })));
    assert!(matches!(decode_snapshot(&bytes[..bytes.len() - 8], "memory"), Err(Error::Format { .. })));
    assert!(matches!(decode_snapshot(b"not a snapshot at all", "memory"), Err(Error::Format { .. })));
}

fn run_into(cfg: &ExperimentConfig, dir: &Path) -> RunManifest {
    run(cfg, dir).unwrap().0
}

#[test]
fn run_directory_layout_and_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("r");
    let cfg = small("layout");
    let m = run_into(&cfg, &dir);
    assert_eq!(m.status, RunStatus::Complete);
    assert!(m.all_passed(), "{:?}", m.checks);
    assert_eq!(m.config_hash, cfg.hash().unwrap());
    assert!(m.integrity_problems(&dir).is_empty());
    assert_eq!(RunManifest::load(&dir.join(MANIFEST_FILE)).unwrap(), m);
    let loaded = load_run(&dir).unwrap();
    assert_eq!(loaded.config, cfg);
    assert_eq!(loaded.states.len(), m.snapshots.len());
    let (_, last) = read_snapshot(&dir.join(&m.snapshots.last().unwrap().file.path)).unwrap();
    assert_eq!(last.time(), 4.0);

    let v = verify_run(&dir, &tmp.path().join("scratch")).unwrap();
    assert!(v.passed(), "{:?} {:?}", v.integrity, v.disagreements);

    // Tampering with a snapshot is caught by the manifest checksums.
    let snap = dir.join(&m.snapshots[1].file.path);
    let mut bytes = std::fs::read(&snap).unwrap();
    let k = bytes.len() - 1;
    bytes[k] ^= 1;
    std::fs::write(&snap, bytes).unwrap();
    let v = verify_run(&dir, &tmp.path().join("scratch")).unwrap();
    assert!(!v.passed());
    assert_eq!(v.integrity.len(), 1);
}

#[test]
fn zero_amplitude_run_completes() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small("zero");
    cfg.initial = InitialData::Gaussian { amplitude: 0.0, width: 4.0, center: 0.0 };
    let m = run_into(&cfg, tmp.path());
    assert_eq!(m.status, RunStatus::Complete);
    let ledger = m.ledger.unwrap();
    assert_eq!((ledger.mass_drift, ledger.hamiltonian_drift), (0.0, 0.0));
    assert!(m.checks.iter().all(|c| c.status != CheckStatus::Fail), "{:?}", m.checks);
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small("twice");
    let a = run_into(&cfg, &tmp.path().join("a"));
    let b = run_into(&cfg, &tmp.path().join("b"));
    assert_eq!(a, b);
    for f in a.files() {
        assert_eq!(std::fs::read(tmp.path().join("a").join(&f.path)).unwrap(), std::fs::read(tmp.path().join("b").join(&f.path)).unwrap());
    }
}

#[test]
fn aborted_runs_leave_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small("abort");
    cfg.grid = GridConfig { half_length: 8.0, n: 64, dealias: 3 };
    cfg.initial = InitialData::Gaussian { amplitude: 0.1, width: 1.0, center: 0.0 };
    cfg.solver.boundary = BoundaryPolicy::Abort;
    cfg.solver.t_end = 50.0;
    let err = run(&cfg, tmp.path()).unwrap_err();
    assert!(matches!(err, Error::NumericalAbort { .. }));
    let m = RunManifest::load(&tmp.path().join(MANIFEST_FILE)).unwrap();
    assert_eq!(m.status, RunStatus::Aborted);
    assert!(m.failure.is_some());
    assert!(m.integrity_problems(tmp.path()).is_empty());
}
