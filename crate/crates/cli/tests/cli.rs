use std::path::Path;
use std::process::{Command, Output};

use qkdv::orchestrator::{ExperimentConfig, GridConfig, InitialData, RunManifest, MANIFEST_FILE};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_quintic-kdv"));
    c.env_remove("QKDV_T_END");
    c
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Writes a small experiment file into `dir` and returns its path.
fn tiny_config(dir: &Path) -> std::path::PathBuf {
    let mut cfg = ExperimentConfig::reference();
    cfg.name = "tiny".into();
    cfg.grid = GridConfig { half_length: 128.0, n: 128, dealias: 3 };
    cfg.initial = InitialData::Gaussian { amplitude: 0.1, width: 6.0, center: 0.0 };
    cfg.solver.t_end = 4.0;
    cfg.diagnostics.regions = false;
    let path = dir.join("tiny.json");
    std::fs::write(&path, cfg.to_json().unwrap()).unwrap();
    path
}

#[test]
fn resonance_json_lists_the_catalog() {
    let o = bin().args(["resonance", "--xi", "1", "--format", "json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c0 = &doc["coefficients"]["c0"];
    assert_eq!(c0[0].as_f64(), Some(0.0));
    assert!((c0[1].as_f64().unwrap() + 0.005).abs() < 1e-15);
    let bare = bin().args(["resonance", "--normalization", "bare", "--format", "json"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&bare)).unwrap();
    assert!((doc["coefficients"]["c0"][1].as_f64().unwrap() + 0.025).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["resonance", "--xi", "abc"],
        vec!["resonance", "--xi", "0"],
        vec!["no-such-command"],
        vec!["--set", "n=7", "simulate"],
        vec!["--set", "bogus=1", "simulate"],
        vec!["--config", "/nonexistent/config.json", "simulate"],
    ] {
        let o = bin().args(&args).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = bin().env("QKDV_NOT_A_KEY", "1").args(["resonance"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_then_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tiny_config(tmp.path());
    let out = tmp.path().join("run");
    let o = bin()
        .env("QKDV_T_END", "3")
        .args(["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--set", "amplitude=0.05", "simulate"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().any(|l| l.starts_with("identity PASS")));
    let m = RunManifest::load(&out.join(MANIFEST_FILE)).unwrap();
    assert_eq!(m.snapshots.last().unwrap().t, 3.0);

    let o = bin().args(["verify", "--run", out.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().last(), Some("verified"));

    let o = bin().args(["--out", tmp.path().join("sel").to_str().unwrap(), "selfsim", "--run", out.to_str().unwrap(), "--from", "1"]).output().unwrap();
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));

    let snap = out.join(&m.snapshots[0].file.path);
    let mut bytes = std::fs::read(&snap).unwrap();
    bytes[40] ^= 0xff;
    std::fs::write(&snap, bytes).unwrap();
    let o = bin().args(["verify", "--run", out.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("INTEGRITY")));
    assert_eq!(stdout(&o).lines().last(), Some("not verified"));
}
