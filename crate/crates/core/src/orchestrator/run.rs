use std::path::{Path, PathBuf};

use serde_json::json;

use super::acceptance::{acceptance_table, exponent};
use super::config::ExperimentConfig;
use super::manifest::{checks_csv, CheckRow, FileRecord, LedgerSummary, RunManifest, RunStatus, SnapshotRecord};
use super::snapshot::{write_atomic, write_snapshot};
use crate::asymptotics::{
    decay_region_check, oscillatory_prediction, phase_strength, scattering_limit, self_similar_extract, ScatteringOptions,
    SelfSimilarOptions, DECAY_EXPONENT,
};
use crate::diagnostics::{edge_tapered, extract_profile, vector_field_identity_check};
use crate::solver::{evolve_with, ConservedLedger, Evolution};
use crate::{Field, Profile, Result};

/// A report file to be written into the run directory.
pub struct ReportFile {
    pub path: String,
    pub contents: Vec<u8>,
}

impl ReportFile {
    fn new(path: &str, contents: impl Into<Vec<u8>>) -> Self {
        Self { path: path.into(), contents: contents.into() }
    }
}

/// Checks and reports derived from one run's snapshots.
pub struct RunAnalysis {
    pub checks: Vec<CheckRow>,
    pub reports: Vec<ReportFile>,
}

fn ledger_csv(l: &ConservedLedger) -> String {
    let mut out = String::from("t,step,dt,mass,hamiltonian,sup_norm,edge_ratio\n");
    for e in &l.entries {
        out.push_str(&format!("{:e},{},{:e},{:e},{:e},{:e},{:e}\n", e.t, e.step, e.dt, e.mass, e.hamiltonian, e.sup_norm, e.edge_ratio));
    }
    out
}

/// The identity check sees the state tapered to `|x| ≲ 0.7L`; see
/// [`edge_tapered`].
pub const IDENTITY_TAPER: f64 = 0.7;

/// Runs the per-run diagnostics the configuration asks for on the snapshot
/// fields (in time order). Checks whose time window holds too few snapshots
/// are skipped.
pub fn analyze(cfg: &ExperimentConfig, states: &[Field], ledger: &LedgerSummary) -> Result<RunAnalysis> {
    let d = &cfg.diagnostics;
    let eps0 = cfg.initial.amplitude();
    let gamma = cfg.gamma();
    let nonlinearity = cfg.solver.nonlinearity;
    let kappa = phase_strength(d.normalization, nonlinearity);
    let mut checks = Vec::new();
    let mut reports = Vec::new();

    checks.push(CheckRow::new(
        "conservation",
        "mass and Hamiltonian drift",
        ledger.mass_drift < 1e-10 && ledger.hamiltonian_drift < 1e-8,
        format!("mass {:.2e}, hamiltonian {:.2e}", ledger.mass_drift, ledger.hamiltonian_drift),
        "< 1e-10 and < 1e-8",
    ));

    let late: Vec<&Field> = states.iter().filter(|s| s.time() >= 1.0).collect();
    if d.identity {
        let mut csv = String::from("t,relative,right_end\n");
        let mut worst = 0.0f64;
        for s in &late {
            let r = vector_field_identity_check(&edge_tapered(s, IDENTITY_TAPER)?, nonlinearity)?;
            worst = worst.max(r.relative);
            csv.push_str(&format!("{:e},{:e},{:e}\n", r.t, r.relative, r.right_end));
        }
        reports.push(ReportFile::new("reports/identity.csv", csv));
        checks.push(if late.is_empty() {
            CheckRow::skipped("identity", "vector-field identity residual", "no snapshot at t ≥ 1")
        } else {
            CheckRow::new("identity", "vector-field identity residual", worst < 1e-6, format!("max relative {worst:.2e}"), "< 1e-6")
        });
    }

    let profiles: Vec<Profile> = late.iter().map(|s| extract_profile(*s)).collect();
    if let Some([lo, hi]) = d.scattering_band {
        let subset: Vec<Profile> = profiles.iter().filter(|p| p.t >= d.scattering_from).cloned().collect();
        if subset.len() >= 3 {
            let lim = scattering_limit(&subset, &ScatteringOptions::new(kappa, (lo, hi)))?;
            reports.push(ReportFile::new(
                "reports/scattering.json",
                serde_json::to_string_pretty(&json!({
                    "kappa": lim.kappa,
                    "band_xi": lim.band_xi,
                    "steps": lim.steps,
                    "fitted_exponent": lim.fitted_exponent,
                    "predicted_exponent": lim.predicted_exponent,
                    "drift_ratio": lim.drift_ratio,
                    "non_cauchy": lim.non_cauchy,
                    "warnings": lim.warnings,
                }))?,
            ));
            checks.push(CheckRow::new(
                "scattering",
                "modified profile converges faster than the raw profile",
                lim.rate_consistent() && lim.drift_ratio > 3.0 && lim.non_cauchy.is_empty(),
                format!("exponent {}, drift ratio {:.2}", exponent(lim.fitted_exponent), lim.drift_ratio),
                &format!("exponent ≤ {:.2}, ratio > 3", lim.predicted_exponent),
            ));
        } else {
            checks.push(CheckRow::skipped("scattering", "modified profile converges faster than the raw profile", "fewer than three snapshots"));
        }
    }

    if d.regions {
        let [t_lo, t_hi] = d.oscillatory_times;
        let window: Vec<&Field> = late.iter().copied().filter(|s| s.time() >= t_lo && s.time() <= t_hi).collect();
        if profiles.len() >= 3 && !window.is_empty() {
            let lim = scattering_limit(&profiles, &ScatteringOptions { min_scaled_frequency: 0.0, ..ScatteringOptions::new(kappa, (f64::MIN, f64::MAX)) })?;
            let interp = lim.f_inf_interpolant(states[0].grid());
            let stations = cfg.stations.oscillatory.stations();
            let mut rows = Vec::new();
            let mut notes = Vec::new();
            for s in &window {
                let r = oscillatory_prediction(s, &stations.at(s.time(), -1.0), &|x| interp.eval(x), kappa, eps0, gamma)?;
                rows.extend(r.rows);
                notes = r.notes;
            }
            let mut report = crate::asymptotics::AsymptoticReport::new(crate::linear::Region::Oscillatory, rows);
            report.notes = notes;
            reports.push(ReportFile::new("reports/oscillatory.csv", report.to_csv()));
            reports.push(ReportFile::new("reports/oscillatory.json", report.to_json()?));
            checks.push(CheckRow::new(
                "oscillatory",
                "modified-scattering asymptotics in the oscillatory region",
                report.worst_ratio <= 3.0,
                format!("worst error/budget {:.3} over {} stations", report.worst_ratio, report.rows.len()),
                "≤ 3",
            ));
        } else {
            checks.push(CheckRow::skipped("oscillatory", "modified-scattering asymptotics in the oscillatory region", "no snapshots in the time window"));
        }

        let selfsim: Vec<Field> = late.iter().filter(|s| s.time() >= d.self_similar_from).map(|s| (*s).clone()).collect();
        if selfsim.len() >= 3 {
            let opts = SelfSimilarOptions { gamma_constant: d.gamma_constant, nonlinearity, ..SelfSimilarOptions::new(eps0) };
            let frame = self_similar_extract(&selfsim, &opts)?;
            reports.push(ReportFile::new("reports/self_similar.json", serde_json::to_string_pretty(&frame)?));
            let in_range = frame.q_sup >= eps0 / 10.0 && frame.q_sup <= 10.0 * eps0;
            let decays = frame.residual_exponent.is_none_or(|p| p <= -0.05);
            checks.push(CheckRow::new(
                "self_similar",
                "self-similar profile near the origin",
                frame.cauchy_monotone() && in_range && decays,
                format!(
                    "Cauchy differences monotone {}, sup Q {:.4}, residual exponent {}",
                    frame.cauchy_monotone(),
                    frame.q_sup,
                    exponent(frame.residual_exponent)
                ),
                "monotone, sup Q in [ε₀/10, 10ε₀], exponent ≤ −0.05",
            ));

            let report = decay_region_check(&selfsim, &cfg.stations.decay.stations(), &cfg.stations.derivative.stations())?;
            reports.push(ReportFile::new("reports/decay.csv", report.to_csv()));
            reports.push(ReportFile::new("reports/decay.json", report.to_json()?));
            let spatial = report.fit("spatial_decay").and_then(|f| f.exponent);
            let betas: Vec<Option<f64>> = (0..4).map(|b| report.fit(&format!("beta_{b}")).and_then(|f| f.exponent)).collect();
            let ordered = betas.windows(2).all(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => b > a,
                _ => true,
            });
            checks.push(CheckRow::new(
                "decay",
                "spatial decay on the right and derivative envelope ordering",
                spatial.is_none_or(|p| p <= DECAY_EXPONENT + 0.1) && ordered,
                format!(
                    "spatial exponent {}, derivative exponents [{}]",
                    exponent(spatial),
                    betas.iter().map(|b| exponent(*b)).collect::<Vec<_>>().join(", ")
                ),
                "≤ −0.775, increasing in the derivative order",
            ));
        } else {
            checks.push(CheckRow::skipped("self_similar", "self-similar profile near the origin", "fewer than three snapshots"));
            checks.push(CheckRow::skipped("decay", "spatial decay on the right and derivative envelope ordering", "fewer than three snapshots"));
        }
    }
    Ok(RunAnalysis { checks, reports })
}

/// Where a run writes: the configured output directory, else `runs/<name>`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from("runs").join(&cfg.name))
}

/// Executes a configuration: streams snapshots to `dir/snapshots`, keeps
/// `dir/manifest.json` current after every snapshot, runs the diagnostics
/// and writes reports. On a solver abort the manifest is left with status
/// `aborted` and the error is returned.
pub fn run(cfg: &ExperimentConfig, dir: &Path) -> Result<(RunManifest, Evolution<f64>)> {
    cfg.validate()?;
    std::fs::create_dir_all(dir.join("snapshots"))?;
    let config_text = cfg.to_json()? + "\n";
    write_atomic(&dir.join("config.json"), config_text.as_bytes())?;
    let mut manifest = RunManifest {
        name: cfg.name.clone(),
        config_hash: cfg.hash()?,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        status: RunStatus::Running,
        failure: None,
        config: FileRecord::of(dir, "config.json")?,
        snapshots: Vec::new(),
        reports: Vec::new(),
        ledger: None,
        checks: Vec::new(),
    };
    manifest.write(dir)?;

    let grid = cfg.build_grid()?;
    let u0 = cfg.initial_field(&grid)?;
    let solver = cfg.solver_config();
    let mut observer = |snap: &crate::solver::Snapshot<f64>| -> Result<()> {
        let rel = format!("snapshots/{:04}.snap", manifest.snapshots.len());
        write_snapshot(&dir.join(&rel), &snap.state, &cfg.name, snap.step)?;
        manifest.snapshots.push(SnapshotRecord { t: snap.state.time(), step: snap.step, file: FileRecord::of(dir, &rel)? });
        manifest.write(dir)
    };
    let evolution = match evolve_with(&u0, &solver, true, &mut observer) {
        Ok(e) => e,
        Err(e) => {
            manifest.status = RunStatus::Aborted;
            manifest.failure = Some(e.to_string());
            manifest.write(dir)?;
            return Err(e);
        }
    };

    let ledger = LedgerSummary::from(&evolution.ledger);
    let states: Vec<Field> = evolution.snapshots.iter().map(|s| s.state.clone()).collect();
    let mut analysis = analyze(cfg, &states, &ledger)?;
    analysis.reports.insert(0, ReportFile::new("reports/ledger.csv", ledger_csv(&evolution.ledger)));
    if cfg.diagnostics.acceptance {
        let scratch = dir.join("scratch");
        let rows = acceptance_table(cfg, &states, &ledger, &scratch);
        let _ = std::fs::remove_dir_all(&scratch);
        analysis.checks.extend(rows);
    }
    analysis.reports.push(ReportFile::new("reports/checks.csv", checks_csv(&analysis.checks)));
    analysis.reports.push(ReportFile::new("reports/checks.json", serde_json::to_string_pretty(&analysis.checks)?));
    for r in &analysis.reports {
        write_atomic(&dir.join(&r.path), &r.contents)?;
        manifest.reports.push(FileRecord::of(dir, &r.path)?);
    }
    manifest.ledger = Some(ledger);
    manifest.checks = analysis.checks;
    manifest.status = RunStatus::Complete;
    manifest.write(dir)?;
    Ok((manifest, evolution))
}

