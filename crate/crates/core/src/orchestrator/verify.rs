//! Re-checking a finished run from its directory alone.

use std::path::Path;

use super::acceptance::acceptance_table;
use super::config::ExperimentConfig;
use super::manifest::{CheckRow, RunManifest, RunStatus, MANIFEST_FILE};
use super::run::analyze;
use super::snapshot::read_snapshot;
use crate::{Error, Field, Result};

/// A run directory read back: configuration, manifest and snapshot fields.
pub struct LoadedRun {
    pub config: ExperimentConfig,
    pub manifest: RunManifest,
    pub states: Vec<Field>,
}

/// Reads `config.json`, the manifest and every snapshot it lists. Each
/// snapshot's embedded checksum is verified while decoding.
pub fn load_run(dir: &Path) -> Result<LoadedRun> {
    let manifest = RunManifest::load(&dir.join(MANIFEST_FILE))?;
    let config = ExperimentConfig::load(&dir.join(&manifest.config.path))?;
    let mut states = Vec::with_capacity(manifest.snapshots.len());
    for s in &manifest.snapshots {
        let (_, field) = read_snapshot(&dir.join(&s.file.path))?;
        states.push(field);
    }
    Ok(LoadedRun { config, manifest, states })
}

/// Outcome of [`verify_run`].
pub struct Verification {
    /// Missing files and checksum mismatches.
    pub integrity: Vec<String>,
    /// Rows recomputed from the snapshots.
    pub rows: Vec<CheckRow>,
    /// Recomputed rows whose status differs from the recorded one.
    pub disagreements: Vec<String>,
    pub status: RunStatus,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.integrity.is_empty()
            && self.disagreements.is_empty()
            && self.status == RunStatus::Complete
            && self.rows.iter().all(CheckRow::passed)
    }
}

/// Checks file integrity and the configuration hash, then recomputes the
/// per-run checks from the snapshot files (and the acceptance table when the
/// run recorded one, working in `scratch`) and compares statuses with the
/// manifest.
pub fn verify_run(dir: &Path, scratch: &Path) -> Result<Verification> {
    let manifest = RunManifest::load(&dir.join(MANIFEST_FILE))?;
    let mut integrity = manifest.integrity_problems(dir);
    if !integrity.is_empty() {
        return Ok(Verification { integrity, rows: Vec::new(), disagreements: Vec::new(), status: manifest.status });
    }
    let run = load_run(dir)?;
    if run.config.hash()? != manifest.config_hash {
        integrity.push(format!("config.json hashes to {}, manifest records {}", run.config.hash()?, manifest.config_hash));
    }
    let ledger = manifest.ledger.clone().ok_or_else(|| Error::Format {
        path: dir.join(MANIFEST_FILE).display().to_string(),
        reason: format!("run is {:?} and has no ledger summary", manifest.status),
    })?;
    let mut rows = analyze(&run.config, &run.states, &ledger)?.checks;
    if run.config.diagnostics.acceptance {
        rows.extend(acceptance_table(&run.config, &run.states, &ledger, scratch));
    }
    let mut disagreements = Vec::new();
    for r in &rows {
        match manifest.checks.iter().find(|c| c.id == r.id) {
            Some(c) if c.status == r.status => {}
            Some(c) => disagreements.push(format!("{}: recorded {:?}, recomputed {:?}", r.id, c.status, r.status)),
            None => disagreements.push(format!("{}: not recorded", r.id)),
        }
    }
    for c in &manifest.checks {
        if !rows.iter().any(|r| r.id == c.id) {
            disagreements.push(format!("{}: recorded but not recomputed", c.id));
        }
    }
    Ok(Verification { integrity, rows, disagreements, status: manifest.status })
}
