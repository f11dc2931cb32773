use std::path::Path;

use serde::{Deserialize, Serialize};

use super::snapshot::{file_sha256, write_atomic};
use crate::solver::ConservedLedger;
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// Written while the run is in progress; a crash leaves this behind.
    Running,
    Complete,
    Aborted,
}

/// A file in the run directory, by path relative to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

impl FileRecord {
    pub fn of(dir: &Path, relative: &str) -> Result<Self> {
        Ok(Self { path: relative.to_string(), sha256: file_sha256(&dir.join(relative))? })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub t: f64,
    pub step: usize,
    pub file: FileRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub entries: usize,
    pub mass_drift: f64,
    pub hamiltonian_drift: f64,
    pub max_edge_ratio: f64,
    pub alarms: Vec<String>,
}

impl From<&ConservedLedger> for LedgerSummary {
    fn from(l: &ConservedLedger) -> Self {
        Self {
            entries: l.entries.len(),
            mass_drift: l.max_mass_drift(),
            hamiltonian_drift: l.max_hamiltonian_drift(),
            max_edge_ratio: l.max_edge_ratio(),
            alarms: l.alarms.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not applicable to this run (e.g. no snapshots in the required window).
    Skipped,
}

/// One row of a pass/fail table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub id: String,
    pub title: String,
    pub status: CheckStatus,
    /// What was measured, human readable.
    pub measured: String,
    /// What it was compared with.
    pub threshold: String,
}

impl CheckRow {
    pub fn new(id: &str, title: &str, pass: bool, measured: String, threshold: &str) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            measured,
            threshold: threshold.into(),
        }
    }

    pub fn skipped(id: &str, title: &str, why: &str) -> Self {
        Self { id: id.into(), title: title.into(), status: CheckStatus::Skipped, measured: why.into(), threshold: String::new() }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    /// `ID PASS|FAIL|SKIP title: measured (threshold)`.
    pub fn line(&self) -> String {
        let tag = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        if self.threshold.is_empty() {
            format!("{} {tag} {}: {}", self.id, self.title, self.measured)
        } else {
            format!("{} {tag} {}: {} (need {})", self.id, self.title, self.measured, self.threshold)
        }
    }
}

/// Table as CSV with columns `id, status, title, measured, threshold`.
pub fn checks_csv(rows: &[CheckRow]) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
    let mut out = String::from("id,status,title,measured,threshold\n");
    for r in rows {
        let status = serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{}\n", r.id, status, quote(&r.title), quote(&r.measured), quote(&r.threshold)));
    }
    out
}

/// Index of everything a run wrote, with the checks it passed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub config_hash: String,
    pub code_version: String,
    pub seed: u64,
    pub status: RunStatus,
    pub failure: Option<String>,
    pub config: FileRecord,
    pub snapshots: Vec<SnapshotRecord>,
    pub reports: Vec<FileRecord>,
    pub ledger: Option<LedgerSummary>,
    pub checks: Vec<CheckRow>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format { path: path.display().to_string(), reason: e.to_string() })
    }

    pub fn files(&self) -> impl Iterator<Item = &FileRecord> {
        std::iter::once(&self.config).chain(self.snapshots.iter().map(|s| &s.file)).chain(&self.reports)
    }

    /// Problems with the referenced files: missing, or checksum mismatch.
    pub fn integrity_problems(&self, dir: &Path) -> Vec<String> {
        let mut problems = Vec::new();
        for f in self.files() {
            match file_sha256(&dir.join(&f.path)) {
                Ok(sum) if sum == f.sha256 => {}
                Ok(sum) => problems.push(format!("{}: checksum {sum} differs from recorded {}", f.path, f.sha256)),
                Err(e) => problems.push(format!("{}: {e}", f.path)),
            }
        }
        problems
    }

    pub fn all_passed(&self) -> bool {
        self.status == RunStatus::Complete && self.checks.iter().all(CheckRow::passed)
    }
}
