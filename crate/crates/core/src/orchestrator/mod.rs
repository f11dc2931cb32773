//! Experiment configuration, runs with on-disk snapshots and manifests, and
//! the acceptance table.

pub mod acceptance;
mod config;
mod manifest;
mod run;
mod snapshot;
mod verify;

pub use acceptance::acceptance_table;
pub use config::{
    DiagnosticsConfig, ExperimentConfig, GridConfig, InitialData, ScheduleConfig, SolverSettings, StationConfig, StationRange,
    ENV_PREFIX,
};
pub use manifest::{checks_csv, CheckRow, CheckStatus, FileRecord, LedgerSummary, RunManifest, RunStatus, SnapshotRecord, MANIFEST_FILE};
pub use run::{analyze, output_dir, run, ReportFile, RunAnalysis, IDENTITY_TAPER};
pub use snapshot::{decode_snapshot, encode_snapshot, file_sha256, read_snapshot, write_atomic, write_snapshot, SnapshotHeader};
pub use verify::{load_run, verify_run, LoadedRun, Verification};
