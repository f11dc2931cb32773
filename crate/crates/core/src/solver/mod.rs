//! Integrating-factor RK4 time stepping for `u_t = ∂x⁵u + α u⁴u_x`, with
//! conservation monitoring, snapshot scheduling and a scaling cross-check.

mod evolve;
mod ledger;
mod stepper;
mod symmetry;

pub use evolve::{data_norm, evolve, evolve_with, Evolution, Snapshot};
pub use ledger::{ConservedLedger, LedgerEntry};
pub use stepper::{step, Stepper};
pub use symmetry::{scaling_symmetry_check, ScalingDiscrepancy};

use serde::{Deserialize, Serialize};

use crate::Real;

/// Sign of the quintic term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    /// `α = −1`: `u_t = ∂x⁵u − u⁴u_x`.
    #[default]
    Defocusing,
    /// `α = +1`.
    Focusing,
    /// Linear flow only.
    Off,
}

impl Nonlinearity {
    pub fn alpha(self) -> f64 {
        match self {
            Nonlinearity::Defocusing => -1.0,
            Nonlinearity::Focusing => 1.0,
            Nonlinearity::Off => 0.0,
        }
    }
}

/// What to do when the field reaches the edges of the box.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPolicy {
    Off,
    /// Record an alarm in the ledger and continue.
    #[default]
    Warn,
    /// Stop with a numerical abort.
    Abort,
}

/// Snapshot times, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSchedule {
    pub times: Vec<f64>,
}

impl SnapshotSchedule {
    /// `t₀·2^{k/per_octave}` up to `t_end`, plus `t_end` itself.
    pub fn geometric(t0: f64, t_end: f64, per_octave: u32) -> Self {
        let mut times = Vec::new();
        let mut k = 0;
        loop {
            let t = t0 * 2f64.powf(k as f64 / per_octave as f64);
            if t > t_end * (1.0 + 1e-12) {
                break;
            }
            times.push(t);
            k += 1;
        }
        times.push(t_end);
        Self::explicit(times)
    }

    /// `start, start + step, …` up to `end`, plus `end`.
    pub fn uniform(start: f64, step: f64, end: f64) -> Self {
        assert!(step > 0.0);
        let n = ((end - start) / step + 1e-9).floor() as usize;
        let mut times: Vec<f64> = (0..=n).map(|k| start + step * k as f64).collect();
        times.push(end);
        Self::explicit(times)
    }

    pub fn explicit(mut times: Vec<f64>) -> Self {
        times.retain(|t| t.is_finite());
        times.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        Self { times }
    }
}

/// Parameters of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T: Real> {
    /// Largest step; also the step when `adaptive` is off.
    pub dt0: T,
    pub t_end: T,
    /// Shrinks steps to `safety · stability / (ξ_max ‖u‖_∞⁴)` when adaptive.
    pub safety: T,
    /// Size of the RK4 stability interval on the imaginary axis.
    pub stability: T,
    pub adaptive: bool,
    pub nonlinearity: Nonlinearity,
    /// Relative drift of `∫u²` that raises an alarm.
    pub mass_alarm: T,
    /// Relative drift of the Hamiltonian that raises an alarm.
    pub hamiltonian_alarm: T,
    /// Record the conserved quantities every this many steps.
    pub ledger_every: usize,
    pub boundary: BoundaryPolicy,
    /// Largest tolerated `max_{|x| > (1−w)L} |u| / ‖u‖_∞`.
    pub boundary_threshold: T,
    /// Edge zone width `w` as a fraction of the half length.
    pub boundary_zone: T,
    /// Reject data whose `‖u₀‖_{H²} + ‖xu₀‖_{L²}` exceeds this.
    pub smallness: Option<T>,
    pub schedule: SnapshotSchedule,
    /// Identifier copied into snapshot provenance.
    pub run_id: String,
}

impl<T: Real> SolverConfig<T> {
    /// Defaults for a run to `t_end` with step `dt0`: adaptive control with
    /// safety 0.8, geometric snapshots from `t = 1` at four per octave.
    pub fn new(dt0: T, t_end: T) -> Self {
        let te = t_end.as_f64();
        Self {
            dt0,
            t_end,
            safety: T::lit(0.8),
            stability: T::lit(2.8),
            adaptive: true,
            nonlinearity: Nonlinearity::Defocusing,
            mass_alarm: T::lit(1e-10),
            hamiltonian_alarm: T::lit(1e-8),
            ledger_every: 1,
            boundary: BoundaryPolicy::Warn,
            boundary_threshold: T::lit(1e-6),
            boundary_zone: T::lit(0.05),
            smallness: None,
            schedule: if te >= 1.0 { SnapshotSchedule::geometric(1.0, te, 4) } else { SnapshotSchedule::explicit(vec![te]) },
            run_id: String::from("run"),
        }
    }

    /// Fixed steps of exactly `dt0`.
    pub fn fixed(mut self) -> Self {
        self.adaptive = false;
        self
    }

    pub fn with_schedule(mut self, schedule: SnapshotSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_nonlinearity(mut self, n: Nonlinearity) -> Self {
        self.nonlinearity = n;
        self
    }
}
