use serde::{Deserialize, Serialize};

/// One row of conserved-quantity bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub t: f64,
    pub step: usize,
    pub dt: f64,
    /// `∫u²`.
    pub mass: f64,
    /// `∫ ½(∂x²u)² + (α/30) u⁶`.
    pub hamiltonian: f64,
    pub sup_norm: f64,
    /// Edge-zone maximum of `|u|` over `‖u‖_∞`.
    pub edge_ratio: f64,
}

/// History of the conserved quantities and the alarms raised along a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConservedLedger {
    pub entries: Vec<LedgerEntry>,
    pub alarms: Vec<String>,
}

impl ConservedLedger {
    pub fn initial(&self) -> Option<&LedgerEntry> {
        self.entries.first()
    }

    pub(crate) fn relative_drift(value: f64, reference: f64) -> f64 {
        if reference != 0.0 {
            ((value - reference) / reference).abs()
        } else {
            value.abs()
        }
    }

    /// Largest `|M(t) − M(0)| / M(0)` seen so far.
    pub fn max_mass_drift(&self) -> f64 {
        let Some(m0) = self.initial().map(|e| e.mass) else { return 0.0 };
        self.entries.iter().map(|e| Self::relative_drift(e.mass, m0)).fold(0.0, f64::max)
    }

    /// Largest `|H(t) − H(0)| / |H(0)|` seen so far.
    pub fn max_hamiltonian_drift(&self) -> f64 {
        let Some(h0) = self.initial().map(|e| e.hamiltonian) else { return 0.0 };
        self.entries.iter().map(|e| Self::relative_drift(e.hamiltonian, h0)).fold(0.0, f64::max)
    }

    pub fn max_edge_ratio(&self) -> f64 {
        self.entries.iter().map(|e| e.edge_ratio).fold(0.0, f64::max)
    }

    pub(crate) fn raise(&mut self, alarm: String) {
        if !self.alarms.iter().any(|a| a.split(':').next() == alarm.split(':').next()) {
            self.alarms.push(alarm);
        }
    }
}
