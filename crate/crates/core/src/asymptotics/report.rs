use serde::{Deserialize, Serialize};

use crate::linear::Region;
use crate::Result;

/// One station of a region check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationRow {
    pub t: f64,
    pub x: f64,
    pub measured: f64,
    pub predicted: f64,
    pub error: f64,
    pub budget: f64,
}

/// A named power-law fit `y ≈ prefactor · s^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub name: String,
    pub exponent: Option<f64>,
    pub prefactor: Option<f64>,
}

/// Outcome of a region-wise long-time check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub region: Region,
    pub rows: Vec<StationRow>,
    pub fits: Vec<ExponentFit>,
    /// Largest `error / budget` over the rows (0 without rows).
    pub worst_ratio: f64,
    pub notes: Vec<String>,
}

impl AsymptoticReport {
    pub fn new(region: Region, rows: Vec<StationRow>) -> Self {
        let worst_ratio = rows
            .iter()
            .map(|r| if r.budget > 0.0 { r.error / r.budget } else if r.error > 0.0 { f64::INFINITY } else { 0.0 })
            .fold(0.0, f64::max);
        Self { region, rows, fits: Vec::new(), worst_ratio, notes: Vec::new() }
    }

    pub fn fit(&self, name: &str) -> Option<&ExponentFit> {
        self.fits.iter().find(|f| f.name == name)
    }

    /// Per-station table with columns `t, x, measured, predicted, error, budget`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,measured,predicted,error,budget\n");
        for r in &self.rows {
            out.push_str(&format!("{:e},{:e},{:e},{:e},{:e},{:e}\n", r.t, r.x, r.measured, r.predicted, r.error, r.budget));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
