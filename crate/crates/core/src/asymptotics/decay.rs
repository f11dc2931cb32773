use serde::{Deserialize, Serialize};

use super::report::{AsymptoticReport, ExponentFit, StationRow};
use crate::fit::{log_binned_maxima, power_law};
use crate::linear::Region;
use crate::{Field, Result};

/// Spatial decay exponent of the bound `|u| ≲ t^{−1/5}(x/t^{1/5})^{−7/8}`.
pub const DECAY_EXPONENT: f64 = -7.0 / 8.0;

/// Stations for the region checks, as `s = |x|/t^{1/5}` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledStations {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl ScaledStations {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count }
    }

    /// Geometrically spaced `s` values.
    pub fn scaled(&self) -> Vec<f64> {
        if self.count < 2 {
            return vec![self.lo; self.count];
        }
        let r = (self.hi / self.lo).ln() / (self.count - 1) as f64;
        (0..self.count).map(|k| self.lo * (r * k as f64).exp()).collect()
    }

    /// `x = sign · s t^{1/5}` at time `t`.
    pub fn at(&self, t: f64, sign: f64) -> Vec<f64> {
        self.scaled().into_iter().map(|s| sign * s * t.powf(0.2)).collect()
    }
}

/// Upper envelope exponent of `(s, y)` pairs: maxima over log-spaced bins,
/// then a log-log fit.
fn envelope_fit(name: &str, s: &[f64], y: &[f64]) -> ExponentFit {
    let (bs, by) = log_binned_maxima(s, y, 12);
    let fit = power_law(&bs, &by);
    ExponentFit { name: name.into(), exponent: fit.map(|f| f.slope), prefactor: fit.map(|f| f.intercept.exp()) }
}

/// Fits `|u(t, x)|·t^{1/5}` against `s = x/t^{1/5}` on the right of the
/// origin, pooling all snapshots. Rows carry the measured value, the
/// fitted envelope as the prediction, and `C s^{−7/8}` as the budget, `C`
/// being the smallest constant that bounds every row.
///
/// Also fits the envelopes of `|∂x^β u|·t^{(1+β)/5}` for `β = 0..=3` on the
/// oscillatory side `x = −s t^{1/5}`, where they grow like `s^{−3/8+β/4}`:
/// each derivative brings a factor `ξ₀ ∝ t^{−1/5}s^{1/4}`. These fits are
/// named `beta_0` … `beta_3`.
pub fn decay_region_check(states: &[Field], right: &ScaledStations, left: &ScaledStations) -> Result<AsymptoticReport> {
    let mut rows = Vec::new();
    let (mut ss, mut ys) = (Vec::new(), Vec::new());
    for state in states {
        let t = state.time();
        let xs = right.at(t, 1.0);
        for (x, u) in xs.iter().zip(state.evaluate_at(&xs)) {
            let s = x / t.powf(0.2);
            let m = u.abs() * t.powf(0.2);
            ss.push(s);
            ys.push(m);
            rows.push(StationRow { t, x: *x, measured: m, predicted: 0.0, error: 0.0, budget: 0.0 });
        }
    }
    let main = envelope_fit("spatial_decay", &ss, &ys);
    let bound = ss.iter().zip(&ys).map(|(s, y)| y * s.powf(-DECAY_EXPONENT)).fold(0.0, f64::max);
    for r in &mut rows {
        let s = r.x / r.t.powf(0.2);
        r.predicted = match (main.exponent, main.prefactor) {
            (Some(p), Some(c)) => c * s.powf(p),
            _ => 0.0,
        };
        r.error = (r.measured - r.predicted).abs();
        r.budget = bound * s.powf(DECAY_EXPONENT);
    }
    let mut report = AsymptoticReport::new(Region::Decaying, rows);
    report.worst_ratio = 0.0;
    report.fits.push(main);

    for beta in 0..=3u32 {
        let (mut s_all, mut y_all) = (Vec::new(), Vec::new());
        for state in states {
            let t = state.time();
            let xs = left.at(t, -1.0);
            let d = state.derivative(beta);
            for (x, u) in xs.iter().zip(d.evaluate_at(&xs)) {
                s_all.push(-x / t.powf(0.2));
                y_all.push(u.abs() * t.powf((1.0 + beta as f64) / 5.0));
            }
        }
        report.fits.push(envelope_fit(&format!("beta_{beta}"), &s_all, &y_all));
    }
    report.notes.push(format!("budget constant {bound:.3e} bounds every row by C·s^(−7/8)"));
    Ok(report)
}
