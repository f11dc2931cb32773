use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{accumulate_phase, modified_profiles, PhaseCorrection};
use crate::fit::power_law;
use crate::interp::UniformCubic;
use crate::{Error, Grid, Profile, Result};

/// Which frequencies a scattering analysis looks at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringOptions {
    /// `κ`, see [`super::phase_strength`].
    pub kappa: f64,
    /// Frequency interval considered.
    pub band: (f64, f64),
    /// Keep frequencies where `|f̂(t_end)|` is at least this fraction of its
    /// maximum over the interval.
    pub amplitude_fraction: f64,
    /// Keep frequencies with `|ξ|t₀^{1/5}` at least this, `t₀` the first
    /// snapshot time.
    pub min_scaled_frequency: f64,
    /// Loss `δ` in the Cauchy rate `(|ξ|t^{1/5})^{−(1/2−δ)}`.
    pub delta: f64,
}

impl ScatteringOptions {
    pub fn new(kappa: f64, band: (f64, f64)) -> Self {
        Self { kappa, band, amplitude_fraction: 0.5, min_scaled_frequency: 10.0, delta: 0.1 }
    }

    /// Time exponent the Cauchy differences should beat: `−(1/2 − δ)/5`.
    pub fn predicted_exponent(&self) -> f64 {
        -(0.5 - self.delta) / 5.0
    }
}

/// Band-wise change between two neighbouring snapshots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyStep {
    pub t0: f64,
    pub t1: f64,
    /// `max_band |w̃(t1) − w̃(t0)|`.
    pub modified: f64,
    /// `max_band |f̂(t1) − f̂(t0)|`.
    pub raw: f64,
    /// `max_band |arg(w̃(t1)/w̃(t0))|`.
    pub modified_phase: f64,
    /// `max_band |arg(f̂(t1)/f̂(t0))|`.
    pub raw_phase: f64,
    /// `max_band |A(t1) − A(t0)|`.
    pub total_phase: f64,
}

/// Limits of the modified profile and of the total phase, with their Cauchy
/// certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringLimit {
    pub kappa: f64,
    pub t_end: f64,
    /// Frequencies the certificates cover.
    pub band_xi: Vec<f64>,
    /// Grid frequencies in FFT order; the arrays below are indexed alike.
    pub xi: Vec<f64>,
    /// Last `w̃`.
    pub w_inf: Vec<Complex64>,
    /// Last `A = B + κ|f̂|⁴/(40tξ⁵)`.
    pub a_inf: Vec<f64>,
    /// `w∞ e^{−iA∞}`.
    pub f_inf: Vec<Complex64>,
    pub steps: Vec<CauchyStep>,
    /// Power-law exponent in `t` of the `w̃` differences; `None` when they
    /// vanish (linear flow) or there are too few.
    pub fitted_exponent: Option<f64>,
    pub predicted_exponent: f64,
    /// Raw over modified phase drift on the last step.
    pub drift_ratio: f64,
    /// Reasons the sequence does not look Cauchy on the band.
    pub non_cauchy: Vec<String>,
    pub warnings: Vec<String>,
}

impl ScatteringLimit {
    /// `|fitted exponent| ≥ (1/2 − δ)/5`, or the differences vanish.
    pub fn rate_consistent(&self) -> bool {
        match self.fitted_exponent {
            Some(p) => p <= self.predicted_exponent,
            None => self.steps.iter().all(|s| s.modified == 0.0),
        }
    }

    /// Cubic interpolant of `f∞` in `ξ`.
    pub fn f_inf_interpolant(&self, grid: &Grid) -> UniformCubic {
        let order = grid.ascending_order();
        let v = order.iter().map(|&i| self.f_inf[i]).collect();
        UniformCubic::new(grid.frequencies()[order[0]], grid.dxi(), v)
    }
}

fn total_phase(kappa: f64, b: &[f64], p: &Profile) -> Vec<f64> {
    b.iter()
        .zip(&p.fhat)
        .zip(p.grid.frequencies())
        .map(|((&b, f), &xi)| if xi == 0.0 { b } else { b + kappa * f.norm_sqr().powi(2) / (40.0 * p.t * xi.powi(5)) })
        .collect()
}

/// Builds `w̃` from the snapshots and reads off `w∞`, `A∞` and `f∞` at the
/// last time, together with band-wise Cauchy differences between
/// neighbouring snapshots and a power-law fit of their decay.
pub fn scattering_limit(snapshots: &[Profile], opts: &ScatteringOptions) -> Result<ScatteringLimit> {
    if snapshots.len() < 3 {
        return Err(Error::InvalidInput("need at least three snapshot times".into()));
    }
    let phase: PhaseCorrection = accumulate_phase(snapshots, opts.kappa)?;
    let w = modified_profiles(snapshots, &phase)?;
    let last = snapshots.last().expect("nonempty");
    let t0 = snapshots[0].t;
    let xi = phase.xi.clone();

    let in_range: Vec<usize> = (0..xi.len())
        .filter(|&i| xi[i] >= opts.band.0 && xi[i] <= opts.band.1 && xi[i] != 0.0)
        .filter(|&i| xi[i].abs() * t0.powf(0.2) >= opts.min_scaled_frequency)
        .collect();
    let peak = in_range.iter().map(|&i| last.fhat[i].norm()).fold(0.0, f64::max);
    let band: Vec<usize> = in_range.into_iter().filter(|&i| peak > 0.0 && last.fhat[i].norm() >= opts.amplitude_fraction * peak).collect();

    let totals: Vec<Vec<f64>> = snapshots.iter().zip(&phase.values).map(|(p, b)| total_phase(opts.kappa, b, p)).collect();
    let arg = |a: Complex64, b: Complex64| if a.norm() > 0.0 && b.norm() > 0.0 { (b / a).arg().abs() } else { 0.0 };
    let mut steps = Vec::new();
    for k in 0..snapshots.len() - 1 {
        let (p, q) = (&snapshots[k], &snapshots[k + 1]);
        let mut s = CauchyStep { t0: p.t, t1: q.t, modified: 0.0, raw: 0.0, modified_phase: 0.0, raw_phase: 0.0, total_phase: 0.0 };
        for &i in &band {
            s.modified = s.modified.max((w[k + 1].values[i] - w[k].values[i]).norm());
            s.raw = s.raw.max((q.fhat[i] - p.fhat[i]).norm());
            s.modified_phase = s.modified_phase.max(arg(w[k].values[i], w[k + 1].values[i]));
            s.raw_phase = s.raw_phase.max(arg(p.fhat[i], q.fhat[i]));
            s.total_phase = s.total_phase.max((totals[k + 1][i] - totals[k][i]).abs());
        }
        steps.push(s);
    }

    let ts: Vec<f64> = steps.iter().map(|s| s.t1).collect();
    let dw: Vec<f64> = steps.iter().map(|s| s.modified).collect();
    let fitted_exponent = if dw.iter().filter(|&&d| d > 0.0).count() >= 3 { power_law(&ts, &dw).map(|f| f.slope) } else { None };
    let end = steps.last().expect("at least two steps");
    let drift_ratio = if end.modified_phase > 0.0 { end.raw_phase / end.modified_phase } else if end.raw_phase > 0.0 { f64::INFINITY } else { 1.0 };

    let mut non_cauchy = Vec::new();
    if band.is_empty() {
        non_cauchy.push("no frequency satisfies the band conditions".to_string());
    }
    if let Some(p) = fitted_exponent {
        if p > opts.predicted_exponent() {
            non_cauchy.push(format!("w̃ differences decay like t^{p:.3}, slower than t^{:.3}", opts.predicted_exponent()));
        }
    }
    if end.modified > steps[0].modified {
        non_cauchy.push(format!("last w̃ difference {:.3e} exceeds the first {:.3e}; horizon too short", end.modified, steps[0].modified));
    }

    let w_inf = w.last().expect("nonempty").values.clone();
    let a_inf = totals.last().expect("nonempty").clone();
    let f_inf = w_inf.iter().zip(&a_inf).map(|(w, &a)| w * Complex64::from_polar(1.0, -a)).collect();
    Ok(ScatteringLimit {
        kappa: opts.kappa,
        t_end: last.t,
        band_xi: band.iter().map(|&i| xi[i]).collect(),
        xi,
        w_inf,
        a_inf,
        f_inf,
        steps,
        fitted_exponent,
        predicted_exponent: opts.predicted_exponent(),
        drift_ratio,
        non_cauchy,
        warnings: phase.warnings,
    })
}
