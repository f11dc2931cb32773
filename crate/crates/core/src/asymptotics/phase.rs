use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::resonance::Normalization;
use crate::solver::Nonlinearity;
use crate::{Error, Profile, Result};

/// Relative change of `|f̂|⁴` between neighbouring samples above which the
/// trapezoid accumulation is flagged as coarse.
const COARSE_CHANGE: f64 = 0.1;

/// Amplitudes below this fraction of the largest `|f̂|` are ignored by the
/// coarse-sampling check.
const NEGLIGIBLE: f64 = 1e-3;

/// Strength `κ` of the resonant self-interaction: the normalisation factor
/// of the profile equation, with the sign of the nonlinearity (zero for the
/// linear flow).
pub fn phase_strength(normalization: Normalization, nonlinearity: Nonlinearity) -> f64 {
    -nonlinearity.alpha() * normalization.factor()
}

/// The logarithmic phase `B(t, ξ) = κ/(40ξ⁵) ∫₁^t |f̂(s, ξ)|⁴ s^{−2} ds`,
/// accumulated over a sequence of profile snapshots. See [`phase_strength`]
/// for `κ`. The integrand is switched off while `|ξ| ≤ s^{−1/5}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCorrection {
    pub kappa: f64,
    /// Snapshot times.
    pub times: Vec<f64>,
    /// Grid frequencies in FFT order.
    pub xi: Vec<f64>,
    /// `B` at each snapshot time, indexed like `xi`.
    pub values: Vec<Vec<f64>>,
    /// Running `∫|f̂|⁴s^{−2}ds` per frequency at the last time; continue the
    /// accumulation from here with [`PhaseCorrection::extend`].
    pub integral: Vec<f64>,
    pub warnings: Vec<String>,
}

impl PhaseCorrection {
    /// `B` at the last snapshot.
    pub fn last(&self) -> &[f64] {
        self.values.last().map_or(&[], |v| v.as_slice())
    }

    /// Appends one later snapshot to the accumulation.
    pub fn extend(&mut self, prev: &Profile, next: &Profile) -> Result<()> {
        let t_last = *self.times.last().ok_or_else(|| Error::InvalidInput("empty phase correction".into()))?;
        if prev.t != t_last || next.t <= prev.t || prev.grid != next.grid {
            return Err(Error::InvalidInput("snapshots must continue the accumulated sequence on the same grid".into()));
        }
        let kappa = self.kappa;
        let big = prev.sup_norm().max(next.sup_norm());
        let mut coarse = 0usize;
        let mut b = Vec::with_capacity(self.xi.len());
        for (i, &xi) in self.xi.iter().enumerate() {
            let (g0, g1) = (prev.fhat[i].norm_sqr().powi(2), next.fhat[i].norm_sqr().powi(2));
            if xi != 0.0 {
                self.integral[i] += weighted_trapezoid(prev.t, g0, next.t, g1, xi.abs().powi(-5));
            }
            if prev.fhat[i].norm().max(next.fhat[i].norm()) > NEGLIGIBLE * big && (g1 - g0).abs() > COARSE_CHANGE * g0.max(g1) {
                coarse += 1;
            }
            b.push(if xi == 0.0 { 0.0 } else { kappa * self.integral[i] / (40.0 * xi.powi(5)) });
        }
        if coarse > 0 {
            self.warnings.push(format!(
                "|f̂|⁴ changes by more than {:.0}% at {coarse} frequencies between t = {} and t = {}",
                COARSE_CHANGE * 100.0,
                prev.t,
                next.t
            ));
        }
        self.times.push(next.t);
        self.values.push(b);
        Ok(())
    }
}

/// `∫_{max(t0, cut)}^{t1} g(s) s^{−2} ds` with `g` linear between `(t0, g0)`
/// and `(t1, g1)`. Exact for frozen `g`, so the closed form
/// `g(1/t0 − 1/t1)` comes out to rounding.
fn weighted_trapezoid(t0: f64, g0: f64, t1: f64, g1: f64, cut: f64) -> f64 {
    let a = t0.max(cut);
    if a >= t1 {
        return 0.0;
    }
    let slope = (g1 - g0) / (t1 - t0);
    let intercept = g0 - slope * t0;
    intercept * (1.0 / a - 1.0 / t1) + slope * (t1 / a).ln()
}

/// Accumulates `B` over snapshots at increasing times `≥ 1`. When the first
/// snapshot is later than `t = 1`, `|f̂|` is held at its first value on
/// `[1, t₀]`.
pub fn accumulate_phase(snapshots: &[Profile], kappa: f64) -> Result<PhaseCorrection> {
    let first = snapshots.first().ok_or_else(|| Error::InvalidInput("no snapshots".into()))?;
    if !(first.t >= 1.0) {
        return Err(Error::InvalidInput(format!("the phase integral starts at t = 1, first snapshot is at {}", first.t)));
    }
    let xi: Vec<f64> = first.grid.frequencies().to_vec();
    let integral: Vec<f64> = xi
        .iter()
        .zip(&first.fhat)
        .map(|(&k, f)| if k == 0.0 { 0.0 } else { weighted_trapezoid(1.0, f.norm_sqr().powi(2), first.t, f.norm_sqr().powi(2), k.abs().powi(-5)) })
        .collect();
    let b0 = xi
        .iter()
        .zip(&integral)
        .map(|(&k, &s)| if k == 0.0 { 0.0 } else { kappa * s / (40.0 * k.powi(5)) })
        .collect();
    let mut pc = PhaseCorrection { kappa, times: vec![first.t], xi, values: vec![b0], integral, warnings: Vec::new() };
    for w in snapshots.windows(2) {
        pc.extend(&w[0], &w[1])?;
    }
    Ok(pc)
}

/// `w̃ = e^{iB} f̂` at one snapshot time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModifiedProfile {
    pub t: f64,
    /// FFT order, like the profile it came from.
    pub values: Vec<Complex64>,
}

/// The modified profile at every snapshot of an accumulation.
pub fn modified_profiles(snapshots: &[Profile], phase: &PhaseCorrection) -> Result<Vec<ModifiedProfile>> {
    if snapshots.len() != phase.times.len() {
        return Err(Error::InvalidInput("phase correction and snapshots differ in length".into()));
    }
    Ok(snapshots
        .iter()
        .zip(&phase.values)
        .map(|(s, b)| ModifiedProfile {
            t: s.t,
            values: s.fhat.iter().zip(b).map(|(f, &b)| f * Complex64::from_polar(1.0, b)).collect(),
        })
        .collect())
}
