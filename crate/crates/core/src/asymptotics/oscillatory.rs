use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::report::{AsymptoticReport, ExponentFit, StationRow};
use crate::fit::power_law;
use crate::linear::{LinearPhase, Region};
use crate::{Error, Field, Result};

/// Modified-scattering prediction at one point of the oscillatory region:
///
/// ```text
/// (5tξ₀³)^{−1/2} Re{exp(−4itξ₀⁵ + iπ/4 + iκ|f∞(ξ₀)|⁴/(40tξ₀⁵)) f∞(ξ₀)}
/// ```
///
/// with `ξ₀ = (−x/5t)^{1/4}`. The nonlinear phase is evaluated at `ξ₀`,
/// the frequency every other factor uses.
pub fn modified_asymptotic_value(f_inf: &dyn Fn(f64) -> Complex64, kappa: f64, x: f64, t: f64) -> f64 {
    let xi0 = LinearPhase::new(x, t).stationary_point().expect("x < 0");
    let f = f_inf(xi0);
    let phase = -4.0 * t * xi0.powi(5) + FRAC_PI_4 + kappa * f.norm_sqr().powi(2) / (40.0 * t * xi0.powi(5));
    (5.0 * t * xi0.powi(3)).powf(-0.5) * (Complex64::from_polar(1.0, phase) * f).re
}

/// Left edge of the self-similar zone, `t^{1/5 + 4γ}`.
pub fn oscillatory_edge(t: f64, gamma: f64) -> f64 {
    t.powf(0.2 + 4.0 * gamma)
}

/// Compares a simulated field with [`modified_asymptotic_value`] at the
/// given stations. Each row's budget is `ε₀ t^{−1/5}(−x/t^{1/5})^{−9/20}`.
///
/// Rejects stations with `x > −t^{1/5+4γ}`.
pub fn oscillatory_prediction(
    state: &Field,
    stations: &[f64],
    f_inf: &dyn Fn(f64) -> Complex64,
    kappa: f64,
    eps0: f64,
    gamma: f64,
) -> Result<AsymptoticReport> {
    let t = state.time();
    if !(t >= 1.0) {
        return Err(Error::InvalidInput(format!("oscillatory check needs t ≥ 1, got {t}")));
    }
    let edge = oscillatory_edge(t, gamma);
    if let Some(&x) = stations.iter().find(|&&x| !(x <= -edge)) {
        return Err(Error::OutOfRegion(format!("station x = {x} is not below −t^(1/5+4γ) = {}", -edge)));
    }
    let measured = state.evaluate_at(stations);
    let rows: Vec<StationRow> = stations
        .iter()
        .zip(&measured)
        .map(|(&x, &m)| {
            let p = modified_asymptotic_value(f_inf, kappa, x, t);
            let s = -x / t.powf(0.2);
            StationRow { t, x, measured: m, predicted: p, error: (m - p).abs(), budget: eps0 * t.powf(-0.2) * s.powf(-0.45) }
        })
        .collect();
    let mut report = AsymptoticReport::new(Region::Oscillatory, rows);
    let (s, e): (Vec<f64>, Vec<f64>) = report.rows.iter().map(|r| (-r.x / t.powf(0.2), r.error)).unzip();
    let fit = power_law(&s, &e);
    report.fits.push(ExponentFit {
        name: "error_vs_scaled_x".into(),
        exponent: fit.map(|f| f.slope),
        prefactor: fit.map(|f| f.intercept.exp()),
    });
    report.notes.push("nonlinear phase |f∞|⁴/(40tξ⁵) evaluated at the stationary frequency ξ₀".into());
    Ok(report)
}
