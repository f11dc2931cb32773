use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinearPhase;
use crate::{Error, Result};

/// The three long-time regions of the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `x > 0` beyond the self-similar zone: fast decay.
    Decaying,
    /// `x ≤ −t^{1/5}`-ish: a single stationary frequency, modulated oscillation.
    Oscillatory,
    /// `|x| ≲ t^{1/5+}`: the profile follows a self-similar solution.
    SelfSimilar,
}

/// Leading-order stationary-phase value at one point of the oscillatory region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    /// `(5tξ₀³)^{-1/2}`.
    pub amplitude: f64,
    /// `−4tξ₀⁵ + π/4`, the carrier phase before the profile's own argument.
    pub phase: f64,
    /// `amplitude · Re{e^{i·phase} ĝ(ξ₀)}`.
    pub value: f64,
    pub stationary_point: f64,
    /// Exponent of `−x/t^{1/5}` in the remainder bound.
    pub error_exponent: f64,
    pub region: Region,
}

/// Remainder exponent of the leading stationary-phase term, in `−x/t^{1/5}`.
pub const OSCILLATORY_ERROR_EXPONENT: f64 = -9.0 / 20.0;

/// Leading stationary-phase term of `e^{t∂x⁵}g` at `(x, t)`.
///
/// Requires `t ≥ 1` and `x ≤ −t^{1/5}`.
pub fn stationary_phase_predict(ghat: &dyn Fn(f64) -> Complex64, x: f64, t: f64) -> Result<AsymptoticPrediction> {
    if !(t >= 1.0) || !(x <= -t.powf(0.2)) {
        return Err(Error::OutOfRegion(format!("(x, t) = ({x}, {t}) is not in x ≤ −t^(1/5), t ≥ 1")));
    }
    let xi0 = LinearPhase::new(x, t).stationary_point().expect("x < 0 has a stationary point");
    let amplitude = (5.0 * t * xi0.powi(3)).powf(-0.5);
    let phase = -4.0 * t * xi0.powi(5) + FRAC_PI_4;
    let value = amplitude * (Complex64::from_polar(1.0, phase) * ghat(xi0)).re;
    Ok(AsymptoticPrediction {
        amplitude,
        phase,
        value,
        stationary_point: xi0,
        error_exponent: OSCILLATORY_ERROR_EXPONENT,
        region: Region::Oscillatory,
    })
}
