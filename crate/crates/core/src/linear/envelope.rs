use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{oscillatory_quadrature, stationary_phase_predict, QuadratureOptions};
use crate::fit::{log_binned_maxima, power_law, LineFit};
use crate::Result;

/// Sampling window for [`dispersive_envelope_check`], in the similarity
/// variable `z = x/t^{1/5}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeOptions {
    pub z_min: f64,
    pub z_max: f64,
    pub samples: usize,
    /// Right-side sweep `z ∈ [right_from, right_to]` used for the spatial fit.
    pub right_from: f64,
    pub right_to: f64,
    pub right_samples: usize,
    pub quadrature: QuadratureOptions,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        Self {
            z_min: -6.0,
            z_max: 3.0,
            samples: 145,
            right_from: 1.0,
            right_to: 8.0,
            right_samples: 24,
            quadrature: QuadratureOptions::default(),
        }
    }
}

/// Measured decay of `e^{t∂x⁵}|∂x|^β g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub beta: f64,
    pub times: Vec<f64>,
    /// `sup_x |u(x, t)|` over the sampling window.
    pub sups: Vec<f64>,
    /// Location of each supremum in `x/t^{1/5}`.
    pub argmax_z: Vec<f64>,
    /// `sup_x |u|·⟨x/t^{1/5}⟩^{3/8−β/4}`.
    pub weighted_sups: Vec<f64>,
    /// The exponent the estimate predicts, `−(β+1)/5`.
    pub predicted_exponent: f64,
    pub time_fit: Option<LineFit>,
    pub weighted_time_fit: Option<LineFit>,
    /// Right-side sweep at the last time: `(z, |u|)`.
    pub right_side: Vec<(f64, f64)>,
    /// Power-law exponent of `|u|` in `z` on the right side.
    pub spatial_fit: Option<LineFit>,
}

/// Samples the linear evolution with the quadrature oracle, finds the
/// supremum at each time and fits its power law in `t`.
pub fn dispersive_envelope_check(
    ghat: &dyn Fn(f64) -> Complex64,
    times: &[f64],
    beta: f64,
    opts: &EnvelopeOptions,
) -> Result<EnvelopeFit> {
    let weight_power = 3.0 / 8.0 - beta / 4.0;
    let mut sups = Vec::new();
    let mut argmax_z = Vec::new();
    let mut weighted = Vec::new();
    for &t in times {
        let s = t.powf(0.2);
        let eval = |z: f64| -> Result<f64> {
            Ok(oscillatory_quadrature(ghat, z * s, t, beta, &opts.quadrature)?.value.abs())
        };
        let (zbest, vbest) = maximize(&eval, opts.z_min, opts.z_max, opts.samples)?;
        let wz = |z: f64| -> Result<f64> { Ok(eval(z)? * (1.0 + z * z).powf(0.5 * weight_power)) };
        let (_, wbest) = maximize(&wz, opts.z_min, opts.z_max, opts.samples)?;
        sups.push(vbest);
        argmax_z.push(zbest);
        weighted.push(wbest);
    }
    let mut right_side = Vec::new();
    if let Some(&t) = times.last() {
        let s = t.powf(0.2);
        let n = opts.right_samples.max(2);
        let ratio = (opts.right_to / opts.right_from).ln();
        for k in 0..n {
            let z = opts.right_from * (ratio * k as f64 / (n - 1) as f64).exp();
            let v = oscillatory_quadrature(ghat, z * s, t, beta, &opts.quadrature)?.value.abs();
            right_side.push((z, v));
        }
    }
    // Values at the tolerance floor carry no slope information.
    let floor = 100.0 * opts.quadrature.abs_tol;
    let (rz, rv): (Vec<f64>, Vec<f64>) = right_side.iter().filter(|p| p.1 > floor).cloned().unzip();
    Ok(EnvelopeFit {
        beta,
        times: times.to_vec(),
        time_fit: power_law(times, &sups),
        weighted_time_fit: power_law(times, &weighted),
        sups,
        argmax_z,
        weighted_sups: weighted,
        predicted_exponent: -(beta + 1.0) / 5.0,
        spatial_fit: if rz.len() >= 3 { power_law(&rz, &rv) } else { None },
        right_side,
    })
}

/// Grid scan followed by golden-section refinement around the best sample.
fn maximize(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64, samples: usize) -> Result<(f64, f64)> {
    let n = samples.max(3);
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, f(lo)?);
    for k in 1..n {
        let z = lo + h * k as f64;
        let v = f(z)?;
        if v > best.1 {
            best = (z, v);
        }
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..40 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    for (z, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (z, v);
        }
    }
    Ok(best)
}

/// Error of the leading stationary-phase term against the oracle along
/// `x = −z·t^{1/5}` for log-spaced `z ∈ [z_from, z_to]`.
///
/// The error oscillates, so the fit runs through its upper envelope (maxima
/// within `bins` log-spaced bins). Returns the fit and the raw `(z, error)`
/// samples.
pub fn stationary_phase_error_fit(
    ghat: &dyn Fn(f64) -> Complex64,
    t: f64,
    z_from: f64,
    z_to: f64,
    samples: usize,
    bins: usize,
    opts: &QuadratureOptions,
) -> Result<(Option<LineFit>, Vec<(f64, f64)>)> {
    let s = t.powf(0.2);
    let ratio = (z_to / z_from).ln();
    let n = samples.max(2);
    let mut raw = Vec::with_capacity(n);
    for k in 0..n {
        let z = z_from * (ratio * k as f64 / (n - 1) as f64).exp();
        let x = -z * s;
        let exact = oscillatory_quadrature(ghat, x, t, 0.0, opts)?.value;
        let pred = stationary_phase_predict(ghat, x, t)?.value;
        raw.push((z, (exact - pred).abs()));
    }
    let (z, e): (Vec<f64>, Vec<f64>) = raw.iter().cloned().unzip();
    let (bz, be) = log_binned_maxima(&z, &e, bins);
    Ok((power_law(&bz, &be), raw))
}
