use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinearPhase;
use crate::spectral::smooth_step;
use crate::{Error, Result};

/// Tuning for [`oscillatory_quadrature`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    /// Target absolute error of the returned value.
    pub abs_tol: f64,
    /// Frequencies where `|ĝ|` is below this fraction of its maximum are dropped.
    pub support_rel: f64,
    /// Size of the non-stationary integration-by-parts parameter
    /// `t·ξ·|∂ξΦ|` at which the smooth high-frequency window starts. Larger
    /// values cost more panels and suppress the window error further.
    pub window_strength: f64,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, support_rel: 1e-16, window_strength: 2000.0, max_panels: 20_000_000 }
    }
}

/// Result of one oracle evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureValue {
    pub value: f64,
    /// Sum of per-panel embedded-rule differences; an upper estimate.
    pub error_estimate: f64,
    pub panels: usize,
    /// Upper end of the integration interval.
    pub upper_limit: f64,
    /// Start of the smooth cutoff, if one was used.
    pub window_start: Option<f64>,
}

struct Rules {
    high: Vec<(f64, f64)>,
    low: Vec<(f64, f64)>,
}

fn rules() -> &'static Rules {
    static R: OnceLock<Rules> = OnceLock::new();
    R.get_or_init(|| {
        let pairs = |n| GaussLegendre::new(n).expect("valid degree").as_node_weight_pairs().to_vec();
        Rules { high: pairs(16), low: pairs(9) }
    })
}

/// Edge of the numerical support of `ĝ` on `ξ > 0`: the first point past
/// which every sample stays below `rel·max|ĝ|`. Zero for vanishing data.
fn support_edge(ghat: &dyn Fn(f64) -> Complex64, rel: f64) -> f64 {
    let mut samples = Vec::with_capacity(1500);
    let mut xi = 1e-6;
    while xi < 1e6 {
        samples.push((xi, ghat(xi).norm()));
        xi *= 1.02;
    }
    let peak = samples.iter().map(|s| s.1).fold(ghat(0.0).norm(), f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    match samples.iter().rposition(|s| s.1 >= rel * peak) {
        Some(i) if i + 1 < samples.len() => samples[i + 1].0,
        Some(_) => 1e6,
        None => samples[0].0,
    }
}

/// Evaluates `e^{t∂x⁵}|∂x|^β g` at `(x, t)` for real `g` from its transform:
///
/// `√(2/π)·Re ∫₀^∞ e^{itΦ(ξ)} ξ^β ĝ(ξ) dξ`, with `Φ(ξ) = xξ/t + ξ⁵`.
///
/// Panels are sized so the phase turns by at most `π/2` on each, integrated
/// with a 16-point Gauss rule and checked against an embedded 9-point rule;
/// panels that disagree are bisected. Far above the stationary point the
/// integrand is rolled off with a `C^∞` window whose contribution is
/// suppressed by non-stationary phase.
pub fn oscillatory_quadrature(
    ghat: &dyn Fn(f64) -> Complex64,
    x: f64,
    t: f64,
    beta: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureValue> {
    if !(t > 0.0) || !x.is_finite() || !(0.0..=3.0).contains(&beta) {
        return Err(Error::InvalidInput(format!("need t > 0 and β in [0, 3], got t = {t}, β = {beta}")));
    }
    let phase = LinearPhase::new(x, t);
    let edge = support_edge(ghat, opts.support_rel);
    if edge == 0.0 {
        return Ok(QuadratureValue { value: 0.0, error_estimate: 0.0, panels: 0, upper_limit: 0.0, window_start: None });
    }
    let window_start = window_start(&phase, opts.window_strength);
    let (upper, window) = if 2.0 * window_start < edge { (2.0 * window_start, Some(window_start)) } else { (edge, None) };

    let integrand = |xi: f64| -> Complex64 {
        let w = match window {
            Some(s) => 1.0 - smooth_step((xi - s) / s),
            None => 1.0,
        };
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let amp = if beta == 0.0 { 1.0 } else { xi.powf(beta) };
        Complex64::from_polar(amp * w, phase.scaled(xi)) * ghat(xi)
    };

    let mut acc = Accumulator { sum: Complex64::new(0.0, 0.0), err: 0.0, panels: 0, max_panels: opts.max_panels };
    let cap = upper / 64.0;
    let mut a = 0.0;
    while a < upper {
        let mut h = cap.min(upper - a);
        // |Φ'| is monotone on ξ ≥ 0, so its panel maximum sits at an endpoint.
        for _ in 0..4 {
            let d = phase.derivative(a).abs().max(phase.derivative(a + h).abs());
            let limit = FRAC_PI_2 / (t * d).max(1e-300);
            if h <= limit {
                break;
            }
            h = limit;
        }
        let b = if upper - (a + h) < 1e-3 * h { upper } else { a + h };
        let tol = opts.abs_tol * (b - a) / upper;
        acc.panel(&integrand, a, b, tol, 0)?;
        a = b;
    }
    let value = (2.0 / PI).sqrt() * acc.sum.re;
    let error_estimate = (2.0 / PI).sqrt() * acc.err;
    if !(error_estimate <= opts.abs_tol.max(1e-14 * acc.sum.norm())) {
        return Err(Error::NoConvergence(format!(
            "quadrature error estimate {error_estimate:e} above tolerance {:e}",
            opts.abs_tol
        )));
    }
    Ok(QuadratureValue { value, error_estimate, panels: acc.panels, upper_limit: upper, window_start: window })
}

/// Smallest `ξ ≥ 1.5ξ₀` with `t·ξ·Φ'(ξ) ≥ Λ`; `ξ·Φ'` increases there.
fn window_start(phase: &LinearPhase, strength: f64) -> f64 {
    let lo0 = phase.stationary_point().map_or(0.0, |s| 1.5 * s);
    let g = |xi: f64| phase.t * xi * phase.derivative(xi);
    if g(lo0) >= strength && lo0 > 0.0 {
        return lo0;
    }
    let (mut lo, mut hi) = (lo0, lo0.max(1e-3));
    while g(hi) < strength {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < strength {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

struct Accumulator {
    sum: Complex64,
    err: f64,
    panels: usize,
    max_panels: usize,
}

impl Accumulator {
    fn panel(&mut self, f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32) -> Result<()> {
        self.panels += 1;
        if self.panels > self.max_panels {
            return Err(Error::NoConvergence(format!("more than {} panels", self.max_panels)));
        }
        let r = rules();
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let rule = |pairs: &[(f64, f64)]| pairs.iter().map(|&(n, w)| f(c + h * n) * w).sum::<Complex64>() * h;
        let hi = rule(&r.high);
        let lo = rule(&r.low);
        let diff = (hi - lo).norm();
        if diff <= tol.max(1e-17 * hi.norm()) || depth >= 60 {
            self.sum += hi;
            // The embedded difference bounds the 9-point error, so it is a
            // conservative estimate for the 16-point value we keep.
            self.err += diff;
            return Ok(());
        }
        self.panel(f, a, c, 0.5 * tol, depth + 1)?;
        self.panel(f, c, b, 0.5 * tol, depth + 1)
    }
}
