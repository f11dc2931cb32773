use serde::{Deserialize, Serialize};

use crate::fit::power_law;
use crate::solver::Nonlinearity;
use crate::{Error, Field, Result};

/// `γ = (1/10 − Cε₀^{2/5})/5`, the exponent that sets the region edges.
pub fn gamma(eps0: f64, c: f64) -> f64 {
    (0.1 - c * eps0.powf(0.4)) / 5.0
}

/// Default `C` in [`gamma`]: makes `γ = 1/100` at `ε₀ = 0.1`.
pub const GAMMA_CONSTANT: f64 = 0.125_594_321_575_479_6;

/// Settings of [`self_similar_extract`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarOptions {
    pub eps0: f64,
    /// `C` in [`gamma`].
    pub gamma_constant: f64,
    /// Samples across the central window.
    pub samples: usize,
    pub nonlinearity: Nonlinearity,
}

impl SelfSimilarOptions {
    pub fn new(eps0: f64) -> Self {
        Self { eps0, gamma_constant: GAMMA_CONSTANT, samples: 201, nonlinearity: Nonlinearity::Defocusing }
    }

    pub fn gamma(&self) -> f64 {
        gamma(self.eps0, self.gamma_constant)
    }
}

/// The rescaled field `v(t, X) = t^{1/5} u(t, X t^{1/5})` on the central
/// window at one time, with the profile-equation residual there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaledSample {
    pub t: f64,
    /// Half-width `t^{4γ}` of the window.
    pub window: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// `‖∂⁴v + Xv/5 + (α/5)v⁵‖_{L²(window)}`.
    pub residual: f64,
}

/// `‖v(t_k) − v(t_{k+1})‖_{L^∞}` on the smaller of the two windows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyDifference {
    pub t0: f64,
    pub t1: f64,
    pub difference: f64,
}

/// The self-similar frame and its certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarFrame {
    pub gamma: f64,
    pub samples: Vec<RescaledSample>,
    pub cauchy: Vec<CauchyDifference>,
    /// `v` at the latest time: the extracted `Q`.
    pub q_x: Vec<f64>,
    pub q: Vec<f64>,
    pub q_sup: f64,
    /// Power-law exponent in `t` of the residual.
    pub residual_exponent: Option<f64>,
    pub warnings: Vec<String>,
}

impl SelfSimilarFrame {
    /// Strictly decreasing differences; an identically vanishing sequence
    /// (zero data) also counts.
    pub fn cauchy_monotone(&self) -> bool {
        self.cauchy.windows(2).all(|w| w[1].difference < w[0].difference || (w[0].difference == 0.0 && w[1].difference == 0.0))
    }
}

fn rescale(state: &Field, xs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let t = state.time();
    let s = t.powf(0.2);
    let y: Vec<f64> = xs.iter().map(|&x| x * s).collect();
    let v = state.evaluate_at(&y).into_iter().map(|u| u * s).collect();
    let d4 = state.derivative(4).evaluate_at(&y).into_iter().map(|u| u * t).collect();
    (v, d4)
}

fn window_points(w: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| -w + 2.0 * w * k as f64 / (n - 1) as f64).collect()
}

/// Rescales each snapshot to `v(t, X) = t^{1/5}u(t, Xt^{1/5})` on
/// `|X| ≤ t^{4γ}` by trigonometric interpolation, takes `Q` as the latest
/// `v`, and measures the Cauchy differences and the residual of
/// `Q'''' + XQ/5 + (α/5)Q⁵ = 0`, the equation an exact self-similar solution
/// `t^{−1/5}Q(x/t^{1/5})` of `u_t = ∂x⁵u + αu⁴u_x` satisfies.
pub fn self_similar_extract(states: &[Field], opts: &SelfSimilarOptions) -> Result<SelfSimilarFrame> {
    if states.len() < 3 {
        return Err(Error::InvalidInput("need at least three snapshot times".into()));
    }
    if states.windows(2).any(|w| !(w[1].time() > w[0].time())) || !(states[0].time() >= 1.0) {
        return Err(Error::InvalidInput("snapshots must be at increasing times ≥ 1".into()));
    }
    if opts.samples < 5 {
        return Err(Error::InvalidInput("need at least five window samples".into()));
    }
    let gamma = opts.gamma();
    let alpha = opts.nonlinearity.alpha();
    let mut warnings = Vec::new();
    let mut samples = Vec::new();
    for state in states {
        let t = state.time();
        let w = t.powf(4.0 * gamma);
        let reach = w * t.powf(0.2);
        if reach > 0.9 * state.grid().half_length() {
            warnings.push(format!("window reaches |x| = {reach:.3e} at t = {t}, close to the box edge"));
        }
        let x = window_points(w, opts.samples);
        let (v, d4) = rescale(state, &x);
        let h = x[1] - x[0];
        let r2: Vec<f64> = (0..x.len()).map(|k| (d4[k] + x[k] * v[k] / 5.0 + alpha / 5.0 * v[k].powi(5)).powi(2)).collect();
        let integral = h * (r2.iter().sum::<f64>() - 0.5 * (r2[0] + r2[r2.len() - 1]));
        samples.push(RescaledSample { t, window: w, x, v, residual: integral.sqrt() });
    }
    let mut cauchy = Vec::new();
    for k in 0..states.len() - 1 {
        let (a, b) = (&states[k], &states[k + 1]);
        let w = samples[k].window.min(samples[k + 1].window);
        let x = window_points(w, opts.samples);
        let (va, _) = rescale(a, &x);
        let (vb, _) = rescale(b, &x);
        let difference = va.iter().zip(&vb).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        cauchy.push(CauchyDifference { t0: a.time(), t1: b.time(), difference });
    }
    let (ts, rs): (Vec<f64>, Vec<f64>) = samples.iter().map(|s| (s.t, s.residual)).unzip();
    let residual_exponent = power_law(&ts, &rs).map(|f| f.slope);
    let last = samples.last().expect("nonempty");
    let q_sup = last.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(SelfSimilarFrame {
        gamma,
        q_x: last.x.clone(),
        q: last.v.clone(),
        q_sup,
        samples,
        cauchy,
        residual_exponent,
        warnings,
    })
}
