//! Least-squares rate fits used by every convergence and decay check.

use serde::{Deserialize, Serialize};

/// Ordinary least-squares line `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms: f64,
    pub points: usize,
}

/// Fits a line through `(x, y)` pairs. Needs at least two distinct abscissae.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = x[..n].iter().sum::<f64>() / nf;
    let my = y[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if sxx <= 0.0 || !sxx.is_finite() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = ((0..n)
        .map(|i| (y[i] - slope * x[i] - intercept).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();
    Some(LineFit { slope, intercept, rms, points: n })
}

/// Power-law exponent of `y ~ x^p` from a log-log fit. Non-positive values
/// are skipped.
pub fn power_law(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .unzip();
    fit_line(&lx, &ly)
}

/// Upper envelope of an oscillating sampled curve: the maximum of `y` within
/// each of `bins` logarithmically spaced bins of `x`. Returns `(x, y)` at the
/// maxima.
pub fn log_binned_maxima(x: &[f64], y: &[f64], bins: usize) -> (Vec<f64>, Vec<f64>) {
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    if !(lo > 0.0 && hi > lo) || bins == 0 {
        return (vec![], vec![]);
    }
    let span = (hi / lo).ln();
    for (&a, &b) in x.iter().zip(y) {
        let k = (((a / lo).ln() / span) * bins as f64).floor() as usize;
        let k = k.min(bins - 1);
        if best[k].is_none_or(|(_, v)| b > v) {
            best[k] = Some((a, b));
        }
    }
    best.into_iter().flatten().unzip()
}
