use std::f64::consts::PI;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::catalog::{find_stationary_points, SearchOptions};
use super::coefficients::{derive_resonance_coefficients, Normalization, ResonanceCoefficients};
use crate::{Error, Profile, Result};

/// `∫_a^b e^{−iωs} s^{−2} ds` for `0 < a ≤ b`.
///
/// Far from `ω = 0` the integral is summed from its integration-by-parts
/// series at both ends; otherwise composite Gauss–Legendre with panels of at
/// most one radian of phase.
pub fn inverse_square_oscillatory(omega: f64, a: f64, b: f64) -> Complex64 {
    assert!(a > 0.0 && b >= a, "need 0 < a <= b");
    if b == a {
        return Complex64::new(0.0, 0.0);
    }
    if omega.abs() * a >= 40.0 {
        // term_k(s) = e^{−iωs} (k+1)! s^{−k−2} / (−iω)^{k+1}
        let end = |s: f64| {
            let base = Complex64::from_polar(1.0, -omega * s);
            let q = Complex64::new(0.0, -omega * s);
            let mut term = base / (q * s);
            let mut sum = term;
            for k in 1..60 {
                let next = term * ((k + 1) as f64) / q;
                if next.norm() >= term.norm() {
                    break;
                }
                term = next;
                sum += term;
                if term.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            sum
        };
        return end(b) - end(a);
    }
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let rule = RULE.get_or_init(|| GaussLegendre::new(12).expect("valid degree").as_node_weight_pairs().to_vec());
    // Panels graded geometrically so s^{−2} is resolved as well as the phase.
    let by_phase = (omega.abs() * (b - a)).ceil() as usize;
    let by_ratio = ((b / a).ln() / 0.5).ceil() as usize;
    let panels = by_phase.max(by_ratio).max(1);
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + (b - a) * p as f64 / panels as f64;
        let hi = a + (b - a) * (p + 1) as f64 / panels as f64;
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for &(x, w) in rule {
            let s = mid + half * x;
            sum += Complex64::from_polar(w * half / (s * s), -omega * s);
        }
    }
    sum
}

/// The three leading terms of the profile equation at one frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeResidualPoint {
    pub xi: f64,
    /// `(f̂(t_b) − f̂(t_a))/(t_b − t_a)`.
    pub lhs: Complex64,
    /// Interval average of all three leading terms.
    pub rhs: Complex64,
    /// Interval average of the two oscillating terms only.
    pub rhs_without_leading: Complex64,
    pub residual: f64,
    pub residual_without_leading: f64,
}

/// Finite-difference check of the profile equation between two snapshots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub t_start: f64,
    pub t_end: f64,
    pub normalization: Normalization,
    /// Set when `Δt·|ξ|⁵ ≥ π/8` somewhere in the band. The right side is
    /// averaged exactly over the interval, so this is informational.
    pub sampling_warning: Option<String>,
    pub points: Vec<OdeResidualPoint>,
}

/// Coefficients of the profile equation for both signs of `ξ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEquation {
    pub positive: ResonanceCoefficients,
    pub negative: ResonanceCoefficients,
}

impl ProfileEquation {
    pub fn new(normalization: Normalization) -> Result<Self> {
        let opts = SearchOptions::default();
        Ok(Self {
            positive: derive_resonance_coefficients(&find_stationary_points(1.0, &opts)?, normalization)?,
            negative: derive_resonance_coefficients(&find_stationary_points(-1.0, &opts)?, normalization)?,
        })
    }

    pub fn normalization(&self) -> Normalization {
        self.positive.normalization
    }

    fn coefficients(&self, xi: f64) -> &ResonanceCoefficients {
        if xi > 0.0 {
            &self.positive
        } else {
            &self.negative
        }
    }
}

/// Compares the centred difference of `f̂` between two snapshots of one run
/// with the interval average of the right side of the profile equation, at
/// every grid frequency with `band.0 ≤ ξ ≤ band.1`.
///
/// The right side uses `f̂` at the interval midpoint (the mean of the two
/// snapshots, interpolated for `ξ/5` and `ξ/3`); its time dependence
/// `s^{−2}e^{−isΨ_a}` is integrated exactly, restricted to the times where
/// `|ξ| > s^{−1/5}`.
pub fn ode_residual(a: &Profile, b: &Profile, band: (f64, f64), equation: &ProfileEquation) -> Result<OdeResidual> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    if !(b.t > a.t && a.t > 0.0) {
        return Err(Error::InvalidInput("snapshots must be at increasing positive times".into()));
    }
    let dt = b.t - a.t;
    let (ia, ib) = (a.interpolant(), b.interpolant());
    let mid = |x: f64| (ia.eval(x) + ib.eval(x)) * 0.5;
    let mut points = Vec::new();
    let mut worst = 0.0f64;
    for (i, &xi) in a.grid.frequencies().iter().enumerate() {
        if xi == 0.0 || xi < band.0 || xi > band.1 {
            continue;
        }
        let c = equation.coefficients(xi);
        let x5 = xi.powi(5);
        worst = worst.max(dt * x5.abs());
        let f0 = (a.fhat[i] + b.fhat[i]) * 0.5;
        let f5 = mid(xi / 5.0);
        let f3 = mid(xi / 3.0);
        let start = a.t.max(xi.abs().powi(-5));
        let (t0, t1, t2) = if start < b.t {
            (
                Complex64::new(1.0 / start - 1.0 / b.t, 0.0),
                inverse_square_oscillatory(c.psi1 * x5, start, b.t),
                inverse_square_oscillatory(c.psi2 * x5, start, b.t),
            )
        } else {
            Default::default()
        };
        let lead = c.c0 * f0 * f0.norm_sqr().powi(2) * t0;
        let fifth = c.c1 * f5.powu(5) * t1;
        let third = c.c2 * f3.norm_sqr() * f3.powu(3) * t2;
        let lhs = (b.fhat[i] - a.fhat[i]) / dt;
        let rhs_without_leading = (fifth + third) / (x5 * dt);
        let rhs = rhs_without_leading + lead / (x5 * dt);
        points.push(OdeResidualPoint {
            xi,
            lhs,
            rhs,
            rhs_without_leading,
            residual: (lhs - rhs).norm(),
            residual_without_leading: (lhs - rhs_without_leading).norm(),
        });
    }
    points.sort_by(|p, q| p.xi.partial_cmp(&q.xi).expect("finite"));
    let sampling_warning = (worst >= PI / 8.0).then(|| {
        format!("Δt·|ξ|⁵ reaches {worst:.3e} (≥ π/8); oscillating terms are interval-averaged rather than sampled")
    });
    Ok(OdeResidual { t_start: a.t, t_end: b.t, normalization: equation.normalization(), sampling_warning, points })
}

/// Time-integrated residuals `Σ|LHS − RHS|·Δt` per frequency over a sequence
/// of [`ode_residual`] records on the same band. Returns `(ξ, with the
/// leading term, without it)`.
pub fn integrated_residuals(records: &[OdeResidual]) -> Vec<(f64, f64, f64)> {
    let Some(first) = records.first() else { return Vec::new() };
    let mut out: Vec<(f64, f64, f64)> = first.points.iter().map(|p| (p.xi, 0.0, 0.0)).collect();
    for r in records {
        let dt = r.t_end - r.t_start;
        for (slot, p) in out.iter_mut().zip(&r.points) {
            slot.1 += p.residual * dt;
            slot.2 += p.residual_without_leading * dt;
        }
    }
    out
}
