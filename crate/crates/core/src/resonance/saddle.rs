use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::catalog::StationaryPoint;
use crate::{Error, Result};

/// Smallest `Δ` accepted as nondegenerate, relative to the largest one in a
/// sum.
const DEGENERATE_DELTA: f64 = 1e-12;

/// Leading stationary-phase approximation of `∫ e^{iλΨ(y)} F(y) χ(y) dy`
/// over `ℝ⁴`:
///
/// ```text
/// Σ_a 4π² e^{iπβ_a/4} Δ_a^{−1/2} λ^{−2} e^{iλΨ_a} F(y_a) χ(y_a)
/// ```
///
/// `λ` may be negative; the signature then enters with the opposite sign.
/// The neglected terms are `O(λ^{−3})`.
pub fn stationary_phase_sum(
    points: &[StationaryPoint],
    f: &dyn Fn(&[f64; 4]) -> Complex64,
    chi: &dyn Fn(&[f64; 4]) -> f64,
    lambda: f64,
) -> Result<Complex64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidInput("λ must be finite and nonzero".into()));
    }
    let largest = points.iter().map(|p| p.delta).fold(0.0, f64::max);
    let mut sum = Complex64::new(0.0, 0.0);
    for p in points {
        if !(p.delta > DEGENERATE_DELTA * largest) || p.delta == 0.0 {
            return Err(Error::Degenerate(format!("point {} has |det| = {:e}", p.index, p.delta)));
        }
        let w = chi(&p.point);
        if w == 0.0 {
            continue;
        }
        let beta = lambda.signum() * p.signature as f64;
        let phase = Complex64::from_polar(1.0, PI * beta / 4.0 + lambda * p.psi);
        sum += phase * f(&p.point) * (4.0 * PI * PI * w / (p.delta.sqrt() * lambda * lambda));
    }
    Ok(sum)
}

/// Settings of the steepest-descent quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleOptions {
    /// Gauss–Legendre nodes per dimension.
    pub nodes: usize,
    /// Half-width of the integration cube in normalised coordinates.
    pub radius: f64,
    /// Rotation of each normalised axis into the complex plane.
    pub angle: f64,
}

impl Default for SaddleOptions {
    fn default() -> Self {
        Self { nodes: 40, radius: 6.0, angle: PI / 6.0 }
    }
}

/// Result of one saddle quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleIntegral {
    pub value: Complex64,
    /// Largest `|integrand|` seen, relative to its value at the saddle.
    pub peak: f64,
    /// Largest `|integrand|` on the faces of the cube.
    pub boundary: f64,
}

/// Contribution of one nondegenerate saddle `y₀` to
/// `∫ e^{iλΨ(y)} a(y) dy`, computed by brute-force quadrature.
///
/// The variables are normalised by the Hessian, `y = y₀ + A z` with
/// `Aᵀ(λ∇²Ψ)A = diag(±1)`, and each `z_i` is rotated to `e^{±iθ} w_i`, the
/// sign following the eigenvalue, so the quadratic part of the phase becomes
/// a decaying Gaussian. A tensor Gauss–Legendre rule on `[−R, R]⁴` then
/// converges quickly. `psi` and `amplitude` must be analytic (polynomials,
/// Gaussians), since they are evaluated at complex points. The change of
/// variables is exact, so nothing about the leading-order formula is assumed.
pub fn saddle_integral(
    psi: &dyn Fn(&[Complex64; 4]) -> Complex64,
    amplitude: &dyn Fn(&[Complex64; 4]) -> Complex64,
    center: [f64; 4],
    hessian: &Matrix4<f64>,
    lambda: f64,
    opts: &SaddleOptions,
) -> Result<SaddleIntegral> {
    let eig = SymmetricEigen::new(*hessian);
    let scale = eig.eigenvalues.iter().map(|e| e.abs()).fold(0.0, f64::max);
    if eig.eigenvalues.iter().any(|e| e.abs() <= 1e-12 * scale) || scale == 0.0 {
        return Err(Error::Degenerate("singular Hessian at the saddle".into()));
    }
    let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
    let mut jac = Complex64::new(1.0, 0.0);
    for k in 0..4 {
        let h = lambda * eig.eigenvalues[k];
        let rot = Complex64::from_polar(1.0, opts.angle * h.signum());
        let s = 1.0 / h.abs().sqrt();
        jac *= rot * s;
        for i in 0..4 {
            a[i][k] = rot * (eig.eigenvectors[(i, k)] * s);
        }
    }
    let c: [Complex64; 4] = std::array::from_fn(|i| Complex64::new(center[i], 0.0));
    let psi0 = psi(&c);
    let a0 = amplitude(&c).norm().max(f64::MIN_POSITIVE);

    let rule = GaussLegendre::new(opts.nodes).map_err(|e| Error::InvalidInput(format!("{e:?}")))?;
    let pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().iter().map(|&(x, w)| (x * opts.radius, w * opts.radius)).collect();
    let n = pairs.len();
    let i_lambda = Complex64::new(0.0, lambda);
    let (mut sum, mut peak, mut boundary) = (Complex64::new(0.0, 0.0), 0.0f64, 0.0f64);
    let mut y = c;
    for (i0, &(w0, q0)) in pairs.iter().enumerate() {
        for (i1, &(w1, q1)) in pairs.iter().enumerate() {
            for (i2, &(w2, q2)) in pairs.iter().enumerate() {
                let partial: [Complex64; 4] = std::array::from_fn(|r| c[r] + a[r][0] * w0 + a[r][1] * w1 + a[r][2] * w2);
                let q012 = q0 * q1 * q2;
                let edge3 = [i0, i1, i2].iter().any(|&i| i == 0 || i == n - 1);
                for (i3, &(w3, q3)) in pairs.iter().enumerate() {
                    for r in 0..4 {
                        y[r] = partial[r] + a[r][3] * w3;
                    }
                    let v = (i_lambda * (psi(&y) - psi0)).exp() * amplitude(&y);
                    let m = v.norm();
                    peak = peak.max(m);
                    if edge3 || i3 == 0 || i3 == n - 1 {
                        boundary = boundary.max(m);
                    }
                    sum += v * (q012 * q3);
                }
            }
        }
    }
    let value = sum * jac * (i_lambda * psi0).exp();
    Ok(SaddleIntegral { value, peak: peak / a0, boundary: boundary / a0 })
}

/// Median of [`saddle_integral`] over several cube radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketedIntegral {
    pub value: Complex64,
    /// Largest distance from the median among the accepted radii.
    pub spread: f64,
    /// Largest relative `|integrand|` on a cube face among the accepted radii.
    pub boundary: f64,
}

/// Runs [`saddle_integral`] over several cube radii, drops radii where the
/// rotated integrand grows (peak above 4 times its saddle value), and
/// returns the median with the spread as an error bar. Away from the
/// asymptotic regime a saddle's contribution is only defined up to what the
/// cube can separate, so the spread is the honest uncertainty.
pub fn saddle_integral_bracketed(
    psi: &dyn Fn(&[Complex64; 4]) -> Complex64,
    amplitude: &dyn Fn(&[Complex64; 4]) -> Complex64,
    center: [f64; 4],
    hessian: &Matrix4<f64>,
    lambda: f64,
    opts: &SaddleOptions,
    radii: &[f64],
) -> Result<BracketedIntegral> {
    let mut values = Vec::new();
    let mut boundary = 0.0f64;
    for &r in radii {
        let o = SaddleOptions { radius: r, ..opts.clone() };
        let v = saddle_integral(psi, amplitude, center, hessian, lambda, &o)?;
        if v.peak <= 4.0 {
            values.push(v.value);
            boundary = boundary.max(v.boundary);
        }
    }
    if values.is_empty() {
        return Err(Error::NoConvergence("every cube radius hit growth of the rotated integrand".into()));
    }
    let mut by_norm = values.clone();
    by_norm.sort_by(|p, q| p.norm().partial_cmp(&q.norm()).expect("finite"));
    let median = by_norm[by_norm.len() / 2];
    let spread = values.iter().map(|v| (v - median).norm()).fold(0.0, f64::max);
    Ok(BracketedIntegral { value: median, spread, boundary })
}
