use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::catalog::{matrix, PointGroup, ResonanceCatalog};
use super::phase::QuinticPhase;
use super::saddle::{saddle_integral_bracketed, SaddleOptions};
use crate::{Error, Result};

/// Overall constant in front of the quintic Duhamel integral.
///
/// For `u_t = ∂x⁵u − (1/5)∂x(u⁵)` the profile obeys
/// `∂_t f̂(ξ) = −(iξ/5)(2π)^{−2} ∫ e^{−itΨ} f̂ f̂ f̂ f̂ f̂ dy`. The bare
/// variant leaves out the `1/5`; both are kept so they can be compared on
/// data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Prefactor `−iξ/(4π²)`; gives `c₀ = −i/40`.
    Bare,
    /// Prefactor `−iξ/(20π²)`, as the equation implies; gives `c₀ = −i/200`.
    #[default]
    Equation,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::Bare => 1.0,
            Normalization::Equation => 0.2,
        }
    }
}

/// Measured signature of a point against the closed form `1 − sign ξ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureCheck {
    pub index: usize,
    pub measured: i32,
    pub formula: i32,
    pub agrees: bool,
}

/// Coefficients of the effective profile equation
///
/// ```text
/// ∂_t f̂ = [c₀|f̂|⁴f̂ + c₁e^{−itΨ₁}f̂(ξ/5)⁵ + c₂e^{−itΨ₂}|f̂(ξ/3)|²f̂(ξ/3)³] / (t²ξ⁵) + …
/// ```
///
/// with `Ψ₁ = 624ξ⁵/625` and `Ψ₂ = 80ξ⁵/81`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCoefficients {
    pub normalization: Normalization,
    pub sign: i8,
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    /// `Ψ_a/ξ⁵` for the two oscillating terms.
    pub psi1: f64,
    pub psi2: f64,
    pub signatures: Vec<SignatureCheck>,
}

impl ResonanceCoefficients {
    /// Signatures of points 1–6 that differ from `1 − sign ξ`.
    pub fn signature_discrepancies(&self) -> Vec<&SignatureCheck> {
        self.signatures.iter().filter(|s| s.index <= 6 && !s.agrees).collect()
    }
}

/// Applies the stationary-phase formula to the Duhamel integral at every
/// catalog point. The integrand oscillates like `e^{−itΨ}`, so each point
/// contributes `4π²e^{−iπβ_a/4}Δ_a^{−1/2}t^{−2}`. Homogeneity turns the
/// `ξ`-dependence into the common factor `ξ^{−5}`.
///
/// Fails if `c₀` differs from its closed form (`−i/40` times the
/// normalisation factor) by more than `1e−12`.
pub fn derive_resonance_coefficients(catalog: &ResonanceCatalog, normalization: Normalization) -> Result<ResonanceCoefficients> {
    let xi = catalog.xi;
    let kappa = normalization.factor();
    let pre = Complex64::new(0.0, -xi * kappa);
    let sum = |g: PointGroup| -> Complex64 {
        catalog
            .group(g)
            .map(|p| Complex64::from_polar(1.0, -PI * p.signature as f64 / 4.0) * (xi.powi(5) / p.delta.sqrt()))
            .sum::<Complex64>()
            * pre
    };
    let c0 = sum(PointGroup::ZeroPhase);
    let expected = Complex64::new(0.0, -kappa / 40.0);
    if (c0 - expected).norm() > 1e-12 {
        return Err(Error::CatalogMismatch(format!("c0 = {c0} but the closed form is {expected}")));
    }
    let formula = 1 - xi.signum() as i32;
    let signatures = catalog
        .points
        .iter()
        .map(|p| SignatureCheck { index: p.index, measured: p.signature, formula, agrees: p.signature == formula })
        .collect();
    let psi_of = |g: PointGroup| catalog.group(g).next().map_or(0.0, |p| p.psi / xi.powi(5));
    Ok(ResonanceCoefficients {
        normalization,
        sign: xi.signum() as i8,
        c0,
        c1: sum(PointGroup::Fifth),
        c2: sum(PointGroup::Third),
        psi1: psi_of(PointGroup::Fifth),
        psi2: psi_of(PointGroup::Third),
        signatures,
    })
}

/// Magnitudes of `c₁`, `c₂` recovered by direct quadrature of the Duhamel
/// phase integral, without the stationary-phase formula.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientOracle {
    pub lambda: f64,
    /// `λ²|∫_{near y₁} e^{−iλΨ}|/(4π²)`, which tends to `Δ₁^{−1/2}`.
    pub c1_magnitude: f64,
    /// Spread over cube radii.
    pub c1_uncertainty: f64,
    /// The same, summed over the five `ξ/3`-type points.
    pub c2_magnitude: f64,
    pub c2_uncertainty: f64,
    /// Values the formula predicts, `Δ₁^{−1/2}` and `Σ_{a=2..6} Δ_a^{−1/2}`.
    pub c1_formula: f64,
    pub c2_formula: f64,
}

impl CoefficientOracle {
    pub fn c1_relative_error(&self) -> f64 {
        (self.c1_magnitude / self.c1_formula - 1.0).abs()
    }

    pub fn c2_relative_error(&self) -> f64 {
        (self.c2_magnitude / self.c2_formula - 1.0).abs()
    }
}

/// Quadrature check of the `c₁`, `c₂` magnitudes at `ξ = catalog.xi` and
/// large parameter `λ` (the time).
pub fn coefficient_oracle(catalog: &ResonanceCatalog, lambda: f64, opts: &SaddleOptions) -> Result<CoefficientOracle> {
    let xi = catalog.xi;
    let phase = QuinticPhase::new(Complex64::new(xi, 0.0));
    let psi = |y: &[Complex64; 4]| phase.value(y);
    let one = |_: &[Complex64; 4]| Complex64::new(1.0, 0.0);
    let real = catalog.phase();
    let radii = [opts.radius - 0.5, opts.radius, opts.radius + 0.5];
    let scale = lambda * lambda / (4.0 * PI * PI) * xi.abs().powi(6);
    let group = |g: PointGroup| -> Result<(f64, f64, f64)> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut formula = 0.0;
        for p in catalog.group(g) {
            let h = matrix(&real.hessian(&p.point));
            let b = saddle_integral_bracketed(&psi, &one, p.point, &h, -lambda, opts, &radii)?;
            total += b.value;
            err += b.spread;
            formula += xi.abs().powi(6) / p.delta.sqrt();
        }
        Ok((total.norm() * scale, err * scale, formula))
    };
    let (c1_magnitude, c1_uncertainty, c1_formula) = group(PointGroup::Fifth)?;
    let (c2_magnitude, c2_uncertainty, c2_formula) = group(PointGroup::Third)?;
    Ok(CoefficientOracle { lambda, c1_magnitude, c1_uncertainty, c2_magnitude, c2_uncertainty, c1_formula, c2_formula })
}
