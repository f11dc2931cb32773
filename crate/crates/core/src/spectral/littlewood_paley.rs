use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::FieldState;
use crate::Real;

/// `C^∞` step rising from 0 at `s ≤ 0` to 1 at `s ≥ 1`, built from the ratio
/// of `e^{-1/s}` terms.
pub fn smooth_step<T: Real>(s: T) -> T {
    if s <= T::zero() {
        return T::zero();
    }
    if s >= T::one() {
        return T::one();
    }
    let a = (-T::one() / s).exp();
    let b = (-T::one() / (T::one() - s)).exp();
    a / (a + b)
}

/// The low-pass bump `φ`: equal to 1 for `|ξ| ≤ plateau`, 0 for `|ξ| ≥ 2`,
/// with a smooth transition in between. The plateau edge is a config value so
/// runs stay reproducible.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LittlewoodPaley {
    pub plateau: f64,
}

impl Default for LittlewoodPaley {
    /// Plateau up to 3/2, so every `ψ_j` equals 1 on `2^j ≤ |ξ| ≤ 1.5·2^j`.
    fn default() -> Self {
        Self { plateau: 1.5 }
    }
}

impl LittlewoodPaley {
    pub fn new(plateau: f64) -> Self {
        assert!((1.0..2.0).contains(&plateau), "plateau must lie in [1, 2)");
        Self { plateau }
    }

    pub fn phi<T: Real>(&self, xi: T) -> T {
        let a = T::lit(self.plateau);
        T::one() - smooth_step((xi.abs() - a) / (T::lit(2.0) - a))
    }

    /// `ψ(ξ) = φ(ξ) − φ(2ξ)`, supported in `1/2 ≤ |ξ| ≤ 2`.
    pub fn psi<T: Real>(&self, xi: T) -> T {
        self.phi(xi) - self.phi(xi + xi)
    }

    /// Weights of `P_j` (the dyadic band `ψ(2^{-j}ξ)`) on the given frequencies.
    pub fn dyadic(&self, j: i32, freqs: &[f64]) -> DyadicProjection {
        let s = 2f64.powi(-j);
        DyadicProjection {
            j,
            weights: freqs.iter().map(|&xi| self.psi(xi * s)).collect(),
        }
    }

    /// `P_j u`.
    pub fn project_dyadic<T: Real>(&self, state: &FieldState<T>, j: i32) -> FieldState<T> {
        let s = T::lit(2f64.powi(-j));
        state.apply_multiplier(|xi| Complex::new(self.psi(xi * s), T::zero()))
    }

    /// `P_{≤j} u`, the band `φ(2^{-j}ξ)`.
    pub fn project_below<T: Real>(&self, state: &FieldState<T>, j: i32) -> FieldState<T> {
        let s = T::lit(2f64.powi(-j));
        state.apply_multiplier(|xi| Complex::new(self.phi(xi * s), T::zero()))
    }

    /// `P_{>j} u = u − P_{≤j} u`.
    pub fn project_above<T: Real>(&self, state: &FieldState<T>, j: i32) -> FieldState<T> {
        let s = T::lit(2f64.powi(-j));
        state.apply_multiplier(|xi| Complex::new(T::one() - self.phi(xi * s), T::zero()))
    }
}

/// A sampled dyadic cutoff `ψ_j(ξ) = ψ(2^{-j}ξ)`.
#[derive(Clone, Debug)]
pub struct DyadicProjection {
    pub j: i32,
    pub weights: Vec<f64>,
}
