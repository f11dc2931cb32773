use std::sync::Arc;

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::interp::UniformCubic;
use crate::linear::dispersive_factor;
use crate::spectral::{FieldState, SpectralGrid};
use crate::Real;

/// The profile `f̂(t, ξ) = e^{−itξ⁵} û(t, ξ)` on the grid frequencies (FFT
/// order), tagged with where it came from.
#[derive(Clone, Debug)]
pub struct ProfileSnapshot<T: Real> {
    pub t: T,
    pub grid: Arc<SpectralGrid<T>>,
    pub fhat: Vec<Complex<T>>,
    pub provenance: Provenance,
}

/// Run identifier and step index of a snapshot.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub run_id: String,
    pub step: usize,
}

/// Removes the free evolution from a field.
pub fn extract_profile<T: Real>(state: &FieldState<T>) -> ProfileSnapshot<T> {
    let t = state.time();
    let f = state.apply_multiplier(|xi| dispersive_factor(-t, xi));
    ProfileSnapshot { t, grid: state.grid().clone(), fhat: f.spectral_view().into_owned(), provenance: Provenance::default() }
}

impl<T: Real> ProfileSnapshot<T> {
    pub fn with_provenance(mut self, run_id: &str, step: usize) -> Self {
        self.provenance = Provenance { run_id: run_id.to_string(), step };
        self
    }

    /// Re-attaches the free evolution, recovering the field at time `t`.
    pub fn to_state(&self) -> FieldState<T> {
        let f = FieldState::from_spectral(&self.grid, self.t, self.fhat.clone()).expect("same grid");
        f.apply_multiplier(|xi| dispersive_factor(self.t, xi))
    }

    /// `‖f̂‖_{L^∞_ξ}`.
    pub fn sup_norm(&self) -> T {
        self.fhat.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// `(Σ|f̂_k|² Δξ)^{1/2}`, equal to `‖u(t)‖_{L²}`.
    pub fn l2_norm(&self) -> T {
        (self.fhat.iter().fold(T::zero(), |s, c| s + c.norm_sqr()) * self.grid.dxi()).sqrt()
    }

    /// Frequencies and values in increasing-frequency order, as `f64`.
    pub fn ascending(&self) -> (Vec<f64>, Vec<Complex64>) {
        let order = self.grid.ascending_order();
        let xi = order.iter().map(|&i| self.grid.frequencies()[i].as_f64()).collect();
        let v = order.iter().map(|&i| Complex64::new(self.fhat[i].re.as_f64(), self.fhat[i].im.as_f64())).collect();
        (xi, v)
    }

    /// Cubic interpolant of `f̂` in `ξ`; zero outside the resolved band.
    pub fn interpolant(&self) -> UniformCubic {
        let (xi, v) = self.ascending();
        UniformCubic::new(xi[0], self.grid.dxi().as_f64(), v)
    }

    /// Value at the grid frequency nearest to `xi`.
    pub fn nearest(&self, xi: T) -> Complex<T> {
        let k = (xi / self.grid.dxi()).round().to_i64().unwrap_or(i64::MAX);
        self.grid.index_of(k).map_or(Complex::new(T::zero(), T::zero()), |i| self.fhat[i])
    }
}
