//! The free flow `e^{t∂x⁵}`: exact spectral evolution, a brute-force
//! oscillatory-integral oracle, and stationary-phase evaluators.

mod envelope;
mod phase;
mod quadrature;
mod stationary;

pub use envelope::{dispersive_envelope_check, stationary_phase_error_fit, EnvelopeFit, EnvelopeOptions};
pub use phase::LinearPhase;
pub use quadrature::{oscillatory_quadrature, QuadratureOptions, QuadratureValue};
pub use stationary::{stationary_phase_predict, AsymptoticPrediction, Region};

use num_complex::Complex;

use crate::spectral::FieldState;
use crate::Real;

/// Advances a field by `dt` under the linear flow: `û(ξ) ← e^{i·dt·ξ⁵} û(ξ)`.
///
/// The multiplier is unimodular, so the spectral norm and Hermitian symmetry
/// are preserved. The field's clock moves by `dt`.
pub fn free_evolve<T: Real>(state: &FieldState<T>, dt: T) -> FieldState<T> {
    let mut out = state.apply_multiplier(|xi| dispersive_factor(dt, xi));
    out.set_time(state.time() + dt);
    out
}

/// `e^{i·t·ξ⁵}` with the product `t·ξ⁵` carried in two parts and reduced
/// modulo `2π` before the trigonometric call. Phases reach `10⁶` rad on long
/// runs; a plain product would lose about `10⁻¹⁰` rad to rounding.
pub fn dispersive_factor<T: Real>(t: T, xi: T) -> Complex<T> {
    let x2 = xi * xi;
    let p = x2 * x2 * xi;
    let hi = t * p;
    let lo = t.mul_add(p, -hi);
    let tau = T::TAU();
    // Remainder of 2π beyond its rounded value in `T`.
    let tau_tail = T::lit(std::f64::consts::TAU - tau.as_f64() + 2.449_293_598_294_706_4e-16);
    let k = (hi / tau).round();
    let theta = (-k).mul_add(tau, hi) - k * tau_tail + lo;
    Complex::new(theta.cos(), theta.sin())
}
