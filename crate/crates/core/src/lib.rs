//! Pseudospectral laboratory for the defocusing generalized fifth-order KdV
//! equation `u_t = ∂x⁵u − u⁴u_x` on a periodic box.
//!
//! The crate is organised by subsystem:
//!
//! - [`spectral`]: grids, transforms, multipliers, dealiased quintic products
//!   and Littlewood–Paley projections.
//! - [`linear`]: exact free evolution, an oscillatory-integral quadrature
//!   oracle and stationary-phase evaluators for the linear kernel.
//! - [`solver`]: integrating-factor RK4 time stepping with conservation
//!   monitors.
//! - [`diagnostics`]: profiles, weighted norms and vector-field identities.
//! - [`resonance`]: the quintic interaction phase, its stationary points and
//!   the coefficients of the effective profile equation.
//! - [`asymptotics`]: phase correction, scattering limits, and the region-wise
//!   long-time checks.
//! - [`orchestrator`]: configuration, persistence, run manifests and the
//!   acceptance table.
//!
//! Numerical kernels are generic over the scalar type through [`Real`]; the
//! aliases below fix `f64`, which is what the orchestrator uses.

pub mod asymptotics;
pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod interp;
pub mod linear;
pub mod orchestrator;
pub mod resonance;
pub mod solver;
pub mod spectral;

mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision spectral grid.
pub type Grid = spectral::SpectralGrid<f64>;
/// Double-precision field.
pub type Field = spectral::FieldState<f64>;
/// Double-precision profile snapshot.
pub type Profile = diagnostics::ProfileSnapshot<f64>;
/// Double-precision solver configuration.
pub type Solver = solver::SolverConfig<f64>;
/// Single-precision spectral grid, mostly useful for quick looks.
pub type GridF32 = spectral::SpectralGrid<f32>;
/// Single-precision field.
pub type FieldF32 = spectral::FieldState<f32>;
/// Exact rational used for the resonance catalog.
pub type Rational = num_rational::Ratio<i128>;
