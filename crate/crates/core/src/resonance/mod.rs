//! The quintic interaction phase `Ψ`: its critical points, the
//! stationary-phase coefficients of the effective profile equation, a
//! quadrature oracle for those coefficients, and a finite-difference check
//! of the profile equation on simulation data.

mod catalog;
mod coefficients;
mod ode;
mod phase;
mod saddle;

pub use catalog::{
    exact_catalog, find_stationary_points, parse_fraction, ExactCatalogJson, ExactPoint, ExactPointJson, PointGroup,
    ResonanceCatalog, SearchOptions, SearchReport, StationaryPoint,
};
pub use coefficients::{
    coefficient_oracle, derive_resonance_coefficients, CoefficientOracle, Normalization, ResonanceCoefficients,
    SignatureCheck,
};
pub use ode::{
    integrated_residuals, inverse_square_oscillatory, ode_residual, OdeResidual, OdeResidualPoint, ProfileEquation,
};
pub use phase::{critical_points, determinant4, QuinticPhase};
pub use saddle::{
    saddle_integral, saddle_integral_bracketed, stationary_phase_sum, BracketedIntegral, SaddleIntegral, SaddleOptions,
};

/// Leading stationary-phase approximation over all points of a catalog; see
/// [`stationary_phase_sum`].
pub fn stationary_phase_4d(
    catalog: &ResonanceCatalog,
    f: &dyn Fn(&[f64; 4]) -> num_complex::Complex64,
    chi: &dyn Fn(&[f64; 4]) -> f64,
    lambda: f64,
) -> crate::Result<num_complex::Complex64> {
    stationary_phase_sum(&catalog.points, f, chi, lambda)
}
