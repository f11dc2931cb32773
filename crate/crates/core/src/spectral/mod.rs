//! Periodic spectral discretisation of the line: transforms, Fourier
//! multipliers, dealiased quintic products and Littlewood–Paley projections.

mod grid;
mod littlewood_paley;
mod product;
mod state;

pub use grid::SpectralGrid;
pub use littlewood_paley::{smooth_step, DyadicProjection, LittlewoodPaley};
pub use product::{quintic_product, Dealiaser};
pub use state::FieldState;
