//! Long-time behaviour region by region: the logarithmic phase correction
//! and scattering limit in the oscillatory region, the self-similar frame
//! near the origin, and decay on the right.
//!
//! Limits `t → ∞` are replaced by Cauchy differences over the available
//! snapshot times, with the expected rate as the fit model.

mod decay;
mod oscillatory;
mod phase;
mod report;
mod scattering;
mod selfsim;

pub use decay::{decay_region_check, ScaledStations, DECAY_EXPONENT};
pub use oscillatory::{modified_asymptotic_value, oscillatory_edge, oscillatory_prediction};
pub use phase::{accumulate_phase, modified_profiles, phase_strength, ModifiedProfile, PhaseCorrection};
pub use report::{AsymptoticReport, ExponentFit, StationRow};
pub use scattering::{scattering_limit, CauchyStep, ScatteringLimit, ScatteringOptions};
pub use selfsim::{
    gamma, self_similar_extract, CauchyDifference, RescaledSample, SelfSimilarFrame, SelfSimilarOptions,
    GAMMA_CONSTANT,
};
