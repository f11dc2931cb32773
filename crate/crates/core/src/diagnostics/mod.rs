//! Profile extraction, the weighted a-priori norm, and the vector-field
//! identity cross-check.

mod identity;
mod profile;
mod xnorm;

pub use identity::{edge_tapered, vector_field_identity_check, IdentityResidual};
pub use profile::{extract_profile, ProfileSnapshot};
pub use xnorm::{weighted_norm_physical, weighted_norm_spectral, x_norm, XNormReport};
