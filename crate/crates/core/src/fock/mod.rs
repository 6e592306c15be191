//! Truncated multi-mode Fock-space engine.

mod density;
mod linear;
mod moments;
pub(crate) mod occupation;
mod pipeline;
mod prepare;
mod state;

pub use density::{entanglement_entropy, reduce, DensityOperator};
pub use moments::{cross_moment, mode_moments, quadrature_moments, ModeMoments, QuadratureMoments};
pub use pipeline::{
    absorbed_photon_distribution, bs_transform, conditional_output, cpa_channel,
    environment_modes, full_pipeline, light_modes, to_standing_basis, to_travelling_basis,
};
pub use prepare::{prepare_coherent, prepare_squeezed_coherent_fock, squeezed_coherent_amplitudes};
pub use state::PureState;
