//! Exact Gaussian-state calculus on quadrature means and covariances.
//!
//! Each mode contributes `(X1, X2)` with `a = (X1 + i X2)/2`, so the vacuum
//! has unit variance in both quadratures and `[X1, X2] = 2i`.

mod epr;
mod state;

pub use epr::{
    epr_coherence_absorption, epr_intensity_absorption, epr_intensity_absorption_travelling,
    epr_inverse_map,
    epr_preceding_amplitudes, epr_prepare, PrecedingModes,
};
pub use state::{
    absorption_coefficients, bs_gaussian, cpa_gaussian, duan_inseparability, gaussian_pipeline,
    prepare_squeezed_coherent, squeezed_inseparability_closed_form, to_standing_gaussian,
    GaussianState, SqueezedSpec,
};
