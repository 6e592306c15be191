//! Coherent perfect absorption of quantum light.
//!
//! Two counter-propagating travelling waves `K` and `-K` are rewritten as a
//! cosine (`C`) and a sine (`S`) standing wave by a Hadamard beamsplitter.
//! A subwavelength absorber swallows the cosine wave into an environment
//! mode `ENV_C` and leaves the sine wave alone; a second Hadamard splitter
//! returns the survivors to travelling waves.
//!
//! The [`fock`] engine follows pure states in a truncated number basis and
//! handles discrete-variable and non-Gaussian light. The [`gaussian`] engine
//! follows quadrature means and covariances exactly.

pub mod absorber;
pub mod coefficient;
pub mod dv;
mod error;
pub mod fock;
pub mod gaussian;
pub mod mode;
pub mod nongaussian;
pub mod report;
pub mod scenario;

pub use absorber::AbsorberSpec;
pub use error::{CpaError, Result};
pub use mode::{ModeKind, ModeLabel, Rail};

/// Largest probability a truncated constructor may discard.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

/// Default per-mode photon cutoff.
pub const DEFAULT_CUTOFF: usize = 30;
