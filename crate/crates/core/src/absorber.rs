use serde::{Deserialize, Serialize};

use crate::mode::ModeKind;
use crate::{CpaError, Result};

/// A subwavelength absorber with amplitude reflection `r` and transmission
/// `t = 1 + r`.
///
/// The cosine standing wave sees the amplitude transmissivity `t + r` and the
/// sine wave `t - r = 1`. With `swap_roles` set the two standing waves trade
/// places: the sine wave is the one coupled to the absorber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorberSpec {
    r: f64,
    t: f64,
    swap_roles: bool,
}

impl AbsorberSpec {
    /// `r` must lie in `[-1/2, 0]`.
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || !(-0.5..=0.0).contains(&r) {
            return Err(CpaError::InvalidAbsorber(format!(
                "reflection {r} outside [-1/2, 0]"
            )));
        }
        Ok(AbsorberSpec {
            r,
            t: 1.0 + r,
            swap_roles: false,
        })
    }

    /// The coherent perfect absorber, `t = -r = 1/2`.
    pub fn canonical() -> Self {
        AbsorberSpec {
            r: -0.5,
            t: 0.5,
            swap_roles: false,
        }
    }

    /// Builds the absorber whose coupled standing wave has amplitude
    /// transmissivity `tau` in `[0, 1]`.
    pub fn from_tau(tau: f64) -> Result<Self> {
        if !tau.is_finite() || !(0.0..=1.0).contains(&tau) {
            return Err(CpaError::InvalidAbsorber(format!(
                "transmissivity {tau} outside [0, 1]"
            )));
        }
        Self::new((tau - 1.0) / 2.0)
    }

    pub fn with_swapped_roles(mut self, swap: bool) -> Self {
        self.swap_roles = swap;
        self
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn tau_c(&self) -> f64 {
        self.t + self.r
    }

    pub fn tau_s(&self) -> f64 {
        self.t - self.r
    }

    pub fn swap_roles(&self) -> bool {
        self.swap_roles
    }

    /// Standing wave coupled to the absorber environment.
    pub fn coupled_kind(&self) -> ModeKind {
        if self.swap_roles {
            ModeKind::S
        } else {
            ModeKind::C
        }
    }

    /// Amplitude transmissivity of the coupled standing wave.
    pub fn coupled_tau(&self) -> f64 {
        self.tau_c()
    }

    /// `sqrt(1 - tau^2)`: amplitude leaking into the environment.
    pub fn coupled_loss_amplitude(&self) -> f64 {
        let tau = self.coupled_tau();
        (1.0 - tau * tau).max(0.0).sqrt()
    }
}

impl Default for AbsorberSpec {
    fn default() -> Self {
        Self::canonical()
    }
}
