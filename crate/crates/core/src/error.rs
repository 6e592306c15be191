use thiserror::Error;

use crate::mode::ModeLabel;

pub type Result<T, E = CpaError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CpaError {
    #[error("mode {0} is not present in the state")]
    UnknownMode(ModeLabel),
    #[error("mode {0} appears more than once")]
    DuplicateMode(ModeLabel),
    #[error("modes {0} and {1} must be distinct")]
    SameMode(ModeLabel, ModeLabel),
    #[error("at most {max} modes are supported, got {got}")]
    TooManyModes { max: usize, got: usize },
    #[error("cutoff {cutoff} cannot hold {required} photons")]
    CutoffTooSmall { cutoff: usize, required: usize },
    #[error("cutoff {0} exceeds the supported maximum of 255")]
    CutoffTooLarge(usize),
    #[error("truncation at cutoff {cutoff} discards probability {lost:e} (limit {limit:e})")]
    TruncationLoss { cutoff: usize, lost: f64, limit: f64 },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state is not in the standing-wave basis (needs C and S)")]
    StandingBasisAbsent,
    #[error("state is not in the travelling basis (needs K and -K)")]
    TravellingBasisAbsent,
    #[error("absorber environment mode is already present")]
    EnvironmentPresent,
    #[error("absorber environment mode is absent")]
    EnvironmentAbsent,
    #[error("conditioning on {0} absorbed photons has zero probability")]
    ZeroProbability(usize),
    #[error("mode selection is empty")]
    EmptySelection,
    #[error("invalid absorber: {0}")]
    InvalidAbsorber(String),
    #[error("singular angle in {0}: use the linear inversion instead")]
    SingularAngle(&'static str),
    #[error("coefficient undefined: {0} is zero")]
    Undefined(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
