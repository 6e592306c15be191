//! JSON scenario files, sweeps and the regression table.

mod file;
mod sweep;
mod table1;
pub mod values;

use thiserror::Error;

use crate::CpaError;

pub use file::{
    parse_scenario, run_scenario, AbsorberConfig, Engine, Numerics, ScenarioFile, ScenarioSpec,
    SqueezedParams, SweepSpec, DEFAULT_TOLERANCE, SCHEMA_VERSION,
};
pub use sweep::{
    axes, custom_sweep_table, linspace, results_table, run_custom_sweep, run_preset, Cell, Preset,
    Table, DEFAULT_GRID, THREADS_VAR,
};
pub use table1::{table1, Check, Expected, Table1Report, Table1Row};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Engine(#[from] CpaError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl ScenarioError {
    /// Process exit code: 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Parse { .. } | ScenarioError::Invalid(_) | ScenarioError::Io { .. } => 1,
            ScenarioError::Numerical(_) => 2,
            ScenarioError::Engine(e) => match e {
                CpaError::TruncationLoss { .. }
                | CpaError::CutoffTooSmall { .. }
                | CpaError::CutoffTooLarge(_)
                | CpaError::ZeroNorm
                | CpaError::ZeroProbability(_)
                | CpaError::SingularAngle(_)
                | CpaError::Undefined(_) => 2,
                _ => 1,
            },
        }
    }
}
