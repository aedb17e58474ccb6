//! Command-line front end for `revival-core`: scenario files, subcommands
//! and CSV/report output.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run, Command, RunSummary};
pub use config::ScenarioConfig;

use thiserror::Error;

/// Everything a run can fail with. Each variant maps to an exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] revival_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const PERIOD_UNDEFINED: i32 = 4;
    pub const NO_RESONANCE: i32 = 5;
    pub const IO: i32 = 6;
}

impl LabError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        use revival_core::Error as E;
        match self {
            LabError::Usage(_) | LabError::Parse { .. } => exit::USAGE,
            LabError::Validation(_) => exit::VALIDATION,
            LabError::Core(E::PeriodUndefined { .. }) => exit::PERIOD_UNDEFINED,
            LabError::Core(E::NoResonance) => exit::NO_RESONANCE,
            LabError::Core(E::InvalidParameter(_) | E::EtaTooLarge { .. } | E::InsufficientData { .. }) => {
                exit::VALIDATION
            }
            LabError::Core(_) => exit::OTHER,
            LabError::Io(_) => exit::IO,
        }
    }
}
