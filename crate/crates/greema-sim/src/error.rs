//! Error type shared by every module, with a stable mapping to process
//! exit codes for the command-line harness.

use thiserror::Error;

/// All failure modes of the simulator.
#[derive(Debug, Error)]
pub enum SimError {
    /// Configuration file problems: missing file, schema violation,
    /// out-of-range value. Exit code 2.
    #[error("config error: {0}")]
    Config(String),

    /// A domain operation was called with an invalid argument.
    /// Surfaced as an engine error (exit code 3) unless it happens
    /// during config validation.
    #[error("invalid {field}: {reason}")]
    Invalid {
        field: &'static str,
        reason: String,
    },

    /// A scenario engine failed mid-run. Exit code 3.
    #[error("engine error in {scenario}: {reason}")]
    Engine { scenario: String, reason: String },

    /// A calibration did not converge or its target is infeasible.
    /// Exit code 4.
    #[error("calibration failed in {module}: {reason}")]
    Calibration {
        module: &'static str,
        reason: String,
    },

    /// Golden comparison found differences. Exit code 5.
    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        SimError::Invalid {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit code for the CLI: 0 success, 2 config error,
    /// 3 engine error, 4 calibration non-convergence, 5 golden mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) => 2,
            SimError::Invalid { .. } | SimError::Engine { .. } | SimError::Io(_) => 3,
            SimError::Calibration { .. } => 4,
            SimError::GoldenMismatch(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
