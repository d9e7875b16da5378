//! CLI error type and its mapping to process exit codes.

use schwarzschild_wb::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown test id '{id}'; known ids: {}", known.join(", "))]
    UnknownTest { id: String, known: Vec<String> },

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed snapshot CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// `1` for configuration and input problems, `2` when the solver aborts.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(SolverError::InvalidConfig(_) | SolverError::InvalidGrid(_)) => 1,
            CliError::Solver(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
