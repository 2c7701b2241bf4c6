use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across the crate.
///
/// Variants are grouped so that a command-line front end can map them onto
/// distinct exit codes (configuration, data, infeasible assignment).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("dataset invariant violated: {0}")]
    Invariant(String),

    #[error("unknown {kind} identifier `{name}`")]
    UnknownId { kind: &'static str, name: String },

    #[error("subset of size {size} is too small (need at least {min})")]
    SubsetTooSmall { size: usize, min: usize },

    #[error("degenerate subset: {0}")]
    Degenerate(String),

    #[error("unsupported combination: {algorithm} on {representation} graph")]
    Unsupported {
        algorithm: String,
        representation: String,
    },

    #[error("infeasible assignment: paper `{paper}` received {assigned} of {required} reviewers")]
    Infeasible {
        paper: String,
        assigned: usize,
        required: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code for a command-line front end: 2 for configuration
    /// problems, 3 for data problems, 4 for infeasible assignments.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Unsupported { .. } => 2,
            Error::Infeasible { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
