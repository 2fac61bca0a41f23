//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or combination of parameters violates a model constraint.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Syntax or semantic error in an experiment config file, with the
    /// offending line (1-based) and key when known.
    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    /// Qubit register size outside the supported dense-statevector range.
    #[error("qubit count {requested} outside supported range 1..={max}")]
    QubitCount { requested: usize, max: usize },

    /// Qubit or basis-state index out of range for the register.
    #[error("{what} index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        num_qubits: usize,
    },

    /// Overlapping qubit roles in a controlled gate.
    #[error("gate qubit indices must be distinct: {0:?}")]
    DuplicateQubits(Vec<usize>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors the CLI reports as bad configuration (exit code 2)
    /// rather than a runtime failure (exit code 3).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_) | Error::ConfigSyntax { .. } | Error::QubitCount { .. }
        )
    }
}
