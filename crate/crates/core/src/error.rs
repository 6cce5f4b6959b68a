use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The Fock cutoff is too small for the requested coherent amplitude.
    #[error("truncation: |alpha| = {alpha:.4} needs n_trunc >= {required}, have {n_trunc}")]
    Truncation {
        alpha: f64,
        required: usize,
        n_trunc: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("schedule events overlap at t = {time:.6}: {detail}")]
    ScheduleOverlap { time: f64, detail: String },

    #[error("no convergence after {halvings} step halvings (last change {last_change:.3e}, tolerance {tolerance:.1e})")]
    Convergence {
        halvings: usize,
        last_change: f64,
        tolerance: f64,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A protocol error raised while evaluating one grid point of a sweep.
    #[error("grid point {index} ({variable} = {value}): {source}")]
    AtGridPoint {
        index: usize,
        variable: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn dimension(message: impl Into<String>) -> Self {
        Error::Dimension(message.into())
    }

    /// True for configuration problems (parse or validation), including
    /// those wrapped by a grid point.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Parse { .. } | Error::Validation { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_config_error(),
            _ => false,
        }
    }

    pub fn is_convergence_error(&self) -> bool {
        match self {
            Error::Convergence { .. } => true,
            Error::AtGridPoint { source, .. } => source.is_convergence_error(),
            _ => false,
        }
    }
}
