use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library reports.
///
/// Validation failures (bad parameters, malformed files) are distinguished from
/// budget/censoring failures so that the CLI can map them onto different exit
/// codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate ring: n = {n} must exceed 2k = {}", 2 * k)]
    DegenerateRing { n: usize, k: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("graph validation failed: {0}")]
    Validation(String),

    #[error("graph is disconnected; the stationary distribution is not unique")]
    Disconnected,

    #[error("probability vector has total mass {total}, which is not 1 within 1e-12")]
    NotNormalized { total: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("total variation distance increased from {before} to {after} at step {step}")]
    NotMonotone { step: u64, before: f64, after: f64 },

    #[error("enumeration budget of {budget} sets exceeded; use local-search mode for this graph")]
    BudgetExceeded { budget: u64 },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("{0}")]
    Regime(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures caused by exhausting a work budget rather than by bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
