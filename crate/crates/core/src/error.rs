//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by network construction, evaluation, training and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter vector too short: need {needed} entries, have {have}")]
    InsufficientParameters { needed: usize, have: usize },

    #[error("interface mismatch: outer network expects input dimension {input}, inner network produces {output}")]
    InterfaceMismatch { input: usize, output: usize },

    #[error("depth mismatch: network {index} has depth {depth}, expected {expected}")]
    DepthMismatch {
        index: usize,
        depth: usize,
        expected: usize,
    },

    #[error("incompatible target architecture: {0}")]
    IncompatibleArchitecture(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("empty sample set")]
    EmptySamples,

    #[error("data source exhausted: {0}")]
    SourceExhausted(String),

    #[error("repetition {index}: {source}")]
    Repetition {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by reading or writing external data.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Json(_) | Error::Io(_) => true,
            Error::Repetition { source, .. } => source.is_io(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
