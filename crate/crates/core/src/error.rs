use thiserror::Error;

use crate::config::Boundary;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),

    #[error("{operation} requires a {expected} lattice, got {found}")]
    WrongBoundary {
        operation: &'static str,
        expected: Boundary,
        found: Boundary,
    },

    #[error("index {index} out of range {min}..={max} for {what}")]
    OutOfRange {
        what: &'static str,
        index: i64,
        min: i64,
        max: i64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver failed to converge for d = {d} (eigenvalue {index})")]
    NoConvergence { d: usize, index: usize },

    #[error("multiplicity mismatch: analytic levels {analytic:?}, numeric levels {numeric:?}")]
    MultiplicityMismatch {
        analytic: Vec<usize>,
        numeric: Vec<usize>,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
