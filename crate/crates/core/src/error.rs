// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density operator: {0}")]
    InvalidDensity(String),

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid outcome {0}; expected +1 or -1")]
    InvalidOutcome(i32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("size cap exceeded: {what} = {requested} > {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("alpha {alpha} outside the allowed range (0, {alpha_max}] for {kind}")]
    AlphaOutOfRange {
        kind: String,
        alpha: f64,
        alpha_max: f64,
    },

    #[error("malformed event: {0}")]
    MalformedEvent(String),

    #[error("disjunction members are not mutually exclusive: {0}")]
    NonExclusiveDisjunction(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown format '{0}'")]
    UnknownFormat(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}
