//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mismatched variable context: {0}")]
    ContextMismatch(String),
    #[error("nonzero constant term in exponential argument")]
    NonzeroConstantTerm,
    #[error("exact division failed: {0}")]
    NonDivisible(String),
    #[error("series quotient undefined: zero leading coefficient after order matching")]
    SeriesQuotient,
    #[error("invalid Cartan type: {0}")]
    InvalidCartanType(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("model validation failed: {0}")]
    ModelValidation(String),
    #[error("dimension or rank mismatch: {0}")]
    Mismatch(String),
    #[error("class is not invariant under the requested parabolic: {0}")]
    NonInvariantClass(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("Sq2 table required but not present in the model")]
    MissingSq2,
    #[error("no calibration record; run `calibrate` first")]
    MissingCalibration,
    #[error("calibration failed: no convention assignment passes the oracle suite")]
    CalibrationFailed,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
