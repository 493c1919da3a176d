use thiserror::Error;

/// Errors raised by the exact exponent calculus.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    /// A parameter lies outside the domain a theorem requires.
    #[error("domain error: {0}")]
    Domain(String),
    /// The instance is in the wrong summability regime for the requested formula.
    #[error("regime error: {0}")]
    Regime(String),
    /// The requested check is not proven for these parameters.
    #[error("not applicable: {0}")]
    NotApplicable(String),
    /// An index was out of range.
    #[error("index error: {0}")]
    Index(String),
    /// Inconsistent or missing parameters (e.g. r > q).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Failed to parse a scalar or tuple.
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid tensor data: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration infeasible: {0}")]
    Infeasible(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid experiment: {0}")]
    Experiment(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
}
