use thiserror::Error;

/// Errors raised by the order, measure and quantile machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point, level or argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    /// Measure construction failed; `field` names the offending input field.
    #[error("invalid measure ({field}): {reason}")]
    InvalidMeasure { field: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    /// The operation needs a complete order but the space has gaps or missing extremes.
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("integrand failed at {point}: {reason}")]
    Integrand { point: String, reason: String },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn measure(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidMeasure {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
