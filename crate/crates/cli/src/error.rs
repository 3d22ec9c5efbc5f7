use thiserror::Error;

/// Exit codes: 0 ok, 2 config or usage, 3 domain, 4 unsupported space,
/// 5 verification failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {field}: {reason}")]
    Config { field: String, reason: String },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] ordcdf::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0} proposition(s) failed")]
    Verification(usize),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Measure construction errors are config errors naming their field.
    pub fn from_build(e: ordcdf::Error) -> Self {
        match e {
            ordcdf::Error::InvalidMeasure { field, reason } => CliError::Config { field, reason },
            ordcdf::Error::InvalidSpace(reason) => CliError::config("space", reason),
            other => CliError::Core(other),
        }
    }

    pub fn exit_code(&self) -> u8 {
        use ordcdf::Error as E;
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Core(E::UnsupportedSpace(_)) => 4,
            CliError::Core(E::InvalidMeasure { .. } | E::InvalidSpace(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
            CliError::Verification(_) => 5,
        }
    }
}
