use thiserror::Error;

/// Errors raised by the solvers, diagnostics and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field is defined on a different grid than the operator")]
    GridMismatch,

    #[error("non-finite {what} encountered at step {step}")]
    NonFinite { what: &'static str, step: usize },

    #[error("cumulative relative mass drift {drift:e} exceeds {limit:e} at step {step}")]
    MassDrift { drift: f64, limit: f64, step: usize },

    #[error("obstacle solver did not converge after {iterations} sweeps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("pivoting solver failed: {0}")]
    Pivoting(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("configuration errors: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for configuration or input problems, 3 for
    /// numerical aborts and output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidGrid(_)
            | Error::InvalidParameter(_)
            | Error::InvalidField(_)
            | Error::GridMismatch
            | Error::Config(_)
            | Error::Format { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
