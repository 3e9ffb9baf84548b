use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("tail probability {0} admits no finite truncation for a thermal field with m > 0")]
    NoFiniteTruncation(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("distribution mean {distribution} does not match model mean {model}")]
    InconsistentDistribution { distribution: f64, model: f64 },

    #[error("matrix is not Hermitian (max |M - M^H| = {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge (off-diagonal norm {0:e})")]
    EigenNotConverged(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error(
        "negativity {value:e} is below the truncation tolerance -{tolerance:e}; \
         block coefficients are inconsistent"
    )]
    NegativityBelowTolerance { value: f64, tolerance: f64 },

    #[error("oracle routes disagree: trace-norm route {trace_norm:e}, negative-sum route {negative_sum:e}")]
    OracleMismatch { trace_norm: f64, negative_sum: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
