//! Error type shared by the command implementations, carrying the process
//! exit code contract: 0 success, 2 usage, 3 input validation, 4 numerical
//! failure.

use mlds_core::dynamics::DynamicsError;
use mlds_core::reachability::ReachabilityError;
use mlds_core::spectral::SpectralError;
use mlds_core::stability::StabilityError;
use mlds_core::tensor::TensorError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Io { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Tensor(t) => t.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Tensor(t) => t.into(),
            DynamicsError::DimensionMismatch { .. } => CliError::Input(e.to_string()),
            DynamicsError::InvalidOptions { .. } | DynamicsError::OrderTooSmall { .. } => {
                CliError::Usage(e.to_string())
            }
            DynamicsError::DivergentTerm { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::Tensor(t) => t.into(),
            StabilityError::Spectral(s) => s.into(),
            StabilityError::Dynamics(d) => d.into(),
            StabilityError::OrderTooSmall { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<ReachabilityError> for CliError {
    fn from(e: ReachabilityError) -> Self {
        match e {
            ReachabilityError::Tensor(t) => t.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}
