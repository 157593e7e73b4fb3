use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("fields live on different grids ({0} vs {1})")]
    GridMismatch(String, String),

    #[error("inverse fractional Laplacian undefined: mean mode is nonzero ({0:e})")]
    NonInvertibleMeanMode(f64),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("power-law fit failed: {0}")]
    FitError(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("solution blew up (non-finite values) at t = {time}")]
    BlowUp { time: f64 },

    #[error("bootstrap iteration did not become stationary within {0} iterations")]
    BootstrapNonConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
