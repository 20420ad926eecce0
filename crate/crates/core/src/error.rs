use thiserror::Error;

#[derive(Debug, Error)]
pub enum DoaError {
    #[error("geometry {kind} is not available for N = {n}")]
    UnsupportedGeometry { kind: String, n: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("rank-deficient column set ({rank} of {cols} columns independent)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("eigendecomposition did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("support size {support} must be below the sensor count {sensors}")]
    SupportTooLarge { support: usize, sensors: usize },

    #[error("coarray aperture too small: {sources} sources need more than {segment} contiguous lags")]
    InsufficientAperture { sources: usize, segment: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DoaError>;
