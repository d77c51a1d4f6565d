use thiserror::Error;

/// Errors raised by the spectral-truncation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A quadrature grid is too coarse for the requested integral.
    #[error("grid resolution {resolution} too coarse: need more than {required}")]
    Resolution { resolution: usize, required: f64 },

    /// An explicit bound was requested outside the range where it holds.
    #[error("bound not applicable: {0}")]
    BoundNotApplicable(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("instance too large: {0}")]
    ScaleLimit(String),

    /// An exact computation contradicted a proven identity. This indicates a bug.
    #[error("internal contradiction: {0}")]
    Internal(String),

    #[error("arithmetic overflow in exact computation")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
