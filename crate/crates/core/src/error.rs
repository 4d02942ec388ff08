use thiserror::Error;

/// Errors raised by the numerical kernel and everything built on it.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid index: {0}")]
    Index(String),

    /// The singular value iteration gave up. Carries enough of the matrix
    /// to judge whether it was badly scaled.
    #[error(
        "decomposition did not converge on a {rows}x{cols} matrix \
         (frobenius norm {frobenius:e}, largest entry {max_abs:e})"
    )]
    NoConvergence {
        rows: usize,
        cols: usize,
        frobenius: f64,
        max_abs: f64,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
