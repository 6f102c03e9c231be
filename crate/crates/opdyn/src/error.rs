use thiserror::Error;

/// Errors surfaced by the numerical kernel and the layers built on top of it.
#[derive(Debug, Error)]
pub enum OpdynError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("iteration failed to converge at index {index}: {context}")]
    Convergence { index: usize, context: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator specification error: {0}")]
    Specification(String),

    #[error("dimension cap exceeded: {0}")]
    CapExceeded(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("not a member of the model algebra: {0}")]
    Membership(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OpdynError>;
