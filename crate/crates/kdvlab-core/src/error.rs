use thiserror::Error;

/// Errors raised while constructing domain objects or evaluating quadrature.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid damping profile: {0}")]
    InvalidDamping(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("singular banded system (zero pivot at row {row})")]
    SingularMatrix { row: usize },
}
