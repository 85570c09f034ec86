use kdvlab_core::CoreError;
use kdvlab_solver::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid reference scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache entry corrupt: {0}")]
    CacheCorrupt(String),
}
