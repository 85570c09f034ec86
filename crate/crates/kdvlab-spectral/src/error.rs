use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SpectralError {
    #[error("invalid spectral configuration: {0}")]
    Config(String),

    #[error("power iteration did not converge in {max_iter} iterations (last estimate {last})")]
    NoConvergence { max_iter: usize, last: f64 },
}
