use kdvlab_core::CoreError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("numerical breakdown at t = {time}: {detail}")]
    NumericalBreakdown { time: f64, detail: String },

    #[error("solution blew up (non-finite values) at t = {time}")]
    BlowUp { time: f64 },

    #[error(
        "Picard iteration did not contract on a panel of length {panel} \
         (distance grew for {grew} consecutive sweeps); use a shorter panel"
    )]
    PanelTooLong { panel: f64, grew: usize },
}
