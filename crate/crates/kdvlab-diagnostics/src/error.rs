use kdvlab_core::CoreError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DiagError {
    #[error("invalid diagnostic configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("residual evaluation needs stride-1 trajectories, this one has stride {stride}")]
    InsufficientResolution { stride: usize },

    #[error("insufficient data: need at least {needed} usable samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("weight '{0}' was not accumulated along this trajectory")]
    WeightNotAccumulated(String),

    #[error("time {0} does not lie on the trajectory lattice")]
    TimeOutsideTrajectory(f64),

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    #[error("undefined ratio: denominator vanishes (zero trajectory?)")]
    UndefinedRatio,
}
