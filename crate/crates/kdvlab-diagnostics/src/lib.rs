//! Measurement layer: weighted norms, Lyapunov functionals, the general
//! weighted energy identity evaluated as a discrete residual, decay-rate
//! fits, smoothing statistics, observability ratios and the standalone
//! inequality corpus.
//!
//! Everything operates on immutable [`kdvlab_solver::Trajectory`] and
//! [`kdvlab_solver::State`] values and is safe for concurrent evaluation.

pub mod decay;
pub mod error;
pub mod higher;
pub mod inequalities;
pub mod lyapunov;
pub mod norms;
pub mod observability;
pub mod residual;
pub mod smoothing;

pub use decay::{fit_decay, DecayFit};
pub use error::DiagError;
pub use higher::higher_derivative_norms;
pub use inequalities::{check_inequalities, corpus_interpolation_constants, InequalityMargin, InequalityReport};
pub use lyapunov::{lyapunov, lyapunov_lattice_check, LyapunovCheck, LyapunovSeries};
pub use norms::{weighted_h1_norm_sq, weighted_norm_sq};
pub use observability::observability_ratio;
pub use residual::{identity_residual, IdentityResidual, TimeWeight};
pub use smoothing::{smoothing_statistic, SmoothingNorm};
