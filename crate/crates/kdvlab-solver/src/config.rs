use kdvlab_core::WeightFamily;
use serde::{Deserialize, Serialize};

use crate::error::SolverError;

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Crank-Nicolson on the linear generator, Adams-Bashforth-2 on the
    /// nonlinearity. One banded solve per step.
    ImexCnAb2,
    /// Fully implicit Crank-Nicolson with Newton iteration.
    CnNewton,
    /// Panel-wise Picard iteration on the Duhamel integral form.
    PicardDuhamel,
}

/// Solver parameters. `residual_weights` selects the weight families whose
/// identity-residual time integrals are accumulated along the run (the unit
/// weight is always accumulated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub dt: f64,
    pub final_time: f64,
    pub scheme: Scheme,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    pub panel_length: f64,
    /// Record every k-th state (the final state is always recorded).
    pub output_stride: usize,
    /// Tail monitor window as a fraction of the domain length.
    pub tail_fraction: f64,
    /// Tail-mass fraction above which a truncation warning is recorded.
    pub tail_threshold: f64,
    pub include_nonlinearity: bool,
    pub residual_weights: Vec<WeightFamily>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            final_time: 10.0,
            scheme: Scheme::ImexCnAb2,
            newton_tol: 1e-11,
            newton_max_iter: 30,
            picard_tol: 1e-10,
            picard_max_iter: 60,
            panel_length: 0.25,
            output_stride: 1,
            tail_fraction: 0.1,
            tail_threshold: 1e-6,
            include_nonlinearity: true,
            residual_weights: Vec::new(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SolverError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.final_time > self.dt) {
            return Err(SolverError::Config(format!(
                "final time {} must exceed dt {}",
                self.final_time, self.dt
            )));
        }
        if self.newton_tol <= 0.0 || self.picard_tol <= 0.0 {
            return Err(SolverError::Config("tolerances must be positive".into()));
        }
        if self.output_stride == 0 {
            return Err(SolverError::Config("output stride must be >= 1".into()));
        }
        if !(self.panel_length > 0.0) {
            return Err(SolverError::Config("panel length must be positive".into()));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return Err(SolverError::Config(
                "tail fraction must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    /// Number of time steps to reach the final time on the dt lattice.
    pub fn step_count(&self) -> usize {
        (self.final_time / self.dt).round().max(1.0) as usize
    }
}
