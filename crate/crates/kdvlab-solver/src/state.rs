use kdvlab_core::Grid;
use serde::{Deserialize, Serialize};

use crate::error::SolverError;

/// Solution vector at one time, sampled on the full grid. The boundary
/// values `u_0` and `u_{N-1}` are identically zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    time: f64,
    values: Vec<f64>,
}

impl State {
    pub fn new(time: f64, values: Vec<f64>) -> Result<Self, SolverError> {
        if !time.is_finite() || time < 0.0 {
            return Err(SolverError::InvalidState(format!("time {time}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::InvalidState("non-finite entries".into()));
        }
        if values.len() < 3 {
            return Err(SolverError::InvalidState("too few nodes".into()));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(SolverError::InvalidState(
                "boundary values must be exactly zero; clamp the samples first".into(),
            ));
        }
        Ok(Self { time, values })
    }

    /// Builds a state from raw samples by clamping the boundary nodes to
    /// zero. Returns the state and the clamping perturbation relative to the
    /// sup norm of the samples (0 when the samples already vanish there).
    pub fn from_samples_clamped(time: f64, mut values: Vec<f64>) -> Result<(Self, f64), SolverError> {
        if values.len() < 3 {
            return Err(SolverError::InvalidState("too few nodes".into()));
        }
        let amp = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let clamp = values[0].abs().max(values[values.len() - 1].abs());
        let n = values.len();
        values[0] = 0.0;
        values[n - 1] = 0.0;
        let rel = if amp > 0.0 { clamp / amp } else { 0.0 };
        Ok((Self::new(time, values)?, rel))
    }

    pub fn zero(grid: &Grid) -> Self {
        Self {
            time: 0.0,
            values: vec![0.0; grid.point_count()],
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[1..self.values.len() - 1]
    }

    pub(crate) fn from_interior(time: f64, interior: &[f64], point_count: usize) -> Self {
        Self {
            time,
            values: kdvlab_core::embed_interior(interior, point_count),
        }
    }
}
