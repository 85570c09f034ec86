//! Recursive Lyapunov functionals
//!
//! ```text
//! V_0(u) = E(u) = 1/2 int u^2 dx
//! V_m(u) = 1/2 int (x+1)^m u^2 dx + d_{m-1} V_{m-1}(u)
//! ```
//!
//! with strictly positive coefficients `d_j`. Their decrease on a sampled
//! time lattice certifies exponential decay of the weighted norms.

use serde::{Deserialize, Serialize};

use kdvlab_core::{weighted_l2_sq, Grid, WeightFamily, WeightSpec};
use kdvlab_solver::{State, Trajectory};

use crate::error::DiagError;

/// Evaluates `V_m(u)` with the coefficient list `d` (`d.len() == m`).
pub fn lyapunov(grid: &Grid, state: &State, m: usize, d: &[f64]) -> Result<f64, DiagError> {
    if d.len() != m {
        return Err(DiagError::Config(format!(
            "order {m} needs exactly {m} coefficients, got {}",
            d.len()
        )));
    }
    if d.iter().any(|&c| !(c > 0.0)) {
        return Err(DiagError::Config("coefficients must be positive".into()));
    }
    let mut value = half_weighted_mass(grid, state, 0)?;
    for k in 1..=m {
        value = half_weighted_mass(grid, state, k as u32)? + d[k - 1] * value;
    }
    Ok(value)
}

fn half_weighted_mass(grid: &Grid, state: &State, m: u32) -> Result<f64, DiagError> {
    let w = WeightSpec::build(grid, WeightFamily::Polynomial { m })?;
    Ok(0.5 * weighted_l2_sq(grid, state.values(), &w))
}

/// `V_m` sampled over the recorded times of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSeries {
    pub order: usize,
    pub coefficients: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl LyapunovSeries {
    pub fn evaluate(traj: &Trajectory, m: usize, d: &[f64]) -> Result<Self, DiagError> {
        let grid = traj.grid();
        let mut times = Vec::new();
        let mut values = Vec::new();
        for s in traj.states() {
            times.push(s.time());
            values.push(lyapunov(grid, s, m, d)?);
        }
        Ok(Self {
            order: m,
            coefficients: d.to_vec(),
            times,
            values,
        })
    }
}

/// Outcome of the sampled-lattice decrease check, including the coefficient
/// doubling ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovCheck {
    pub order: usize,
    /// Coefficients actually used by the passing (or final failing) check.
    pub coefficients: Vec<f64>,
    pub sampling_period: f64,
    pub lattice_times: Vec<f64>,
    pub lattice_values: Vec<f64>,
    pub nonincreasing: bool,
    pub doublings_used: usize,
    /// Advice emitted when the check failed even after the retry ladder.
    pub advice: Option<String>,
}

/// Checks `V_m(u(k T0))` for monotone decrease on the sampling lattice.
/// When the check fails, the last coefficient is doubled (up to `max_doublings`
/// times) and the check repeated; a persistent failure reports the advice to
/// increase `d_{m-1}` rather than failing silently.
pub fn lyapunov_lattice_check(
    traj: &Trajectory,
    m: usize,
    d: &[f64],
    sampling_period: f64,
    max_doublings: usize,
) -> Result<LyapunovCheck, DiagError> {
    if !(sampling_period > 0.0) {
        return Err(DiagError::Config("sampling period must be positive".into()));
    }
    let mut coeffs = d.to_vec();
    let mut doublings = 0usize;
    loop {
        let (times, values) = lattice_values(traj, m, &coeffs, sampling_period)?;
        let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        if nonincreasing || doublings >= max_doublings {
            let advice = if nonincreasing {
                None
            } else {
                Some(format!(
                    "increase d_{} (still failing after {} doublings)",
                    m.saturating_sub(1),
                    doublings
                ))
            };
            return Ok(LyapunovCheck {
                order: m,
                coefficients: coeffs,
                sampling_period,
                lattice_times: times,
                lattice_values: values,
                nonincreasing,
                doublings_used: doublings,
                advice,
            });
        }
        if let Some(last) = coeffs.last_mut() {
            *last *= 2.0;
        } else {
            // m = 0 has no coefficient to grow
            return Ok(LyapunovCheck {
                order: m,
                coefficients: coeffs,
                sampling_period,
                lattice_times: times,
                lattice_values: values,
                nonincreasing,
                doublings_used: doublings,
                advice: Some("V_0 not monotone on the lattice".into()),
            });
        }
        doublings += 1;
    }
}

fn lattice_values(
    traj: &Trajectory,
    m: usize,
    d: &[f64],
    period: f64,
) -> Result<(Vec<f64>, Vec<f64>), DiagError> {
    let grid = traj.grid();
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut k = 0usize;
    loop {
        let t = k as f64 * period;
        if t > traj.final_time() + 1e-9 {
            break;
        }
        match traj.state_at_time(t) {
            Some(s) => {
                times.push(t);
                values.push(lyapunov(grid, s, m, d)?);
            }
            None => {
                return Err(DiagError::TimeOutsideTrajectory(t));
            }
        }
        k += 1;
    }
    Ok((times, values))
}
