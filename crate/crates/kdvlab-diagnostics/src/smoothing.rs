//! Smoothing-decay statistics: boundedness of
//! `t^{s/2} e^{mu t} ||u(t)|| / ||u0||_w` over recorded times witnesses the
//! gain of derivatives for positive times combined with exponential decay.

use serde::{Deserialize, Serialize};

use kdvlab_core::{derivative_full, weighted_l2_sq, WeightFamily, WeightSpec};
use kdvlab_solver::Trajectory;

use crate::error::DiagError;
use crate::norms::h1_weights;

/// Which norm enters the statistic, together with the initial norm it is
/// measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "norm", rename_all = "kebab-case")]
pub enum SmoothingNorm {
    /// `||u_x(t)||_{L2}` against `||u0||_{L2_{(x+1)dx}}`, `s = 1`.
    H1,
    /// `||u(t)||_{H1_{(x+1)^m dx}}` against `||u0||_{L2_{(x+1)^m dx}}`, `s = 1`.
    H1WeightedM { m: u32 },
    /// `||u(t)||_{H^s_b}` against `||u0||_{L2_b}`, factor `t^{s/2}`.
    HsB { s: u32, b: f64 },
}

/// Returns `sup over recorded t >= t_min of t^{s/2} e^{mu t} norm(u(t))`
/// divided by the initial weighted norm.
pub fn smoothing_statistic(
    traj: &Trajectory,
    norm: SmoothingNorm,
    mu: f64,
    t_min: f64,
) -> Result<f64, DiagError> {
    if !(t_min > 0.0 && t_min < traj.final_time()) {
        return Err(DiagError::Config(format!(
            "t_min must lie in (0, final time), got {t_min}"
        )));
    }
    if mu < 0.0 {
        return Err(DiagError::Config("mu must be nonnegative".into()));
    }
    let grid = traj.grid();
    let u0 = traj.initial_state();

    let (s_power, initial_norm): (f64, f64) = match norm {
        SmoothingNorm::H1 => {
            let w = WeightSpec::build(grid, WeightFamily::Polynomial { m: 1 })?;
            (1.0, weighted_l2_sq(grid, u0.values(), &w).sqrt())
        }
        SmoothingNorm::H1WeightedM { m } => {
            let w = WeightSpec::build(grid, WeightFamily::Polynomial { m })?;
            (1.0, weighted_l2_sq(grid, u0.values(), &w).sqrt())
        }
        SmoothingNorm::HsB { s, b } => {
            let w = WeightSpec::build(grid, WeightFamily::Exponential { b })?;
            (s as f64, weighted_l2_sq(grid, u0.values(), &w).sqrt())
        }
    };
    if initial_norm == 0.0 {
        return Err(DiagError::UndefinedStatistic(
            "initial weighted norm vanishes".into(),
        ));
    }

    let mut sup = 0.0f64;
    for state in traj.states() {
        let t = state.time();
        if t < t_min {
            continue;
        }
        let value = match norm {
            SmoothingNorm::H1 => {
                let ux = derivative_full(grid, state.values());
                let unit = WeightSpec::build(grid, WeightFamily::Unit)?;
                weighted_l2_sq(grid, &ux, &unit).sqrt()
            }
            SmoothingNorm::H1WeightedM { m } => {
                let (w0, w1) = h1_weights(grid, &WeightFamily::Polynomial { m })?;
                let ux = derivative_full(grid, state.values());
                (weighted_l2_sq(grid, state.values(), &w0) + weighted_l2_sq(grid, &ux, &w1)).sqrt()
            }
            SmoothingNorm::HsB { s, b } => {
                let w = WeightSpec::build(grid, WeightFamily::Exponential { b })?;
                let mut total = weighted_l2_sq(grid, state.values(), &w);
                let mut d = state.values().to_vec();
                for _ in 0..s {
                    d = derivative_full(grid, &d);
                    total += weighted_l2_sq(grid, &d, &w);
                }
                total.sqrt()
            }
        };
        sup = sup.max(t.powf(s_power / 2.0) * (mu * t).exp() * value);
    }
    Ok(sup / initial_norm)
}
