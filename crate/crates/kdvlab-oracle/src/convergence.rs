//! Refinement-order studies: run a scenario at a ladder of halved `(dx, dt)`
//! pairs, measure errors against the finest level at the common final time,
//! and fit the order by log-log least squares.

use serde::{Deserialize, Serialize};

use kdvlab_core::Grid;
use kdvlab_solver::State;

use crate::error::OracleError;
use crate::scenario::ReferenceScenario;
use crate::solve::solve_scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    /// `(dx, dt)` per level, coarse to fine.
    pub levels: Vec<(f64, f64)>,
    /// L2 error of each non-finest level against the finest, on shared nodes.
    pub errors: Vec<f64>,
    /// Fitted order from log-log least squares of error against dx.
    pub order: f64,
    /// False when errors fail to be positive and decreasing.
    pub valid: bool,
}

/// Runs `levels >= 3` resolutions, each halving `(dx, dt)` of the previous,
/// starting from the scenario's own resolution.
pub fn convergence_order(
    base: &ReferenceScenario,
    levels: usize,
) -> Result<ConvergenceStudy, OracleError> {
    if levels < 3 {
        return Err(OracleError::Scenario(format!(
            "refinement study needs at least 3 levels, got {levels}"
        )));
    }
    let mut resolutions = Vec::with_capacity(levels);
    let mut points = base.points;
    let mut dt = base.dt;
    for _ in 0..levels {
        resolutions.push((points, dt));
        points = (points - 1) * 2 + 1;
        dt /= 2.0;
    }
    let mut states: Vec<(Grid, State)> = Vec::with_capacity(levels);
    for &(n, step) in &resolutions {
        let sc = base.with_resolution(n, step);
        let state = solve_scenario(&sc)?;
        states.push((sc.grid()?, state));
    }
    let fine_state = &states.last().expect("at least three levels").1;
    let mut errors = Vec::with_capacity(levels - 1);
    for (level, (grid, state)) in states[..levels - 1].iter().enumerate() {
        let stride = 1usize << (levels - 1 - level);
        let diff_sq: Vec<f64> = state
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let d = v - fine_state.values()[i * stride];
                d * d
            })
            .collect();
        errors.push(kdvlab_core::trapezoid(grid, &diff_sq).sqrt());
    }
    let valid = errors.iter().all(|&e| e > 0.0)
        && errors.windows(2).all(|w| w[1] < w[0]);
    let order = if valid {
        // log-log least squares of error against dx
        let xs: Vec<f64> = resolutions[..levels - 1]
            .iter()
            .map(|&(n, _)| (base.length / (n - 1) as f64).ln())
            .collect();
        let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
        let nf = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / nf;
        let my = ys.iter().sum::<f64>() / nf;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        sxy / sxx
    } else {
        0.0
    };
    Ok(ConvergenceStudy {
        levels: resolutions
            .iter()
            .map(|&(n, step)| (base.length / (n - 1) as f64, step))
            .collect(),
        errors,
        order,
        valid,
    })
}
