//! The reference solve: fully implicit stepping at reference resolution,
//! cached to disk keyed by scenario hash.

use std::path::Path;

use kdvlab_solver::{Scheme, SolverConfig, State, System};

use crate::cache::{load_reference, store_reference};
use crate::error::OracleError;
use crate::scenario::ReferenceScenario;

/// Reference resolution floor.
pub const REFERENCE_POINTS_MIN: usize = 8001;
/// Reference time-step ceiling.
pub const REFERENCE_DT_MAX: f64 = 2e-4;

/// Runs (or loads from cache) the reference solution of a scenario at the
/// reference resolution.
pub fn reference_solve(
    scenario: &ReferenceScenario,
    cache_dir: Option<&Path>,
) -> Result<State, OracleError> {
    if scenario.points < REFERENCE_POINTS_MIN {
        return Err(OracleError::Scenario(format!(
            "reference runs need at least {REFERENCE_POINTS_MIN} points, got {}",
            scenario.points
        )));
    }
    if scenario.dt > REFERENCE_DT_MAX {
        return Err(OracleError::Scenario(format!(
            "reference runs need dt <= {REFERENCE_DT_MAX}, got {}",
            scenario.dt
        )));
    }
    if let Some(dir) = cache_dir {
        if let Some(state) = load_reference(dir, scenario)? {
            return Ok(state);
        }
    }
    let state = solve_scenario(scenario)?;
    if let Some(dir) = cache_dir {
        store_reference(dir, scenario, &state)?;
    }
    Ok(state)
}

/// Runs the scenario at exactly its configured resolution (no reference
/// floor); the workhorse of the refinement studies.
pub fn solve_scenario(
    scenario: &ReferenceScenario,
) -> Result<State, OracleError> {
    let grid = scenario.grid()?;
    let damping = scenario.damping(&grid)?;
    let ops = scenario.operators(&grid, &damping)?;
    let system = System::new(&grid, &damping, &ops);
    let datum = scenario.datum.sample(&grid)?;
    let cfg = SolverConfig {
        dt: scenario.dt,
        final_time: scenario.final_time,
        scheme: Scheme::CnNewton,
        include_nonlinearity: scenario.include_nonlinearity,
        output_stride: usize::MAX,
        ..Default::default()
    };
    let traj = system.solve(&datum.state, &cfg)?;
    Ok(traj.final_state().clone())
}
