//! Empirical observability ratio: interior mass over dissipation,
//!
//! ```text
//! int int u^2 dx dt / ( 1/2 int u_x(0,t)^2 dt + int int a u^2 dx dt )
//! ```
//!
//! a lower bound witness for the (unquantified) observability constant that
//! converts dissipation into uniform decay.

use kdvlab_core::WeightFamily;
use kdvlab_solver::Trajectory;

use crate::error::DiagError;

pub fn observability_ratio(traj: &Trajectory, t1: f64, t2: f64) -> Result<f64, DiagError> {
    if !(t1 < t2) {
        return Err(DiagError::Config(format!("interval [{t1}, {t2}] is empty")));
    }
    let k1 = traj
        .step_of_time(t1)
        .ok_or(DiagError::TimeOutsideTrajectory(t1))?;
    let k2 = traj
        .step_of_time(t2)
        .ok_or(DiagError::TimeOutsideTrajectory(t2))?;
    let unit = traj
        .accumulator_for(&WeightFamily::Unit)
        .expect("unit weight is always accumulated");
    // int int u^2 = 2 int E dt
    let mass = 2.0 * (unit.energy_int[k2] - unit.energy_int[k1]);
    let trace = 0.5 * (traj.trace_sq_int()[k2] - traj.trace_sq_int()[k1]);
    let damping = unit.phi_a_u_sq[k2] - unit.phi_a_u_sq[k1];
    let denom = trace + damping;
    if denom <= 0.0 {
        return Err(DiagError::UndefinedRatio);
    }
    Ok(mass / denom)
}
