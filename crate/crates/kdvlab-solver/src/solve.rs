//! Trajectory-level drivers: `solve` for the steppers, `linear_propagator`
//! for the discrete semigroup `W(t)`.

use kdvlab_core::{DampingProfile, Grid, OperatorSet};

use crate::config::{Scheme, SolverConfig};
use crate::error::SolverError;
use crate::picard::solve_picard_impl;
use crate::state::State;
use crate::stepper::{CnNewtonStepper, ImexStepper, LinearPropagator};
use crate::trajectory::{Trajectory, TrajectoryBuilder};

/// The assembled problem: grid, damping and eliminated operators.
#[derive(Debug, Clone, Copy)]
pub struct System<'a> {
    pub grid: &'a Grid,
    pub damping: &'a DampingProfile,
    pub ops: &'a OperatorSet,
}

impl<'a> System<'a> {
    pub fn new(grid: &'a Grid, damping: &'a DampingProfile, ops: &'a OperatorSet) -> Self {
        Self { grid, damping, ops }
    }

    /// Advances the system to the configured final time and records the
    /// trajectory. Terminates with a blow-up error if non-finite values
    /// appear; a tail-mass warning is recorded on the trajectory, not fatal.
    pub fn solve(&self, u0: &State, cfg: &SolverConfig) -> Result<Trajectory, SolverError> {
        cfg.validate()?;
        self.check_state(u0)?;
        match cfg.scheme {
            Scheme::PicardDuhamel => solve_picard_impl(self, u0, cfg),
            _ => self.solve_stepping(u0, cfg),
        }
    }

    /// Picard-Duhamel route regardless of the configured scheme tag.
    pub fn solve_picard(&self, u0: &State, cfg: &SolverConfig) -> Result<Trajectory, SolverError> {
        cfg.validate()?;
        self.check_state(u0)?;
        solve_picard_impl(self, u0, cfg)
    }

    fn solve_stepping(&self, u0: &State, cfg: &SolverConfig) -> Result<Trajectory, SolverError> {
        let steps = cfg.step_count();
        let mut builder = TrajectoryBuilder::new(
            self.grid,
            self.damping,
            cfg.dt,
            cfg.output_stride,
            cfg.tail_fraction,
            cfg.tail_threshold,
            &cfg.residual_weights,
            u0,
        )?;
        let mut u = u0.interior().to_vec();
        match cfg.scheme {
            Scheme::ImexCnAb2 => {
                let mut stepper = ImexStepper::new(self.ops, cfg)?;
                for k in 0..steps {
                    stepper.step(&mut u, k as f64 * cfg.dt)?;
                    builder.push_interior(&u, k + 1 == steps);
                }
            }
            Scheme::CnNewton => {
                let mut stepper = CnNewtonStepper::new(self.ops, cfg, self.grid.spacing());
                for k in 0..steps {
                    stepper.step(&mut u, k as f64 * cfg.dt)?;
                    builder.push_interior(&u, k + 1 == steps);
                }
            }
            Scheme::PicardDuhamel => unreachable!("handled in solve"),
        }
        Ok(builder.finish())
    }

    fn check_state(&self, u0: &State) -> Result<(), SolverError> {
        if u0.values().len() != self.grid.point_count() {
            return Err(SolverError::InvalidState(format!(
                "state has {} nodes, grid {}",
                u0.values().len(),
                self.grid.point_count()
            )));
        }
        Ok(())
    }
}

/// Applies the discrete linear propagator `W(t)` (Crank-Nicolson steps of the
/// linear generator) to a state. `t` must lie on the `dt` lattice so that the
/// semigroup property `W(t1 + t2) = W(t2) W(t1)` holds exactly.
pub fn linear_propagator(
    ops: &OperatorSet,
    u0: &State,
    t: f64,
    dt: f64,
) -> Result<State, SolverError> {
    if t < 0.0 || !t.is_finite() || dt <= 0.0 {
        return Err(SolverError::Config(format!("propagator times t={t}, dt={dt}")));
    }
    let k = (t / dt).round();
    if (k * dt - t).abs() > 1e-9 * dt.max(1.0) {
        return Err(SolverError::Config(format!(
            "t = {t} does not lie on the dt = {dt} lattice"
        )));
    }
    let steps = k as usize;
    let mut u = u0.interior().to_vec();
    let w = LinearPropagator::new(ops, dt)?;
    for j in 0..steps {
        w.apply(&mut u);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::BlowUp {
                time: (j + 1) as f64 * dt,
            });
        }
    }
    Ok(State::from_interior(
        u0.time() + t,
        &u,
        u0.values().len(),
    ))
}
