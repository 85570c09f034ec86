//! Panel-wise Picard iteration on the Duhamel integral form
//!
//! ```text
//! u(t) = W(t) u_panel + int_0^t W(t - s) N(u(s)) ds
//! ```
//!
//! with `W` the one-step Crank-Nicolson linear map and the `s`-integral by
//! trapezoid over the step lattice. The iteration contracts only for short
//! panels, so the run is split into panels that restart the iteration from
//! the previous panel's endpoint; a panel whose iteration distance grows for
//! three consecutive sweeps is halved, down to a single step, before the
//! panel-too-long error is surfaced.

use crate::config::SolverConfig;
use crate::error::SolverError;
use crate::nonlinear::nonlinear_interior;
use crate::solve::System;
use crate::state::State;
use crate::stepper::LinearPropagator;
use crate::trajectory::{Trajectory, TrajectoryBuilder};

pub(crate) fn solve_picard_impl(
    system: &System<'_>,
    u0: &State,
    cfg: &SolverConfig,
) -> Result<Trajectory, SolverError> {
    let total_steps = cfg.step_count();
    let panel_steps = ((cfg.panel_length / cfg.dt).round() as usize)
        .max(1)
        .min(total_steps);
    let w = LinearPropagator::new(system.ops, cfg.dt)?;
    let mut builder = TrajectoryBuilder::new(
        system.grid,
        system.damping,
        cfg.dt,
        cfg.output_stride,
        cfg.tail_fraction,
        cfg.tail_threshold,
        &cfg.residual_weights,
        u0,
    )?;

    let h = system.grid.spacing();
    let l2 = |v: &[f64]| (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();

    let mut done = 0usize;
    let mut u_panel = u0.interior().to_vec();
    let mut panel = panel_steps;
    while done < total_steps {
        let m = panel.min(total_steps - done);
        match iterate_panel(system, &w, &u_panel, m, cfg, &l2)? {
            PanelOutcome::Converged(lattice) => {
                for (j, uj) in lattice.iter().enumerate().skip(1) {
                    builder.push_interior(uj, done + j == total_steps);
                }
                u_panel = lattice.into_iter().last().expect("nonempty panel");
                done += m;
            }
            PanelOutcome::NotContracting { grew } => {
                if m == 1 {
                    return Err(SolverError::PanelTooLong {
                        panel: m as f64 * cfg.dt,
                        grew,
                    });
                }
                panel = (m / 2).max(1);
            }
        }
    }
    Ok(builder.finish())
}

enum PanelOutcome {
    Converged(Vec<Vec<f64>>),
    NotContracting { grew: usize },
}

fn iterate_panel(
    system: &System<'_>,
    w: &LinearPropagator,
    u_panel: &[f64],
    m: usize,
    cfg: &SolverConfig,
    l2: &impl Fn(&[f64]) -> f64,
) -> Result<PanelOutcome, SolverError> {
    let dt = cfg.dt;
    // linear part W^j u_panel, reused by every sweep
    let mut lin = Vec::with_capacity(m + 1);
    lin.push(u_panel.to_vec());
    for j in 1..=m {
        let mut next = lin[j - 1].clone();
        w.apply(&mut next);
        lin.push(next);
    }
    // seed: pure linear propagation
    let mut iterate: Vec<Vec<f64>> = lin.clone();
    if !cfg.include_nonlinearity {
        return Ok(PanelOutcome::Converged(iterate));
    }
    let scale = l2(u_panel).max(1e-300);
    let mut prev_dist = f64::INFINITY;
    let mut grew = 0usize;
    for _sweep in 0..cfg.picard_max_iter {
        // trapezoid sweep: running = sum_{s<=j} omega_s W^{j-s} N_s with
        // omega_0 = 1/2, omega_s = 1; integral_j = dt (running - 1/2 N_j)
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        next.push(u_panel.to_vec());
        let mut n_cur = Vec::new();
        nonlinear_interior(system.ops, &iterate[0], &mut n_cur);
        let mut running: Vec<f64> = n_cur.iter().map(|v| 0.5 * v).collect();
        for j in 1..=m {
            // running <- W running + N_j
            w.apply(&mut running);
            nonlinear_interior(system.ops, &iterate[j], &mut n_cur);
            for (r, nj) in running.iter_mut().zip(&n_cur) {
                *r += nj;
            }
            let vj: Vec<f64> = lin[j]
                .iter()
                .zip(&running)
                .zip(&n_cur)
                .map(|((l, r), nj)| l + dt * (r - 0.5 * nj))
                .collect();
            if vj.iter().any(|v| !v.is_finite()) {
                return Err(SolverError::BlowUp { time: j as f64 * dt });
            }
            next.push(vj);
        }
        let dist = (1..=m)
            .map(|j| {
                l2(&next[j]
                    .iter()
                    .zip(&iterate[j])
                    .map(|(a, b)| a - b)
                    .collect::<Vec<f64>>())
            })
            .fold(0.0f64, f64::max);
        iterate = next;
        if dist <= cfg.picard_tol * scale {
            return Ok(PanelOutcome::Converged(iterate));
        }
        if dist > prev_dist {
            grew += 1;
            if grew >= 3 {
                return Ok(PanelOutcome::NotContracting { grew });
            }
        } else {
            grew = 0;
        }
        prev_dist = dist;
    }
    Err(SolverError::NumericalBreakdown {
        time: m as f64 * dt,
        detail: format!(
            "Picard iteration did not reach tolerance in {} sweeps",
            cfg.picard_max_iter
        ),
    })
}
