//! One-step maps: the shared Crank-Nicolson linear propagator, the IMEX
//! (CN + Adams-Bashforth-2) stepper and the fully implicit CN-Newton stepper.
//!
//! All steppers work on interior vectors; boundary conditions are baked into
//! the operators.

use kdvlab_core::{BandedLu, BandedMatrix, OperatorSet};

use crate::config::SolverConfig;
use crate::error::SolverError;
use crate::nonlinear::nonlinear_interior;

/// One Crank-Nicolson step of the linear system `u' = A u`:
/// `u^{n+1} = (I - dt/2 A)^{-1} (I + dt/2 A) u^n`.
///
/// Because the symmetric part of `A` is negative semidefinite, this map is
/// nonexpansive in the interior L2 norm; it realizes the discrete linear
/// propagator `W(dt)`.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    lhs: BandedLu,
    half_dt: f64,
    generator: BandedMatrix,
}

impl LinearPropagator {
    pub fn new(ops: &OperatorSet, dt: f64) -> Result<Self, SolverError> {
        let n = ops.interior_count();
        let ident = BandedMatrix::scaled_identity(n, 1.0);
        let lhs = ident.add_scaled(ops.generator(), -dt / 2.0).factor()?;
        Ok(Self {
            lhs,
            half_dt: dt / 2.0,
            generator: ops.generator().clone(),
        })
    }

    /// Applies the one-step map in place.
    pub fn apply(&self, u: &mut Vec<f64>) {
        let au = self.generator.matvec(u);
        for (ui, ai) in u.iter_mut().zip(&au) {
            *ui += self.half_dt * ai;
        }
        self.lhs.solve_in_place(u);
    }

    /// Applies the map with an explicit additive increment on the right-hand
    /// side: `u^{n+1} = (I - dt/2 A)^{-1} [(I + dt/2 A) u^n + extra]`.
    pub fn apply_with_increment(&self, u: &mut Vec<f64>, extra: &[f64]) {
        let au = self.generator.matvec(u);
        for ((ui, ai), ei) in u.iter_mut().zip(&au).zip(extra) {
            *ui += self.half_dt * ai + ei;
        }
        self.lhs.solve_in_place(u);
    }

    /// Solves `(I - dt/2 A) x = b` in place (used by the Duhamel sweep).
    pub fn solve_lhs(&self, b: &mut [f64]) {
        self.lhs.solve_in_place(b);
    }
}

/// Crank-Nicolson / Adams-Bashforth-2 stepper. The nonlinearity enters
/// explicitly: `dt (3/2 N^k - 1/2 N^{k-1})`; the first step replaces the
/// missing history by an explicit midpoint predictor sub-step.
pub struct ImexStepper<'a> {
    ops: &'a OperatorSet,
    propagator: LinearPropagator,
    dt: f64,
    include_nonlinearity: bool,
    prev_nonlinear: Option<Vec<f64>>,
    scratch: Vec<f64>,
}

impl<'a> ImexStepper<'a> {
    pub fn new(ops: &'a OperatorSet, cfg: &SolverConfig) -> Result<Self, SolverError> {
        Ok(Self {
            ops,
            propagator: LinearPropagator::new(ops, cfg.dt)?,
            dt: cfg.dt,
            include_nonlinearity: cfg.include_nonlinearity,
            prev_nonlinear: None,
            scratch: Vec::new(),
        })
    }

    /// Advances one step; `time` is the current time (diagnostic only).
    pub fn step(&mut self, u: &mut Vec<f64>, time: f64) -> Result<(), SolverError> {
        if !self.include_nonlinearity {
            self.propagator.apply(u);
        } else {
            let mut cur = Vec::new();
            nonlinear_interior(self.ops, u, &mut cur);
            let extra: Vec<f64> = match &self.prev_nonlinear {
                Some(prev) => cur
                    .iter()
                    .zip(prev)
                    .map(|(c, p)| self.dt * (1.5 * c - 0.5 * p))
                    .collect(),
                None => {
                    // explicit midpoint predictor sub-step for the first step
                    let au = self.ops.generator().matvec(u);
                    let half: Vec<f64> = u
                        .iter()
                        .zip(&au)
                        .zip(&cur)
                        .map(|((ui, ai), ni)| ui + 0.5 * self.dt * (ai + ni))
                        .collect();
                    nonlinear_interior(self.ops, &half, &mut self.scratch);
                    self.scratch.iter().map(|m| self.dt * m).collect()
                }
            };
            self.propagator.apply_with_increment(u, &extra);
            self.prev_nonlinear = Some(cur);
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::BlowUp { time: time + self.dt });
        }
        Ok(())
    }
}

/// Fully implicit Crank-Nicolson with a banded Newton iteration.
pub struct CnNewtonStepper<'a> {
    ops: &'a OperatorSet,
    dt: f64,
    tol: f64,
    max_iter: usize,
    include_nonlinearity: bool,
    norm_weight: f64,
    last_iterations: usize,
    /// constant Jacobian factorization, valid when the nonlinearity is off
    linear_lu: Option<BandedLu>,
}

impl<'a> CnNewtonStepper<'a> {
    pub fn new(ops: &'a OperatorSet, cfg: &SolverConfig, spacing: f64) -> Self {
        Self {
            ops,
            dt: cfg.dt,
            tol: cfg.newton_tol,
            max_iter: cfg.newton_max_iter,
            include_nonlinearity: cfg.include_nonlinearity,
            norm_weight: spacing,
            last_iterations: 0,
            linear_lu: None,
        }
    }

    pub fn last_iterations(&self) -> usize {
        self.last_iterations
    }

    fn nonlinear(&self, u: &[f64], out: &mut Vec<f64>) {
        if self.include_nonlinearity {
            nonlinear_interior(self.ops, u, out);
        } else {
            out.clear();
            out.resize(u.len(), 0.0);
        }
    }

    /// Jacobian of the residual `G(v) = v - u - dt/2 (A v + N(v) + rhs_k)`:
    /// `J = I - dt/2 (A + N'(v))` with
    /// `N'(v) w = -(1/3) (w . D1 v + v . D1 w + 2 D1 (v . w))`.
    fn jacobian(&self, v: &[f64]) -> BandedMatrix {
        let n = v.len();
        let a = self.ops.generator();
        let mut j = BandedMatrix::scaled_identity(n, 1.0).add_scaled(a, -self.dt / 2.0);
        if self.include_nonlinearity {
            let d1 = self.ops.d1();
            let d1v = d1.matvec(v);
            let c = self.dt / 6.0; // dt/2 * 1/3
            for r in 0..n {
                j.add(r, r, c * d1v[r]);
                let lo = r.saturating_sub(1);
                let hi = (r + 1).min(n - 1);
                for col in lo..=hi {
                    let d = d1.get(r, col);
                    if d != 0.0 {
                        // v . D1 w contribution and 2 D1 (v . w)
                        j.add(r, col, c * (v[r] * d + 2.0 * d * v[col]));
                    }
                }
            }
        }
        j
    }

    pub fn step(&mut self, u: &mut Vec<f64>, time: f64) -> Result<(), SolverError> {
        let n = u.len();
        let a = self.ops.generator();
        let mut nu = Vec::new();
        self.nonlinear(u, &mut nu);
        let au = a.matvec(u);
        // fixed part of the residual: u + dt/2 (A u + N(u))
        let fixed: Vec<f64> = u
            .iter()
            .zip(&au)
            .zip(&nu)
            .map(|((ui, ai), ni)| ui + 0.5 * self.dt * (ai + ni))
            .collect();
        // predictor: explicit Euler
        let mut v: Vec<f64> = u
            .iter()
            .zip(&au)
            .zip(&nu)
            .map(|((ui, ai), ni)| ui + self.dt * (ai + ni))
            .collect();
        let mut nv = Vec::new();
        let mut converged = false;
        self.last_iterations = 0;
        for _ in 0..=self.max_iter {
            let av = a.matvec(&v);
            self.nonlinear(&v, &mut nv);
            let mut res: Vec<f64> = (0..n)
                .map(|i| v[i] - 0.5 * self.dt * (av[i] + nv[i]) - fixed[i])
                .collect();
            let rn = (self.norm_weight * res.iter().map(|d| d * d).sum::<f64>()).sqrt();
            if rn < self.tol {
                converged = true;
                break;
            }
            if self.last_iterations == self.max_iter {
                break;
            }
            self.last_iterations += 1;
            if !self.include_nonlinearity {
                if self.linear_lu.is_none() {
                    let jac = self.jacobian(&v);
                    self.linear_lu =
                        Some(jac.factor().map_err(|e| SolverError::NumericalBreakdown {
                            time,
                            detail: e.to_string(),
                        })?);
                }
                self.linear_lu.as_ref().unwrap().solve_in_place(&mut res);
            } else {
                let jac = self.jacobian(&v);
                let lu = jac.factor().map_err(|e| SolverError::NumericalBreakdown {
                    time,
                    detail: e.to_string(),
                })?;
                lu.solve_in_place(&mut res);
            }
            for (vi, di) in v.iter_mut().zip(&res) {
                *vi -= di;
            }
            let dn = (self.norm_weight * res.iter().map(|d| d * d).sum::<f64>()).sqrt();
            if dn < self.tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SolverError::NumericalBreakdown {
                time,
                detail: format!("Newton did not converge in {} iterations", self.max_iter),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::BlowUp { time: time + self.dt });
        }
        *u = v;
        Ok(())
    }
}
