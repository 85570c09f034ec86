//! Recorded solution history plus the running time integrals that the
//! energy-identity residuals are built from.
//!
//! The boundary trace `u_x(0, t_k)` (one-sided, second order) and every
//! accumulator series carry one entry per time step taken, independent of the
//! output stride; recorded states are kept every `stride`-th step and at the
//! final time.

use kdvlab_core::{derivative_full, left_trace, DampingProfile, Grid, WeightFamily, WeightSpec};

use crate::state::State;

/// Cumulative (trapezoid in time over the step lattice) integrals for one
/// weight family `phi`. Each `*_t` series integrates the same quantity
/// against `t`, which lets the residual engine assemble `(T - t)`- and
/// `t`-weighted identities from the same data.
#[derive(Debug, Clone)]
pub struct WeightAccumulators {
    pub(crate) family: WeightFamily,
    /// `E_phi(t_k) = 1/2 int phi u^2 dx`, one entry per step.
    pub energy: Vec<f64>,
    /// `int_0^t E_phi dt`.
    pub energy_int: Vec<f64>,
    /// `int_0^t int phi' u_x^2 dx dt` and its t-weighted variant.
    pub dphi_ux_sq: Vec<f64>,
    pub dphi_ux_sq_t: Vec<f64>,
    /// `int_0^t int (phi' + phi''') u^2 dx dt` and t-weighted variant.
    pub dphi_d3phi_u_sq: Vec<f64>,
    pub dphi_d3phi_u_sq_t: Vec<f64>,
    /// `int_0^t int phi' u^3 dx dt` and t-weighted variant.
    pub dphi_u_cubed: Vec<f64>,
    pub dphi_u_cubed_t: Vec<f64>,
    /// `int_0^t int phi a u^2 dx dt` and t-weighted variant.
    pub phi_a_u_sq: Vec<f64>,
    pub phi_a_u_sq_t: Vec<f64>,
}

impl WeightAccumulators {
    pub fn family(&self) -> &WeightFamily {
        &self.family
    }
}

/// Time-indexed solution history with boundary traces, tail-mass series and
/// residual accumulators.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub(crate) grid: Grid,
    pub(crate) dt: f64,
    pub(crate) stride: usize,
    pub(crate) states: Vec<State>,
    pub(crate) recorded_steps: Vec<usize>,
    /// `u_x(0, t_k)`, one entry per step (index 0 is the initial time).
    pub(crate) trace: Vec<f64>,
    /// `int u^2 dx` per step.
    pub(crate) norm_sq: Vec<f64>,
    /// tail mass fraction per step.
    pub(crate) tail_mass: Vec<f64>,
    /// cumulative `int u_x(0,t)^2 dt` and `int t u_x(0,t)^2 dt` per step.
    pub(crate) trace_sq_int: Vec<f64>,
    pub(crate) trace_sq_t_int: Vec<f64>,
    pub(crate) accums: Vec<WeightAccumulators>,
    /// first time the tail-mass fraction exceeded the configured threshold.
    pub(crate) tail_warning: Option<(f64, f64)>,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Number of steps taken (the per-step series have `step_count + 1` entries).
    pub fn step_count(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn final_time(&self) -> f64 {
        self.step_count() as f64 * self.dt
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn recorded_times(&self) -> Vec<f64> {
        self.recorded_steps.iter().map(|&k| k as f64 * self.dt).collect()
    }

    pub fn initial_state(&self) -> &State {
        &self.states[0]
    }

    pub fn final_state(&self) -> &State {
        self.states.last().expect("trajectory has at least one state")
    }

    /// Looks up a recorded state by time (must lie on the recorded lattice).
    pub fn state_at_time(&self, t: f64) -> Option<&State> {
        let k = (t / self.dt).round() as usize;
        if ((k as f64 * self.dt) - t).abs() > 1e-9 * self.dt.max(1.0) {
            return None;
        }
        let idx = self.recorded_steps.binary_search(&k).ok()?;
        Some(&self.states[idx])
    }

    pub fn trace(&self) -> &[f64] {
        &self.trace
    }

    pub fn norm_sq_series(&self) -> &[f64] {
        &self.norm_sq
    }

    pub fn tail_mass_series(&self) -> &[f64] {
        &self.tail_mass
    }

    pub fn trace_sq_int(&self) -> &[f64] {
        &self.trace_sq_int
    }

    pub fn trace_sq_t_int(&self) -> &[f64] {
        &self.trace_sq_t_int
    }

    pub fn tail_warning(&self) -> Option<(f64, f64)> {
        self.tail_warning
    }

    pub fn accumulators(&self) -> &[WeightAccumulators] {
        &self.accums
    }

    /// Accumulator lookup by weight family label.
    pub fn accumulator_for(&self, family: &WeightFamily) -> Option<&WeightAccumulators> {
        let label = family.label();
        self.accums.iter().find(|a| a.family.label() == label)
    }

    /// Step index of a lattice time, if `t` lies on the step lattice.
    pub fn step_of_time(&self, t: f64) -> Option<usize> {
        let k = (t / self.dt).round();
        if k < 0.0 || k as usize > self.step_count() {
            return None;
        }
        if (k * self.dt - t).abs() > 1e-9 * self.dt.max(1.0) {
            return None;
        }
        Some(k as usize)
    }
}

/// Incremental builder shared by the steppers and the Picard solver: push the
/// interior solution after every time step and finish into a [`Trajectory`].
pub(crate) struct TrajectoryBuilder<'a> {
    grid: &'a Grid,
    dt: f64,
    stride: usize,
    tail_start_index: usize,
    tail_threshold: f64,
    weights: Vec<PreparedWeight>,
    out: Trajectory,
    prev: StepIntegrands,
    step: usize,
}

struct PreparedWeight {
    phi: Vec<f64>,
    dphi: Vec<f64>,
    dphi_plus_d3phi: Vec<f64>,
    phi_a: Vec<f64>,
}

#[derive(Clone, Default)]
struct StepIntegrands {
    trace_sq: f64,
    per_weight: Vec<WeightIntegrands>,
}

#[derive(Clone, Copy, Default)]
struct WeightIntegrands {
    energy: f64,
    dphi_ux_sq: f64,
    dphi_d3phi_u_sq: f64,
    dphi_u_cubed: f64,
    phi_a_u_sq: f64,
}

impl<'a> TrajectoryBuilder<'a> {
    pub(crate) fn new(
        grid: &'a Grid,
        damping: &'a DampingProfile,
        dt: f64,
        stride: usize,
        tail_fraction: f64,
        tail_threshold: f64,
        weight_families: &[WeightFamily],
        u0: &State,
    ) -> Result<Self, crate::error::SolverError> {
        // unit weight always accumulated; deduplicate by label
        let mut families = vec![WeightFamily::Unit];
        for f in weight_families {
            if !families.iter().any(|g| g.label() == f.label()) {
                families.push(f.clone());
            }
        }
        let mut weights = Vec::new();
        let mut accums = Vec::new();
        for fam in &families {
            let spec = WeightSpec::build(grid, fam.clone())?;
            let n = grid.point_count();
            let a = damping.values();
            let mut dphi_plus = vec![0.0; n];
            let mut phi_a = vec![0.0; n];
            for i in 0..n {
                dphi_plus[i] = spec.dphi()[i] + spec.d3phi()[i];
                phi_a[i] = spec.phi()[i] * a[i];
            }
            weights.push(PreparedWeight {
                phi: spec.phi().to_vec(),
                dphi: spec.dphi().to_vec(),
                dphi_plus_d3phi: dphi_plus,
                phi_a,
            });
            accums.push(WeightAccumulators {
                family: fam.clone(),
                energy: Vec::new(),
                energy_int: Vec::new(),
                dphi_ux_sq: Vec::new(),
                dphi_ux_sq_t: Vec::new(),
                dphi_d3phi_u_sq: Vec::new(),
                dphi_d3phi_u_sq_t: Vec::new(),
                dphi_u_cubed: Vec::new(),
                dphi_u_cubed_t: Vec::new(),
                phi_a_u_sq: Vec::new(),
                phi_a_u_sq_t: Vec::new(),
            });
        }
        let tail_start = grid.length() * (1.0 - tail_fraction);
        let tail_start_index = grid
            .nodes()
            .iter()
            .position(|&x| x >= tail_start)
            .unwrap_or(grid.point_count() - 1);
        let out = Trajectory {
            grid: grid.clone(),
            dt,
            stride,
            states: Vec::new(),
            recorded_steps: Vec::new(),
            trace: Vec::new(),
            norm_sq: Vec::new(),
            tail_mass: Vec::new(),
            trace_sq_int: Vec::new(),
            trace_sq_t_int: Vec::new(),
            accums,
            tail_warning: None,
        };
        let mut builder = Self {
            grid,
            dt,
            stride,
            tail_start_index,
            tail_threshold,
            weights,
            out,
            prev: StepIntegrands::default(),
            step: 0,
        };
        builder.ingest(u0.values(), 0, true);
        Ok(builder)
    }

    fn integrands(&self, u_full: &[f64], ux_full: &[f64]) -> StepIntegrands {
        let h = self.grid.spacing();
        let n = u_full.len();
        let trap = |f: &dyn Fn(usize) -> f64| {
            let mut acc = 0.5 * (f(0) + f(n - 1));
            for i in 1..n - 1 {
                acc += f(i);
            }
            acc * h
        };
        let per_weight = self
            .weights
            .iter()
            .map(|w| WeightIntegrands {
                energy: 0.5 * trap(&|i| w.phi[i] * u_full[i] * u_full[i]),
                dphi_ux_sq: trap(&|i| w.dphi[i] * ux_full[i] * ux_full[i]),
                dphi_d3phi_u_sq: trap(&|i| w.dphi_plus_d3phi[i] * u_full[i] * u_full[i]),
                dphi_u_cubed: trap(&|i| w.dphi[i] * u_full[i] * u_full[i] * u_full[i]),
                phi_a_u_sq: trap(&|i| w.phi_a[i] * u_full[i] * u_full[i]),
            })
            .collect();
        let tr = left_trace(self.grid, u_full);
        StepIntegrands {
            trace_sq: tr * tr,
            per_weight,
        }
    }

    fn ingest(&mut self, u_full: &[f64], step: usize, force_record: bool) {
        let ux_full = derivative_full(self.grid, u_full);
        let cur = self.integrands(u_full, &ux_full);
        let t = step as f64 * self.dt;
        let t_prev = if step == 0 { 0.0 } else { (step - 1) as f64 * self.dt };
        let half_dt = 0.5 * self.dt;

        // trace series and cumulative trace integrals
        self.out.trace.push(left_trace(self.grid, u_full));
        if step == 0 {
            self.out.trace_sq_int.push(0.0);
            self.out.trace_sq_t_int.push(0.0);
        } else {
            let last = *self.out.trace_sq_int.last().unwrap();
            let last_t = *self.out.trace_sq_t_int.last().unwrap();
            self.out
                .trace_sq_int
                .push(last + half_dt * (self.prev.trace_sq + cur.trace_sq));
            self.out
                .trace_sq_t_int
                .push(last_t + half_dt * (t_prev * self.prev.trace_sq + t * cur.trace_sq));
        }

        // norm and tail series
        let h = self.grid.spacing();
        let n = u_full.len();
        let mut total = 0.5 * (u_full[0] * u_full[0] + u_full[n - 1] * u_full[n - 1]);
        for i in 1..n - 1 {
            total += u_full[i] * u_full[i];
        }
        total *= h;
        let i0 = self.tail_start_index;
        let mut tail = 0.5 * (u_full[i0] * u_full[i0] + u_full[n - 1] * u_full[n - 1]);
        for i in i0 + 1..n - 1 {
            tail += u_full[i] * u_full[i];
        }
        tail *= h;
        let frac = if total > 0.0 { tail / total } else { 0.0 };
        self.out.norm_sq.push(total);
        self.out.tail_mass.push(frac);
        if self.out.tail_warning.is_none() && total > 0.0 && frac > self.tail_threshold {
            self.out.tail_warning = Some((t, frac));
        }

        // weighted accumulators
        for (k, acc) in self.out.accums.iter_mut().enumerate() {
            let c = &cur.per_weight[k];
            acc.energy.push(c.energy);
            if step == 0 {
                acc.energy_int.push(0.0);
                acc.dphi_ux_sq.push(0.0);
                acc.dphi_ux_sq_t.push(0.0);
                acc.dphi_d3phi_u_sq.push(0.0);
                acc.dphi_d3phi_u_sq_t.push(0.0);
                acc.dphi_u_cubed.push(0.0);
                acc.dphi_u_cubed_t.push(0.0);
                acc.phi_a_u_sq.push(0.0);
                acc.phi_a_u_sq_t.push(0.0);
            } else {
                let p = &self.prev.per_weight[k];
                let push_cum = |series: &mut Vec<f64>, a: f64, b: f64| {
                    let last = *series.last().unwrap();
                    series.push(last + half_dt * (a + b));
                };
                push_cum(&mut acc.energy_int, p.energy, c.energy);
                push_cum(&mut acc.dphi_ux_sq, p.dphi_ux_sq, c.dphi_ux_sq);
                push_cum(
                    &mut acc.dphi_ux_sq_t,
                    t_prev * p.dphi_ux_sq,
                    t * c.dphi_ux_sq,
                );
                push_cum(&mut acc.dphi_d3phi_u_sq, p.dphi_d3phi_u_sq, c.dphi_d3phi_u_sq);
                push_cum(
                    &mut acc.dphi_d3phi_u_sq_t,
                    t_prev * p.dphi_d3phi_u_sq,
                    t * c.dphi_d3phi_u_sq,
                );
                push_cum(&mut acc.dphi_u_cubed, p.dphi_u_cubed, c.dphi_u_cubed);
                push_cum(
                    &mut acc.dphi_u_cubed_t,
                    t_prev * p.dphi_u_cubed,
                    t * c.dphi_u_cubed,
                );
                push_cum(&mut acc.phi_a_u_sq, p.phi_a_u_sq, c.phi_a_u_sq);
                push_cum(&mut acc.phi_a_u_sq_t, t_prev * p.phi_a_u_sq, t * c.phi_a_u_sq);
            }
        }

        if force_record || step % self.stride == 0 {
            self.out
                .states
                .push(State::new(t, u_full.to_vec()).expect("stepper preserves boundary zeros"));
            self.out.recorded_steps.push(step);
        }
        self.prev = cur;
        self.step = step;
    }

    /// Feeds the interior solution after one more time step.
    pub(crate) fn push_interior(&mut self, u_interior: &[f64], last: bool) {
        let full = kdvlab_core::embed_interior(u_interior, self.grid.point_count());
        let step = self.step + 1;
        self.ingest(&full, step, last);
    }

    pub(crate) fn finish(self) -> Trajectory {
        self.out
    }
}
