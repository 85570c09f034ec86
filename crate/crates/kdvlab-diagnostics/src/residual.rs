//! The general weighted energy identity evaluated as a discrete residual.
//!
//! For solutions of the damped KdV system and a spatial weight `phi` the
//! continuum identity over `[t1, t2]` reads
//!
//! ```text
//! [ 1/2 int phi u^2 dx ]_{t1}^{t2}
//!   + 3/2 int int phi' u_x^2      - 1/2 int int (phi' + phi''') u^2
//!   - 1/3 int int phi' u^3        +     int int phi a u^2
//!   + 1/2 phi(0) int u_x(0,t)^2 dt   =   0,
//! ```
//!
//! which specializes to the unweighted energy balance (`phi = 1`), the
//! first-moment identity (`phi = x`), the `(x+1)^m` identities and the
//! `e^{2bx}` identity. A time weight `psi(t)` multiplies every time integral
//! and adds the endpoint terms `[1/2 psi phi u^2]` together with
//! `- int psi' * (1/2 int phi u^2) dt`; `psi = T - t` (with `T = t2`)
//! reproduces the time-weighted identities used for observability, `psi = t`
//! the smoothing multiplier.
//!
//! All time integrals are trapezoid sums over the step lattice assembled from
//! the trajectory's running accumulators; the boundary trace uses the stored
//! one-sided series.

use serde::{Deserialize, Serialize};

use kdvlab_core::WeightSpec;
use kdvlab_solver::{Trajectory, WeightAccumulators};

use crate::error::DiagError;

/// Time-weight tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeWeight {
    None,
    /// `psi(t) = T - t` with `T` the right end of the interval.
    TMinusT,
    /// `psi(t) = t`.
    T,
}

impl TimeWeight {
    pub fn label(&self) -> &'static str {
        match self {
            TimeWeight::None => "none",
            TimeWeight::TMinusT => "T-minus-t",
            TimeWeight::T => "t",
        }
    }
}

/// One evaluated identity residual with its magnitude scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub weight: String,
    pub time_weight: TimeWeight,
    pub interval: (f64, f64),
    pub residual: f64,
    /// Largest absolute term entering the residual.
    pub scale: f64,
    /// `residual / scale`; exact zero when every term vanishes.
    pub relative: f64,
    /// The individual terms, for reporting.
    pub terms: Vec<(String, f64)>,
}

struct PsiIntegrals {
    tw: TimeWeight,
    t_end: f64,
    k1: usize,
    k2: usize,
}

impl PsiIntegrals {
    /// `int_{t1}^{t2} psi(t) f(t) dt` from cumulative `F = int f` and
    /// `Ft = int t f`.
    fn eval(&self, cum: &[f64], cum_t: &[f64]) -> f64 {
        let df = cum[self.k2] - cum[self.k1];
        match self.tw {
            TimeWeight::None => df,
            TimeWeight::TMinusT => self.t_end * df - (cum_t[self.k2] - cum_t[self.k1]),
            TimeWeight::T => cum_t[self.k2] - cum_t[self.k1],
        }
    }

    fn psi(&self, t: f64) -> f64 {
        match self.tw {
            TimeWeight::None => 1.0,
            TimeWeight::TMinusT => self.t_end - t,
            TimeWeight::T => t,
        }
    }

    fn psi_prime(&self) -> f64 {
        match self.tw {
            TimeWeight::None => 0.0,
            TimeWeight::TMinusT => -1.0,
            TimeWeight::T => 1.0,
        }
    }
}

/// Evaluates the weighted identity residual on `[t1, t2]`.
///
/// The trajectory must have been produced with output stride 1 and must have
/// accumulated the requested weight family (`SolverConfig::residual_weights`).
pub fn identity_residual(
    traj: &Trajectory,
    weight: &WeightSpec,
    time_weight: TimeWeight,
    t1: f64,
    t2: f64,
) -> Result<IdentityResidual, DiagError> {
    if traj.stride() != 1 {
        return Err(DiagError::InsufficientResolution {
            stride: traj.stride(),
        });
    }
    if !(t1 < t2) {
        return Err(DiagError::Config(format!("interval [{t1}, {t2}] is empty")));
    }
    let k1 = traj
        .step_of_time(t1)
        .ok_or(DiagError::TimeOutsideTrajectory(t1))?;
    let k2 = traj
        .step_of_time(t2)
        .ok_or(DiagError::TimeOutsideTrajectory(t2))?;
    let acc: &WeightAccumulators = traj
        .accumulator_for(weight.family())
        .ok_or_else(|| DiagError::WeightNotAccumulated(weight.family().label()))?;

    let psi = PsiIntegrals {
        tw: time_weight,
        t_end: t2,
        k1,
        k2,
    };

    // endpoint term [ psi E_phi ]_{t1}^{t2}
    let endpoint = psi.psi(t2) * acc.energy[k2] - psi.psi(t1) * acc.energy[k1];
    // - int psi' E_phi dt
    let psi_prime_term = -psi.psi_prime() * (acc.energy_int[k2] - acc.energy_int[k1]);
    let ux_term = 1.5 * psi.eval(&acc.dphi_ux_sq, &acc.dphi_ux_sq_t);
    let u_term = -0.5 * psi.eval(&acc.dphi_d3phi_u_sq, &acc.dphi_d3phi_u_sq_t);
    let cubic_term = -(1.0 / 3.0) * psi.eval(&acc.dphi_u_cubed, &acc.dphi_u_cubed_t);
    let damping_term = psi.eval(&acc.phi_a_u_sq, &acc.phi_a_u_sq_t);
    let trace_term =
        0.5 * weight.phi_origin() * psi.eval(traj.trace_sq_int(), traj.trace_sq_t_int());

    let terms = vec![
        ("endpoint".to_string(), endpoint),
        ("time-weight".to_string(), psi_prime_term),
        ("gradient".to_string(), ux_term),
        ("mass".to_string(), u_term),
        ("cubic".to_string(), cubic_term),
        ("damping".to_string(), damping_term),
        ("trace".to_string(), trace_term),
    ];
    let residual: f64 = terms.iter().map(|(_, v)| v).sum();
    let scale = terms.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let relative = if scale > 0.0 { residual / scale } else { 0.0 };
    Ok(IdentityResidual {
        weight: weight.family().label(),
        time_weight,
        interval: (t1, t2),
        residual,
        scale,
        relative,
        terms,
    })
}
