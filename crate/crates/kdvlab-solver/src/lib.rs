//! Time integration of the damped KdV system
//!
//! ```text
//! u_t + u_x + u_xxx + u u_x + a(x) u = 0,   u(0,t) = 0
//! ```
//!
//! on the truncated half-line, by three routes: an IMEX stepper
//! (Crank-Nicolson on the linear generator, Adams-Bashforth-2 on the
//! nonlinearity), a fully implicit Crank-Nicolson-Newton stepper, and a
//! panel-wise Picard iteration on the Duhamel integral form. All three are
//! second order in time and share the spatial operators, so pairwise
//! differences measure pure time-discretization error.
//!
//! A [`Trajectory`] carries, besides the recorded states, the per-step
//! boundary-trace series and the running time integrals that the diagnostics
//! crate turns into energy-identity residuals.

pub mod config;
pub mod initial;
pub mod error;
pub mod nonlinear;
pub mod picard;
pub mod solve;
pub mod state;
pub mod stepper;
pub mod trajectory;

pub use config::{Scheme, SolverConfig};
pub use error::SolverError;
pub use initial::{InitialDatum, SampledDatum};
pub use nonlinear::nonlinear_term;
pub use solve::{linear_propagator, System};
pub use state::State;
pub use stepper::{CnNewtonStepper, ImexStepper, LinearPropagator};
pub use trajectory::{Trajectory, WeightAccumulators};
