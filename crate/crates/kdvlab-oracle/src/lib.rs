//! Independent brute-force reference: very fine grid, very small step, fully
//! implicit stepping. Certifies convergence orders and cross-validates
//! expected values before the production schemes are trusted.
//!
//! The reference scheme is deliberately `cn-newton` (fully implicit), not the
//! production IMEX pairing, so the two production schemes are validated
//! against a third configuration rather than against themselves.

pub mod cache;
pub mod convergence;
pub mod error;
pub mod scenario;
pub mod solve;

pub use cache::{load_reference, store_reference};
pub use convergence::{convergence_order, ConvergenceStudy};
pub use error::OracleError;
pub use scenario::{OperatorMode, ReferenceScenario};
pub use solve::{reference_solve, solve_scenario, REFERENCE_DT_MAX, REFERENCE_POINTS_MIN};
