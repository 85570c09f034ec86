//! Analysis of the exponentially conjugated linear generator
//!
//! ```text
//! B v = -(D1 - b I) v - (D1 - b I)^3 v - a(x) v
//! ```
//!
//! whose flow governs the weighted norm `||u||_{L2_b} = ||e^{bx} u||_{L2}`.
//! The quantity of interest is the numerical abscissa (largest Rayleigh
//! quotient of the symmetric part): integration by parts bounds it by
//! `b^3 + b` for any nonnegative damping, and by `b^3 + b - a0` when
//! `a = a0` everywhere. Power iteration on the symmetric part retrieves it
//! without a full eigensolver.

pub mod abscissa;
pub mod analysis;
pub mod conjugated;
pub mod error;

pub use abscissa::{numerical_abscissa, AbscissaResult};
pub use analysis::{predicted_vs_fitted, ComparisonReport, GeneratorAnalysis};
pub use conjugated::build_conjugated_generator;
pub use error::SpectralError;
