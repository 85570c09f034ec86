//! Shared vocabulary of the damped KdV laboratory: truncated half-line grids,
//! spatial weight families, localized damping profiles, banded finite-difference
//! operators with boundary elimination, and trapezoid quadrature.
//!
//! Everything here is immutable after construction and free of interior
//! mutability, so values can be shared across concurrent simulation tasks
//! without synchronization.

pub mod banded;
pub mod damping;
pub mod error;
pub mod grid;
pub mod operators;
pub mod quadrature;
pub mod weight;

pub use banded::{BandedLu, BandedMatrix};
pub use damping::{DampingProfile, DampingShape};
pub use error::CoreError;
pub use grid::Grid;
pub use operators::{
    derivative_full, embed_interior, extract_interior, left_trace, OperatorSet,
};
pub use quadrature::{quadrature, trapezoid, trapezoid_from, weighted_l2_sq};
pub use weight::{WeightFamily, WeightSpec};
