//! Experiment orchestration for the damped KdV laboratory: configuration,
//! the scenario library, run/verify/sweep pipelines and result emission.
//!
//! The CSV and summary-JSON files are the interface contract: identical
//! configurations produce byte-identical outputs on the same platform, and
//! every summary validates against the shipped schema.

pub mod config;
pub mod io;
pub mod pipeline;
pub mod scenarios;
pub mod schema;
pub mod summary;
pub mod sweep;
pub mod verify;

pub use config::ExperimentConfig;
pub use pipeline::{execute_run, RunArtifacts};
pub use summary::RunSummary;
pub use sweep::{execute_sweep, SweepConfig};
pub use verify::{execute_verify, VerificationReport};
