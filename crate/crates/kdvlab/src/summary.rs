//! Machine-readable run summary. Serialization order is fixed (struct fields
//! and sorted maps), so identical runs produce byte-identical JSON.

use std::collections::BTreeMap;

use kdvlab_diagnostics::{DecayFit, IdentityResidual, InequalityMargin, LyapunovCheck};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub label: String,
    pub scheme: String,
    /// Effective configuration with all defaults filled.
    pub config: ExperimentConfig,
    pub clamp: ClampReport,
    pub final_time: f64,
    pub steps: usize,
    pub tail_warning: Option<TailWarning>,
    pub fits: Vec<DecayFit>,
    pub lyapunov: Vec<LyapunovCheck>,
    pub residuals: Vec<IdentityResidual>,
    pub smoothing: Vec<SmoothingResult>,
    pub inequalities: Option<CorpusSummary>,
    pub spectral: Vec<SpectralResult>,
    pub observability: Option<f64>,
    /// Named pass/fail flags for every check the run performed.
    pub flags: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClampReport {
    pub relative_perturbation: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailWarning {
    pub time: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingResult {
    pub norm: String,
    pub mu: f64,
    pub t_min: f64,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub b: f64,
    pub omega: f64,
    /// Dissipativity bound `b^3 + b` (without damping shift).
    pub bound: f64,
    /// `bound + 10 dx^2 - omega`; nonnegative means the bound holds.
    pub margin: f64,
    /// `4 b^3 + b < a0`, the exponential-weight decay threshold.
    pub threshold_satisfied: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub states: usize,
    pub seed: u64,
    pub b: f64,
    pub all_pass: bool,
    /// Worst margin per inequality over the corpus.
    pub worst: Vec<InequalityMargin>,
    /// Empirical interpolation constants per epsilon.
    pub interpolation: Vec<(f64, f64)>,
}

/// Renders a float with 17 significant decimal digits, enough to reproduce
/// the exact bit pattern on re-parse.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
