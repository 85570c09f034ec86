//! Experiment configuration: one JSON document describing grid, damping,
//! initial datum, solver, diagnostics and output. Validation reports the
//! offending field by name.

use kdvlab_core::{DampingShape, WeightFamily};
use kdvlab_solver::{InitialDatum, Scheme, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub label: String,
    pub grid: GridConfig,
    pub damping: DampingConfig,
    pub initial: InitialDatum,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub length: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DampingConfig {
    pub a0: f64,
    pub x0: f64,
    #[serde(default = "default_shape")]
    pub shape: DampingShape,
    #[serde(default)]
    pub ramp_width: f64,
    /// `a = a0` at every node, overriding the shape.
    #[serde(default)]
    pub constant: bool,
    /// Explicit samples for custom profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

fn default_shape() -> DampingShape {
    DampingShape::Step
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Weight families for norms columns and identity residuals.
    pub weights: Vec<WeightFamily>,
    /// Lyapunov orders with their coefficient lists.
    pub lyapunov: Vec<LyapunovRequest>,
    /// Fit window as fractions of the final time.
    pub fit_window_fraction: (f64, f64),
    /// Sampling period of the Lyapunov lattice check.
    pub lyapunov_sampling_period: f64,
    pub lyapunov_max_doublings: usize,
    /// Time-weight tags evaluated by residual runs.
    pub time_weights: Vec<String>,
    /// Residual evaluation intervals (requires stride-1 runs).
    pub residual_intervals: Vec<(f64, f64)>,
    pub smoothing: Vec<SmoothingRequest>,
    pub inequality_corpus: CorpusConfig,
    /// Conjugation rates for the abscissa analysis.
    pub spectral_b: Vec<f64>,
    /// Interval of the observability ratio, when requested.
    pub observability_interval: Option<(f64, f64)>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            weights: Vec::new(),
            lyapunov: Vec::new(),
            fit_window_fraction: (0.2, 0.9),
            lyapunov_sampling_period: 5.0,
            lyapunov_max_doublings: 3,
            time_weights: vec!["none".into()],
            residual_intervals: Vec::new(),
            smoothing: Vec::new(),
            inequality_corpus: CorpusConfig::default(),
            spectral_b: Vec::new(),
            observability_interval: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovRequest {
    pub m: usize,
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingRequest {
    /// `h1`, `h1-weighted-m`, or `hs-b`.
    pub norm: String,
    #[serde(default)]
    pub m: u32,
    #[serde(default)]
    pub s: u32,
    #[serde(default)]
    pub b: f64,
    pub mu: f64,
    pub t_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub enabled: bool,
    pub count: usize,
    pub b: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            count: 100,
            b: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Cross-referenced parameter validation; failures name the field.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.grid.length > 0.0) {
            return Err("grid.length: must be positive".into());
        }
        if self.grid.points < 8 {
            return Err("grid.points: must be at least 8".into());
        }
        if !(self.damping.a0 > 0.0) {
            return Err("damping.a0: must be positive".into());
        }
        if !(self.damping.x0 > 0.0 && self.damping.x0 < self.grid.length) {
            return Err(format!(
                "damping.x0: must lie in (0, {}), got {}",
                self.grid.length, self.damping.x0
            ));
        }
        if self.damping.ramp_width < 0.0 {
            return Err("damping.ramp_width: must be nonnegative".into());
        }
        if let Some(samples) = &self.damping.samples {
            if samples.len() != self.grid.points {
                return Err(format!(
                    "damping.samples: {} values but grid.points = {}",
                    samples.len(),
                    self.grid.points
                ));
            }
        }
        self.solver.validate().map_err(|e| format!("solver: {e}"))?;
        for w in &self.diagnostics.weights {
            if let WeightFamily::Polynomial { m } = w {
                if *m > 4 {
                    return Err(format!("diagnostics.weights: polynomial order {m} > 4"));
                }
            }
            if let WeightFamily::Exponential { b } = w {
                if !(*b > 0.0) {
                    return Err("diagnostics.weights: exponential b must be positive".into());
                }
                // weight must stay finite on the grid
                if 2.0 * b * self.grid.length > 700.0 {
                    return Err(format!(
                        "diagnostics.weights: e^{{2bx}} overflows at b = {b}, L = {}",
                        self.grid.length
                    ));
                }
            }
        }
        for l in &self.diagnostics.lyapunov {
            if l.d.len() != l.m {
                return Err(format!(
                    "diagnostics.lyapunov: order {} needs {} coefficients, got {}",
                    l.m,
                    l.m,
                    l.d.len()
                ));
            }
            if l.m > 4 {
                return Err("diagnostics.lyapunov: order must be <= 4".into());
            }
        }
        let (fa, fb) = self.diagnostics.fit_window_fraction;
        if !(0.0 <= fa && fa < fb && fb <= 1.0) {
            return Err("diagnostics.fit_window_fraction: need 0 <= a < b <= 1".into());
        }
        for tw in &self.diagnostics.time_weights {
            if !["none", "t-minus-t", "t"].contains(&tw.as_str()) {
                return Err(format!(
                    "diagnostics.time_weights: unknown tag '{tw}' (none | t-minus-t | t)"
                ));
            }
        }
        for (a, b) in &self.diagnostics.residual_intervals {
            if !(a < b && *b <= self.solver.final_time + 1e-12) {
                return Err(format!(
                    "diagnostics.residual_intervals: [{a}, {b}] not within the run"
                ));
            }
        }
        for s in &self.diagnostics.smoothing {
            if !["h1", "h1-weighted-m", "hs-b"].contains(&s.norm.as_str()) {
                return Err(format!("diagnostics.smoothing: unknown norm '{}'", s.norm));
            }
            if !(s.t_min > 0.0 && s.t_min < self.solver.final_time) {
                return Err("diagnostics.smoothing: t_min must lie in (0, final_time)".into());
            }
        }
        for b in &self.diagnostics.spectral_b {
            if !(*b > 0.0) {
                return Err("diagnostics.spectral_b: rates must be positive".into());
            }
        }
        Ok(())
    }

    pub fn time_weight_tags(&self) -> Vec<kdvlab_diagnostics::TimeWeight> {
        self.diagnostics
            .time_weights
            .iter()
            .map(|s| match s.as_str() {
                "t-minus-t" => kdvlab_diagnostics::TimeWeight::TMinusT,
                "t" => kdvlab_diagnostics::TimeWeight::T,
                _ => kdvlab_diagnostics::TimeWeight::None,
            })
            .collect()
    }

    /// The scheme tag, for reports.
    pub fn scheme_label(&self) -> &'static str {
        match self.solver.scheme {
            Scheme::ImexCnAb2 => "imex-cn-ab2",
            Scheme::CnNewton => "cn-newton",
            Scheme::PicardDuhamel => "picard-duhamel",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ExperimentConfig {
        ExperimentConfig {
            label: "t".into(),
            grid: GridConfig {
                length: 50.0,
                points: 201,
            },
            damping: DampingConfig {
                a0: 1.5,
                x0: 10.0,
                shape: DampingShape::Step,
                ramp_width: 0.0,
                constant: false,
                samples: None,
            },
            initial: InitialDatum::Gaussian {
                center: 5.0,
                width: 1.5,
                amplitude: 0.5,
            },
            solver: SolverConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            output: OutputConfig::default(),
        }
    }

    #[test]
    fn validates_activation_point() {
        let mut c = minimal();
        c.damping.x0 = 60.0;
        let err = c.validate().unwrap_err();
        assert!(err.contains("damping.x0"), "{err}");
    }

    #[test]
    fn json_round_trip_preserves_config() {
        let c = minimal();
        let text = serde_json::to_string_pretty(&c).unwrap();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn unknown_field_rejected_with_location() {
        let text = r#"{ "label": "x", "grid": {"length": 50.0, "points": 100, "bogus": 1},
            "damping": {"a0": 1.0, "x0": 10.0},
            "initial": {"kind": "gaussian", "center": 5.0, "width": 1.0, "amplitude": 0.5} }"#;
        let err = ExperimentConfig::from_json(text).unwrap_err();
        assert!(err.contains("bogus"), "{err}");
    }
}
