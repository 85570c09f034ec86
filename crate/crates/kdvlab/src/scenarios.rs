//! Shipped default scenarios, each reproducing one family of checks with a
//! single command. The JSON files under `configs/` are generated from these
//! definitions (see the `shipped_configs` test).

use kdvlab_core::{DampingShape, WeightFamily};
use kdvlab_solver::{InitialDatum, Scheme, SolverConfig};

use crate::config::{
    CorpusConfig, DampingConfig, DiagnosticsConfig, ExperimentConfig, GridConfig, LyapunovRequest,
    OutputConfig, SmoothingRequest,
};

/// Gaussian-datum localized-damping decay scenario: exponential decay of the
/// plain and polynomially weighted norms, Lyapunov decrease.
///
/// The damping rises smoothly across [4, 10] and sits at the floor
/// `a0 = 1.5` everywhere beyond `x = 10`. A hard step at the activation
/// point reflects dispersive packets back into the undamped region, and the
/// resulting sloshing modulates the weighted norms enough to spoil the
/// log-linear fits; the taper absorbs instead of reflecting while leaving
/// the damping hypothesis (floor 1.5 beyond 10) intact.
pub fn thm_decay() -> ExperimentConfig {
    ExperimentConfig {
        label: "thm-decay".into(),
        grid: GridConfig {
            length: 50.0,
            points: 2001,
        },
        damping: DampingConfig {
            a0: 1.5,
            x0: 4.0,
            shape: DampingShape::SmoothRamp,
            ramp_width: 6.0,
            constant: false,
            samples: None,
        },
        initial: InitialDatum::Gaussian {
            center: 3.5,
            width: 1.0,
            amplitude: 0.5,
        },
        solver: SolverConfig {
            dt: 1e-3,
            final_time: 40.0,
            scheme: Scheme::ImexCnAb2,
            output_stride: 20,
            ..Default::default()
        },
        diagnostics: DiagnosticsConfig {
            weights: vec![
                WeightFamily::Polynomial { m: 1 },
                WeightFamily::Polynomial { m: 2 },
            ],
            lyapunov: vec![
                LyapunovRequest {
                    m: 1,
                    d: vec![10.0],
                },
                LyapunovRequest {
                    m: 2,
                    d: vec![10.0, 10.0],
                },
            ],
            observability_interval: Some((0.0, 40.0)),
            ..Default::default()
        },
        output: OutputConfig::default(),
    }
}

/// Exponential-weight decay scenario under the rate threshold
/// `4 b^3 + b < a0` (b = 0.4, a0 = 1.5).
pub fn expweight() -> ExperimentConfig {
    ExperimentConfig {
        label: "expweight".into(),
        grid: GridConfig {
            length: 50.0,
            points: 2001,
        },
        damping: DampingConfig {
            a0: 1.5,
            x0: 4.0,
            shape: DampingShape::SmoothRamp,
            ramp_width: 6.0,
            constant: false,
            samples: None,
        },
        initial: InitialDatum::Gaussian {
            center: 3.5,
            width: 1.0,
            amplitude: 0.5,
        },
        solver: SolverConfig {
            dt: 1e-3,
            final_time: 40.0,
            scheme: Scheme::ImexCnAb2,
            output_stride: 20,
            ..Default::default()
        },
        diagnostics: DiagnosticsConfig {
            weights: vec![WeightFamily::Exponential { b: 0.4 }],
            spectral_b: vec![0.4],
            ..Default::default()
        },
        output: OutputConfig::default(),
    }
}

/// Rough (hat) datum scenario witnessing the gain of one derivative for
/// positive times.
pub fn smoothing() -> ExperimentConfig {
    ExperimentConfig {
        label: "smoothing".into(),
        grid: GridConfig {
            length: 50.0,
            points: 2001,
        },
        damping: DampingConfig {
            a0: 1.5,
            x0: 10.0,
            shape: DampingShape::Step,
            ramp_width: 0.0,
            constant: false,
            samples: None,
        },
        initial: InitialDatum::Hat {
            center: 3.0,
            width: 1.0,
            amplitude: 0.25,
        },
        solver: SolverConfig {
            dt: 1e-3,
            final_time: 10.0,
            scheme: Scheme::ImexCnAb2,
            output_stride: 1,
            ..Default::default()
        },
        diagnostics: DiagnosticsConfig {
            weights: vec![WeightFamily::Polynomial { m: 1 }],
            smoothing: vec![
                SmoothingRequest {
                    norm: "h1".into(),
                    m: 0,
                    s: 0,
                    b: 0.0,
                    mu: 0.0,
                    t_min: 1e-3,
                },
                SmoothingRequest {
                    norm: "h1-weighted-m".into(),
                    m: 2,
                    s: 0,
                    b: 0.0,
                    mu: 0.0,
                    t_min: 1e-3,
                },
            ],
            ..Default::default()
        },
        output: OutputConfig::default(),
    }
}

/// Constant damping, nonlinearity off: the energy law forces decay at the
/// analytic rate `a0`, the quantitative anchor.
pub fn linear_const() -> ExperimentConfig {
    ExperimentConfig {
        label: "linear-const".into(),
        grid: GridConfig {
            length: 50.0,
            points: 2001,
        },
        damping: DampingConfig {
            a0: 1.0,
            x0: 10.0,
            shape: DampingShape::Step,
            ramp_width: 0.0,
            constant: true,
            samples: None,
        },
        initial: InitialDatum::Gaussian {
            center: 10.0,
            width: 2.0,
            amplitude: 0.5,
        },
        solver: SolverConfig {
            dt: 1e-3,
            final_time: 20.0,
            scheme: Scheme::ImexCnAb2,
            output_stride: 20,
            include_nonlinearity: false,
            ..Default::default()
        },
        diagnostics: DiagnosticsConfig {
            spectral_b: vec![0.25],
            ..Default::default()
        },
        output: OutputConfig::default(),
    }
}

/// Stride-1 verification scenario: the full identity-residual matrix, the
/// inequality corpus and the abscissa bounds at desk resolution.
pub fn verification() -> ExperimentConfig {
    ExperimentConfig {
        label: "verify".into(),
        grid: GridConfig {
            length: 50.0,
            points: 4001,
        },
        damping: DampingConfig {
            a0: 1.5,
            x0: 4.0,
            shape: DampingShape::SmoothRamp,
            ramp_width: 6.0,
            constant: false,
            samples: None,
        },
        initial: InitialDatum::Gaussian {
            center: 3.5,
            width: 1.0,
            amplitude: 0.5,
        },
        solver: SolverConfig {
            dt: 1e-3,
            final_time: 5.0,
            scheme: Scheme::ImexCnAb2,
            output_stride: 1,
            ..Default::default()
        },
        diagnostics: DiagnosticsConfig {
            weights: vec![
                WeightFamily::Unit,
                WeightFamily::LinearX,
                WeightFamily::Polynomial { m: 2 },
                WeightFamily::Polynomial { m: 3 },
                WeightFamily::Exponential { b: 0.4 },
            ],
            time_weights: vec!["none".into(), "t-minus-t".into()],
            residual_intervals: vec![(0.0, 5.0)],
            inequality_corpus: CorpusConfig {
                enabled: true,
                count: 100,
                b: 0.25,
            },
            spectral_b: vec![0.1, 0.25, 0.5],
            ..Default::default()
        },
        output: OutputConfig::default(),
    }
}

pub fn all() -> Vec<(&'static str, ExperimentConfig)> {
    vec![
        ("thm-decay", thm_decay()),
        ("expweight", expweight()),
        ("smoothing", smoothing()),
        ("linear-const", linear_const()),
        ("verify", verification()),
    ]
}
