//! The run pipeline: build the problem, advance it, evaluate the requested
//! diagnostics, and emit the time-series CSV plus the summary.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context, Result};
use kdvlab_core::{DampingProfile, Grid, OperatorSet, WeightSpec};
use kdvlab_diagnostics::{
    check_inequalities, corpus_interpolation_constants, fit_decay, identity_residual,
    lyapunov_lattice_check, observability_ratio, smoothing_statistic, weighted_norm_sq, DecayFit,
    DiagError, IdentityResidual, InequalityMargin, LyapunovCheck, SmoothingNorm,
};
use kdvlab_solver::{State, SolverConfig, System, Trajectory};
use kdvlab_spectral::{build_conjugated_generator, numerical_abscissa};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, SmoothingRequest};
use crate::summary::{
    fmt_f64, ClampReport, CorpusSummary, RunSummary, SmoothingResult, SpectralResult, TailWarning,
};

pub struct RunArtifacts {
    pub summary: RunSummary,
    pub series_csv: String,
}

/// Builds grid, damping profile and operators from a validated config.
pub fn build_problem(
    cfg: &ExperimentConfig,
) -> Result<(Grid, DampingProfile, OperatorSet)> {
    let grid = Grid::new(cfg.grid.length, cfg.grid.points)?;
    let damping = if let Some(samples) = &cfg.damping.samples {
        DampingProfile::from_samples(&grid, samples.clone(), cfg.damping.a0, cfg.damping.x0)?
    } else if cfg.damping.constant {
        DampingProfile::from_samples(
            &grid,
            vec![cfg.damping.a0; grid.point_count()],
            cfg.damping.a0,
            cfg.damping.x0,
        )?
    } else {
        DampingProfile::build(
            &grid,
            cfg.damping.a0,
            cfg.damping.x0,
            cfg.damping.shape,
            cfg.damping.ramp_width,
        )?
    };
    let ops = OperatorSet::build(&grid, &damping)?;
    Ok((grid, damping, ops))
}

/// Executes a full run with diagnostics; `seed` feeds the randomized
/// inequality corpus when enabled.
pub fn execute_run(cfg: &ExperimentConfig, seed: u64) -> Result<RunArtifacts> {
    cfg.validate().map_err(|e| anyhow!(e))?;
    let (grid, damping, ops) = build_problem(cfg)?;
    let system = System::new(&grid, &damping, &ops);
    let datum = cfg.initial.sample(&grid)?;

    let solver_cfg = SolverConfig {
        residual_weights: cfg.diagnostics.weights.clone(),
        ..cfg.solver.clone()
    };
    let traj = system
        .solve(&datum.state, &solver_cfg)
        .with_context(|| format!("scenario '{}'", cfg.label))?;

    let mut flags: BTreeMap<String, bool> = BTreeMap::new();
    let series_csv = render_csv(cfg, &grid, &traj)?;

    // decay fits over the fractional window
    let t_final = traj.final_time();
    let window = (
        cfg.diagnostics.fit_window_fraction.0 * t_final,
        cfg.diagnostics.fit_window_fraction.1 * t_final,
    );
    let times = traj.recorded_times();
    let mut fits: Vec<DecayFit> = Vec::new();
    let mut fit_norm = |tag: String, values: Vec<f64>| match fit_decay(&times, &values, window) {
        Ok(fit) => {
            flags.insert(format!("fit_{tag}_signal"), true);
            fits.push(fit.tagged(&tag));
        }
        Err(DiagError::InsufficientData { .. }) => {
            flags.insert(format!("fit_{tag}_signal"), false);
        }
        Err(_) => {
            flags.insert(format!("fit_{tag}_signal"), false);
        }
    };
    let l2_series: Vec<f64> = traj
        .states()
        .iter()
        .map(|s| {
            let k = traj.step_of_time(s.time()).expect("recorded time on lattice");
            traj.norm_sq_series()[k].sqrt()
        })
        .collect();
    fit_norm("l2".into(), l2_series);
    for fam in &cfg.diagnostics.weights {
        let spec = WeightSpec::build(&grid, fam.clone())?;
        let series: Vec<f64> = traj
            .states()
            .iter()
            .map(|s| weighted_norm_sq(&grid, s, &spec).sqrt())
            .collect();
        fit_norm(format!("w_{}", fam.label()), series);
    }

    // Lyapunov lattice checks
    let mut lyapunov: Vec<LyapunovCheck> = Vec::new();
    for req in &cfg.diagnostics.lyapunov {
        let check = lyapunov_lattice_check(
            &traj,
            req.m,
            &req.d,
            cfg.diagnostics.lyapunov_sampling_period,
            cfg.diagnostics.lyapunov_max_doublings,
        )?;
        flags.insert(
            format!("lyapunov_m{}_nonincreasing", req.m),
            check.nonincreasing,
        );
        lyapunov.push(check);
    }

    // identity residuals
    let mut residuals: Vec<IdentityResidual> = Vec::new();
    if !cfg.diagnostics.residual_intervals.is_empty() {
        let mut worst: f64 = 0.0;
        for fam in &cfg.diagnostics.weights {
            let spec = WeightSpec::build(&grid, fam.clone())?;
            for tw in cfg.time_weight_tags() {
                for &(a, b) in &cfg.diagnostics.residual_intervals {
                    let r = identity_residual(&traj, &spec, tw, a, b)?;
                    worst = worst.max(r.relative.abs());
                    residuals.push(r);
                }
            }
        }
        flags.insert("residuals_below_1e-3".into(), worst <= 1e-3);
    }

    // smoothing statistics
    let mut smoothing: Vec<SmoothingResult> = Vec::new();
    for req in &cfg.diagnostics.smoothing {
        let norm = smoothing_norm(req)?;
        match smoothing_statistic(&traj, norm, req.mu, req.t_min) {
            Ok(statistic) => {
                flags.insert(format!("smoothing_{}_finite", req.norm), statistic.is_finite());
                smoothing.push(SmoothingResult {
                    norm: req.norm.clone(),
                    mu: req.mu,
                    t_min: req.t_min,
                    statistic,
                });
            }
            Err(DiagError::UndefinedStatistic(_)) => {
                flags.insert(format!("smoothing_{}_finite", req.norm), false);
            }
            Err(e) => return Err(e.into()),
        }
    }

    // inequality corpus: seeded random smooth states plus trajectory snapshots
    let inequalities = if cfg.diagnostics.inequality_corpus.enabled {
        let corpus = run_corpus(
            &grid,
            traj.states(),
            cfg.diagnostics.inequality_corpus.count,
            cfg.diagnostics.inequality_corpus.b,
            seed,
        )?;
        flags.insert("inequality_corpus_pass".into(), corpus.all_pass);
        Some(corpus)
    } else {
        None
    };

    // abscissa analysis
    let mut spectral: Vec<SpectralResult> = Vec::new();
    let dx = grid.spacing();
    for &b in &cfg.diagnostics.spectral_b {
        let bm = build_conjugated_generator(&ops, b)?;
        let r = numerical_abscissa(&bm, 1e-10, 200)?;
        let bound = b * b * b + b;
        let shift = if cfg.damping.constant { cfg.damping.a0 } else { 0.0 };
        let margin = bound - shift + 10.0 * dx * dx - r.omega;
        flags.insert(format!("abscissa_bound_b{b}"), margin >= 0.0);
        spectral.push(SpectralResult {
            b,
            omega: r.omega,
            bound,
            margin,
            threshold_satisfied: 4.0 * b * b * b + b < cfg.damping.a0,
            iterations: r.iterations,
        });
    }

    let observability = match cfg.diagnostics.observability_interval {
        Some((a, b)) => match observability_ratio(&traj, a, b) {
            Ok(v) => Some(v),
            Err(DiagError::UndefinedRatio) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };

    flags.insert("tail_within_threshold".into(), traj.tail_warning().is_none());

    let summary = RunSummary {
        label: cfg.label.clone(),
        scheme: cfg.scheme_label().to_string(),
        config: cfg.clone(),
        clamp: ClampReport {
            relative_perturbation: datum.clamp_perturbation,
            flagged: datum.clamp_flagged,
        },
        final_time: t_final,
        steps: traj.step_count(),
        tail_warning: traj.tail_warning().map(|(time, fraction)| TailWarning {
            time,
            fraction,
        }),
        fits,
        lyapunov,
        residuals,
        smoothing,
        inequalities,
        spectral,
        observability,
        flags,
    };
    Ok(RunArtifacts {
        summary,
        series_csv,
    })
}

fn smoothing_norm(req: &SmoothingRequest) -> Result<SmoothingNorm> {
    Ok(match req.norm.as_str() {
        "h1" => SmoothingNorm::H1,
        "h1-weighted-m" => SmoothingNorm::H1WeightedM { m: req.m },
        "hs-b" => SmoothingNorm::HsB { s: req.s, b: req.b },
        other => return Err(anyhow!("unknown smoothing norm '{other}'")),
    })
}

/// Time-series CSV: `t`, the L2 norm, every requested weighted norm, every
/// requested Lyapunov value, the boundary trace and the tail-mass fraction,
/// all at 17 significant digits.
fn render_csv(cfg: &ExperimentConfig, grid: &Grid, traj: &Trajectory) -> Result<String> {
    let mut header = vec!["t".to_string(), "l2_norm".to_string()];
    let weight_specs: Vec<(String, WeightSpec)> = cfg
        .diagnostics
        .weights
        .iter()
        .map(|f| Ok((format!("w_{}", f.label()), WeightSpec::build(grid, f.clone())?)))
        .collect::<Result<_>>()?;
    for (label, _) in &weight_specs {
        header.push(label.clone());
    }
    for req in &cfg.diagnostics.lyapunov {
        header.push(format!("v{}", req.m));
    }
    header.push("trace".into());
    header.push("tail_mass".into());

    let mut out = header.join(",");
    out.push('\n');
    for state in traj.states() {
        let k = traj
            .step_of_time(state.time())
            .expect("recorded times lie on the lattice");
        let mut row = vec![
            fmt_f64(state.time()),
            fmt_f64(traj.norm_sq_series()[k].sqrt()),
        ];
        for (_, spec) in &weight_specs {
            row.push(fmt_f64(weighted_norm_sq(grid, state, spec).sqrt()));
        }
        for req in &cfg.diagnostics.lyapunov {
            row.push(fmt_f64(kdvlab_diagnostics::lyapunov(
                grid, state, req.m, &req.d,
            )?));
        }
        row.push(fmt_f64(traj.trace()[k]));
        row.push(fmt_f64(traj.tail_mass_series()[k]));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Random smooth boundary-vanishing state: a sine series with rapidly
/// decaying coefficients, normalized to a drawn amplitude.
pub fn random_smooth_state(grid: &Grid, rng: &mut ChaCha8Rng) -> State {
    let l = grid.length();
    let modes = 12;
    let coeffs: Vec<f64> = (1..=modes)
        .map(|k| {
            let a: f64 = rng.gen_range(-1.0..1.0);
            a / (k as f64).powi(3)
        })
        .collect();
    let raw = grid.sample(|x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * ((i + 1) as f64 * std::f64::consts::PI * x / l).sin())
            .sum::<f64>()
    });
    let sup = raw.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let target: f64 = rng.gen_range(0.1..1.0);
    let values: Vec<f64> = raw.iter().map(|v| v * target / sup).collect();
    State::from_samples_clamped(0.0, values)
        .expect("sine series vanishes at the boundary")
        .0
}

fn run_corpus(
    grid: &Grid,
    snapshots: &[State],
    count: usize,
    b: f64,
    seed: u64,
) -> Result<CorpusSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for _ in 0..count {
        let state = random_smooth_state(grid, &mut rng);
        reports.push(check_inequalities(grid, &state, b)?);
    }
    for s in snapshots {
        reports.push(check_inequalities(grid, s, b)?);
    }
    let all_pass = reports.iter().all(|r| r.all_pass);
    // worst margin per inequality name
    let mut worst: Vec<InequalityMargin> = Vec::new();
    for r in &reports {
        for m in &r.margins {
            match worst.iter_mut().find(|w| w.name == m.name) {
                Some(w) => {
                    if m.margin < w.margin {
                        *w = m.clone();
                    }
                }
                None => worst.push(m.clone()),
            }
        }
    }
    let interpolation = corpus_interpolation_constants(&reports)
        .into_iter()
        .map(|s| (s.eps, s.required_c))
        .collect();
    Ok(CorpusSummary {
        states: reports.len(),
        seed,
        b,
        all_pass,
        worst,
        interpolation,
    })
}
