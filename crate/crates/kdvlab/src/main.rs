use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use kdvlab::config::ExperimentConfig;
use kdvlab::io::{effective_out_dir, write_json, write_run_artifacts};
use kdvlab::pipeline::{build_problem, execute_run};
use kdvlab::summary::fmt_f64;
use kdvlab::sweep::{execute_sweep, SweepConfig};
use kdvlab::verify::execute_verify;

/// Numerical laboratory for the damped KdV equation on a truncated half-line.
#[derive(Parser)]
#[command(name = "kdvlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario: solve, evaluate diagnostics, write CSV + summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed of the randomized inequality corpus.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Residual matrix, inequality corpus and abscissa bounds with a
    /// refinement ladder; emits a machine-readable pass/fail report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refinement levels (the configured resolution is the finest).
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross product of parameter overrides over a base config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical abscissa of the conjugated generator, nothing else.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refit a decay rate from an existing series CSV.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        /// Column name, e.g. `l2_norm` or `w_poly1`.
        #[arg(long)]
        column: String,
        /// Fit window in time units.
        #[arg(long, num_args = 2, value_names = ["T_A", "T_B"])]
        window: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    ExperimentConfig::from_json(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, seed } => {
            let cfg = load_config(&config)?;
            let artifacts = execute_run(&cfg, seed)?;
            let dir = effective_out_dir(&cfg, out.as_deref());
            write_run_artifacts(&dir, &artifacts)?;
            let pass = artifacts.summary.flags.values().all(|&v| v);
            for (name, ok) in &artifacts.summary.flags {
                println!("{}: {name}", if *ok { "pass" } else { "FAIL" });
            }
            println!(
                "wrote {} and {}",
                dir.join("series.csv").display(),
                dir.join("summary.json").display()
            );
            if !pass {
                std::process::exit(1);
            }
        }
        Command::Verify {
            config,
            out,
            levels,
            seed,
        } => {
            let cfg = load_config(&config)?;
            let report = execute_verify(&cfg, levels, seed)?;
            let dir = effective_out_dir(&cfg, out.as_deref());
            write_json(&dir.join("verification.json"), &report)?;
            for (name, ok) in &report.flags {
                println!("{}: {name}", if *ok { "pass" } else { "FAIL" });
            }
            println!("wrote {}", dir.join("verification.json").display());
            if !report.all_pass {
                std::process::exit(1);
            }
        }
        Command::Sweep {
            config,
            out,
            workers,
            seed,
        } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let sweep: SweepConfig = serde_json::from_str(&text)
                .map_err(|e| anyhow!("{}: {e}", config.display()))?;
            let (table, artifacts) = execute_sweep(&sweep, workers, seed)?;
            let root = out.unwrap_or_else(|| {
                std::env::var(kdvlab::io::OUT_ENV_VAR)
                    .map(|r| Path::new(&r).join("sweep"))
                    .unwrap_or_else(|_| Path::new("out").join("sweep"))
            });
            for (cfg, run) in &artifacts {
                write_run_artifacts(&root.join(&cfg.label), run)?;
            }
            write_json(&root.join("table.json"), &table)?;
            for w in &table.warnings {
                eprintln!("warning: {w}");
            }
            println!("{} runs, wrote {}", table.rows.len(), root.join("table.json").display());
        }
        Command::Spectrum { config, out } => {
            let cfg = load_config(&config)?;
            let (grid, _damping, ops) = build_problem(&cfg)?;
            let dx = grid.spacing();
            let mut results = Vec::new();
            for &b in &cfg.diagnostics.spectral_b {
                let m = kdvlab_spectral::build_conjugated_generator(&ops, b)?;
                let r = kdvlab_spectral::numerical_abscissa(&m, 1e-10, 200)?;
                let bound = b * b * b + b;
                let shift = if cfg.damping.constant { cfg.damping.a0 } else { 0.0 };
                println!(
                    "b = {b}: omega = {}, bound = {}, margin = {}",
                    fmt_f64(r.omega),
                    fmt_f64(bound - shift),
                    fmt_f64(bound - shift + 10.0 * dx * dx - r.omega)
                );
                results.push(kdvlab::summary::SpectralResult {
                    b,
                    omega: r.omega,
                    bound,
                    margin: bound - shift + 10.0 * dx * dx - r.omega,
                    threshold_satisfied: 4.0 * b * b * b + b < cfg.damping.a0,
                    iterations: r.iterations,
                });
            }
            if let Some(dir) = out {
                write_json(&dir.join("spectrum.json"), &results)?;
            }
        }
        Command::Fit {
            csv,
            column,
            window,
            out,
        } => {
            if window.len() != 2 {
                return Err(anyhow!("--window takes exactly two values"));
            }
            let text = std::fs::read_to_string(&csv)
                .with_context(|| format!("reading {}", csv.display()))?;
            let mut lines = text.lines();
            let header: Vec<&str> = lines
                .next()
                .ok_or_else(|| anyhow!("empty CSV"))?
                .split(',')
                .collect();
            let t_col = header
                .iter()
                .position(|&h| h == "t")
                .ok_or_else(|| anyhow!("CSV has no 't' column"))?;
            let v_col = header
                .iter()
                .position(|&h| h == column)
                .ok_or_else(|| anyhow!("CSV has no '{column}' column"))?;
            let mut times = Vec::new();
            let mut values = Vec::new();
            for (i, line) in lines.enumerate() {
                let fields: Vec<&str> = line.split(',').collect();
                let parse = |s: &str| -> Result<f64> {
                    s.parse::<f64>()
                        .map_err(|e| anyhow!("line {}: {e}", i + 2))
                };
                times.push(parse(fields[t_col])?);
                values.push(parse(fields[v_col])?);
            }
            let fit = kdvlab_diagnostics::fit_decay(&times, &values, (window[0], window[1]))?
                .tagged(&column);
            println!(
                "nu = {}, C = {}, R^2 = {}, samples = {}",
                fmt_f64(fit.nu),
                fmt_f64(fit.prefactor),
                fmt_f64(fit.r_squared),
                fit.samples_used
            );
            if let Some(dir) = out {
                write_json(&dir.join("fit.json"), &fit)?;
            }
        }
    }
    Ok(())
}
