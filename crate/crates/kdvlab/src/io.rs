//! Output emission: deterministic file layout under the chosen directory.
//!
//! Precedence for the output directory: `--out` flag, then the
//! `KDVLAB_OUT` environment root (joined with the run label), then the
//! config's own `output.dir`, then `./out/<label>`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::config::ExperimentConfig;
use crate::pipeline::RunArtifacts;
use crate::schema::validate_summary;

pub const OUT_ENV_VAR: &str = "KDVLAB_OUT";

pub fn effective_out_dir(cfg: &ExperimentConfig, flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Ok(root) = std::env::var(OUT_ENV_VAR) {
        return Path::new(&root).join(&cfg.label);
    }
    if let Some(dir) = &cfg.output.dir {
        return PathBuf::from(dir);
    }
    Path::new("out").join(&cfg.label)
}

/// Writes `series.csv` and a schema-validated `summary.json`.
pub fn write_run_artifacts(dir: &Path, artifacts: &RunArtifacts) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("series.csv"), &artifacts.series_csv)?;
    let value = serde_json::to_value(&artifacts.summary)?;
    validate_summary(&value).map_err(|e| anyhow::anyhow!("summary schema violation: {e}"))?;
    let text = serde_json::to_string_pretty(&value)?;
    fs::write(dir.join("summary.json"), text + "\n")?;
    Ok(())
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}
