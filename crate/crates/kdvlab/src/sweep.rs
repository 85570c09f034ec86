//! Parameter sweeps: the cross product of path-addressed overrides applied
//! to a base configuration, executed across a bounded worker pool, one
//! summary row per run.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context, Result};
use kdvlab_core::WeightFamily;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::pipeline::{execute_run, RunArtifacts};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: Value,
    /// Varied parameters: dotted JSON paths into the base document.
    #[serde(default)]
    pub vary: Vec<SweepAxis>,
    /// Refusal cap on the total number of runs.
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub path: String,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub label: String,
    pub params: BTreeMap<String, Value>,
    pub nu_l2: Option<f64>,
    /// Fitted rate of the first exponential weight, when present.
    pub nu_exp_weight: Option<f64>,
    /// `4 b^3 + b < a0` for the first exponential weight's rate.
    pub threshold_satisfied: Option<bool>,
    pub all_flags_pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

/// Applies one dotted-path override (`damping.a0`, `diagnostics.weights.0.b`)
/// onto a JSON document.
fn apply_override(doc: &mut Value, path: &str, value: &Value) -> Result<()> {
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        if let Ok(idx) = part.parse::<usize>() {
            let arr = cur
                .as_array_mut()
                .ok_or_else(|| anyhow!("path '{path}': '{part}' is not an array index here"))?;
            if idx >= arr.len() {
                return Err(anyhow!("path '{path}': index {idx} out of bounds"));
            }
            if last {
                arr[idx] = value.clone();
                return Ok(());
            }
            cur = &mut arr[idx];
        } else {
            let obj = cur
                .as_object_mut()
                .ok_or_else(|| anyhow!("path '{path}': '{part}' is not an object field here"))?;
            if last {
                obj.insert(part.to_string(), value.clone());
                return Ok(());
            }
            cur = obj
                .get_mut(*part)
                .ok_or_else(|| anyhow!("path '{path}': missing field '{part}'"))?;
        }
    }
    Ok(())
}

/// Materializes the cross product of the sweep axes.
pub fn expand(sweep: &SweepConfig) -> Result<(Vec<(BTreeMap<String, Value>, ExperimentConfig)>, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut combos: Vec<BTreeMap<String, Value>> = vec![BTreeMap::new()];
    for axis in &sweep.vary {
        if axis.values.is_empty() {
            warnings.push(format!("axis '{}' has no values; sweep is empty", axis.path));
            combos.clear();
            break;
        }
        let mut next = Vec::with_capacity(combos.len() * axis.values.len());
        for combo in &combos {
            for v in &axis.values {
                let mut c = combo.clone();
                c.insert(axis.path.clone(), v.clone());
                next.push(c);
            }
        }
        combos = next;
    }
    if combos.len() > sweep.cap {
        return Err(anyhow!(
            "sweep would launch {} runs, above the cap of {}",
            combos.len(),
            sweep.cap
        ));
    }
    let mut out = Vec::with_capacity(combos.len());
    for (i, combo) in combos.iter().enumerate() {
        let mut doc = sweep.base.clone();
        for (path, value) in combo {
            apply_override(&mut doc, path, value)?;
        }
        let mut cfg: ExperimentConfig = serde_json::from_value(doc)
            .with_context(|| format!("sweep entry {i}"))?;
        cfg.label = format!("{}_{i:03}", cfg.label);
        cfg.validate().map_err(|e| anyhow!("sweep entry {i}: {e}"))?;
        out.push((combo.clone(), cfg));
    }
    Ok((out, warnings))
}

/// Runs the sweep across at most `workers` threads; rows keep input order.
pub fn execute_sweep(
    sweep: &SweepConfig,
    workers: usize,
    seed: u64,
) -> Result<(SweepTable, Vec<(ExperimentConfig, RunArtifacts)>)> {
    let (entries, warnings) = expand(sweep)?;
    let workers = workers.max(1);
    let n = entries.len();
    let mut results: Vec<Option<Result<RunArtifacts>>> = Vec::with_capacity(n);
    results.resize_with(n, || None);
    {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<Result<RunArtifacts>>>> =
            (0..n).map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers.min(n.max(1)) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= n {
                        break;
                    }
                    let r = execute_run(&entries[i].1, seed);
                    *slots[i].lock().unwrap() = Some(r);
                });
            }
        });
        for (i, slot) in slots.into_iter().enumerate() {
            results[i] = slot.into_inner().unwrap();
        }
    }

    let mut rows = Vec::with_capacity(n);
    let mut artifacts = Vec::with_capacity(n);
    for (i, ((params, cfg), result)) in entries.into_iter().zip(results).enumerate() {
        let run = result.expect("worker filled every slot")?;
        let exp_b = cfg.diagnostics.weights.iter().find_map(|w| match w {
            WeightFamily::Exponential { b } => Some(*b),
            _ => None,
        });
        let nu_of = |tag: &str| {
            run.summary
                .fits
                .iter()
                .find(|f| f.norm_tag == tag)
                .map(|f| f.nu)
        };
        rows.push(SweepRow {
            index: i,
            label: cfg.label.clone(),
            params,
            nu_l2: nu_of("l2"),
            nu_exp_weight: exp_b.and_then(|b| nu_of(&format!("w_exp{b}"))),
            threshold_satisfied: exp_b.map(|b| 4.0 * b * b * b + b < cfg.damping.a0),
            all_flags_pass: run.summary.flags.values().all(|&v| v),
        });
        artifacts.push((cfg, run));
    }
    Ok((SweepTable { rows, warnings }, artifacts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn override_paths() {
        let mut doc = json!({"a": {"b": 1.0}, "list": [ {"x": 1}, {"x": 2} ]});
        apply_override(&mut doc, "a.b", &json!(2.5)).unwrap();
        apply_override(&mut doc, "list.1.x", &json!(9)).unwrap();
        assert_eq!(doc["a"]["b"], json!(2.5));
        assert_eq!(doc["list"][1]["x"], json!(9));
        assert!(apply_override(&mut doc, "a.missing.deep", &json!(1)).is_err());
    }

    #[test]
    fn cap_refusal_counts_runs() {
        let sweep = SweepConfig {
            base: serde_json::to_value(crate::scenarios::linear_const()).unwrap(),
            vary: vec![
                SweepAxis {
                    path: "damping.a0".into(),
                    values: vec![json!(0.5), json!(1.0), json!(1.5)],
                },
                SweepAxis {
                    path: "solver.dt".into(),
                    values: vec![json!(1e-3), json!(2e-3)],
                },
            ],
            cap: 5,
        };
        let err = expand(&sweep).unwrap_err().to_string();
        assert!(err.contains('6'), "{err}");
    }

    #[test]
    fn empty_axis_empty_table_with_warning() {
        let sweep = SweepConfig {
            base: serde_json::to_value(crate::scenarios::linear_const()).unwrap(),
            vary: vec![SweepAxis {
                path: "damping.a0".into(),
                values: vec![],
            }],
            cap: 8,
        };
        let (entries, warnings) = expand(&sweep).unwrap();
        assert!(entries.is_empty());
        assert_eq!(warnings.len(), 1);
    }
}
