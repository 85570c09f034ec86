//! End-to-end tests of the command-line surface, driving the built binary.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kdvlab"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn short_config(label: &str) -> serde_json::Value {
    serde_json::json!({
        "label": label,
        "grid": { "length": 30.0, "points": 301 },
        "damping": { "a0": 1.5, "x0": 8.0 },
        "initial": { "kind": "gaussian", "center": 4.0, "width": 1.0, "amplitude": 0.4 },
        "solver": { "dt": 2e-3, "final_time": 1.0, "output_stride": 10 },
        "diagnostics": {
            "weights": [ { "family": "polynomial", "m": 1 } ],
            "fit_window_fraction": [0.1, 0.9]
        }
    })
}

#[test]
fn run_writes_csv_and_valid_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    write(&cfg_path, &short_config("cli-run").to_string());
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("series.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "t,l2_norm,w_poly1,trace,tail_mass");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    kdvlab::schema::validate_summary(&summary).unwrap();
}

#[test]
fn zero_datum_run_is_all_zero_with_insufficient_signal() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = short_config("cli-zero");
    cfg["initial"] = serde_json::json!({
        "kind": "gaussian", "center": 4.0, "width": 1.0, "amplitude": 0.0
    });
    cfg["solver"]["output_stride"] = serde_json::json!(1);
    cfg["diagnostics"]["residual_intervals"] = serde_json::json!([[0.0, 1.0]]);
    cfg["diagnostics"]["time_weights"] = serde_json::json!(["none", "t-minus-t", "t"]);
    let cfg_path = dir.path().join("cfg.json");
    write(&cfg_path, &cfg.to_string());
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    // zero runs flag the missing fit signal; exit code reflects the flags
    assert!(!status.success());
    let csv = std::fs::read_to_string(out.join("series.csv")).unwrap();
    for line in csv.lines().skip(1) {
        for field in line.split(',').skip(1) {
            assert_eq!(field.parse::<f64>().unwrap(), 0.0);
        }
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    for r in summary["residuals"].as_array().unwrap() {
        assert_eq!(r["residual"].as_f64().unwrap(), 0.0);
    }
    assert_eq!(summary["flags"]["fit_l2_signal"], serde_json::json!(false));
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = short_config("cli-bad");
    cfg["damping"]["x0"] = serde_json::json!(60.0);
    let cfg_path = dir.path().join("cfg.json");
    write(&cfg_path, &cfg.to_string());
    let output = bin()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("damping.x0"), "stderr: {stderr}");
}

#[test]
fn sweep_threshold_column_follows_rate_formula() {
    // b in {0.2, 0.4, 0.6} at a0 = 1.0: 4b^3 + b = 0.232, 0.656, 1.464,
    // so the threshold column reads (true, true, false)
    let dir = tempfile::tempdir().unwrap();
    let mut base = short_config("cli-sweep");
    base["damping"]["a0"] = serde_json::json!(1.0);
    base["diagnostics"]["weights"] = serde_json::json!([{ "family": "exponential", "b": 0.2 }]);
    let sweep = serde_json::json!({
        "base": base,
        "vary": [ { "path": "diagnostics.weights.0.b", "values": [0.2, 0.4, 0.6] } ],
        "cap": 8
    });
    let cfg_path = dir.path().join("sweep.json");
    write(&cfg_path, &sweep.to_string());
    let out = dir.path().join("out");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&cfg_path)
        .args(["--workers", "2"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("table.json")).unwrap()).unwrap();
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let thresholds: Vec<bool> = rows
        .iter()
        .map(|r| r["threshold_satisfied"].as_bool().unwrap())
        .collect();
    assert_eq!(thresholds, vec![true, true, false]);
}

#[test]
fn sweep_over_lyapunov_orders_emits_decreasing_series() {
    let dir = tempfile::tempdir().unwrap();
    let mut base = short_config("cli-lyap");
    base["solver"]["final_time"] = serde_json::json!(8.0);
    base["damping"] = serde_json::json!({
        "a0": 1.5, "x0": 2.0, "shape": "smooth-ramp", "ramp_width": 6.0
    });
    base["initial"] = serde_json::json!({
        "kind": "gaussian", "center": 2.0, "width": 0.8, "amplitude": 0.4
    });
    base["diagnostics"]["lyapunov"] = serde_json::json!([{ "m": 1, "d": [10.0] }]);
    base["diagnostics"]["lyapunov_sampling_period"] = serde_json::json!(2.0);
    let sweep = serde_json::json!({
        "base": base,
        "vary": [ { "path": "diagnostics.lyapunov.0", "values": [
            { "m": 1, "d": [10.0] },
            { "m": 2, "d": [10.0, 10.0] },
            { "m": 3, "d": [10.0, 10.0, 10.0] }
        ] } ],
        "cap": 8
    });
    let cfg_path = dir.path().join("sweep.json");
    write(&cfg_path, &sweep.to_string());
    let out = dir.path().join("out");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for idx in 0..3 {
        let summary: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out.join(format!("cli-lyap_{idx:03}/summary.json"))).unwrap(),
        )
        .unwrap();
        let checks = summary["lyapunov"].as_array().unwrap();
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0]["nonincreasing"], serde_json::json!(true));
        assert_eq!(checks[0]["order"].as_u64().unwrap(), idx as u64 + 1);
    }
}

#[test]
fn fit_subcommand_recovers_rate_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("series.csv");
    let mut text = String::from("t,l2_norm\n");
    for k in 0..200 {
        let t = k as f64 * 0.05;
        text.push_str(&format!("{t:.16e},{:.16e}\n", 3.0 * (-0.7 * t).exp()));
    }
    write(&csv_path, &text);
    let out = dir.path().join("out");
    let output = bin()
        .args(["fit", "--csv"])
        .arg(&csv_path)
        .args(["--column", "l2_norm", "--window", "0", "10"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("fit.json")).unwrap()).unwrap();
    assert!((fit["nu"].as_f64().unwrap() - 0.7).abs() < 1e-10);
    assert!((fit["prefactor"].as_f64().unwrap() - 3.0).abs() < 1e-10);
}

#[test]
fn spectrum_subcommand_reports_margins() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = short_config("cli-spec");
    cfg["diagnostics"]["spectral_b"] = serde_json::json!([0.25]);
    let cfg_path = dir.path().join("cfg.json");
    write(&cfg_path, &cfg.to_string());
    let out = dir.path().join("out");
    let output = bin()
        .args(["spectrum", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let spec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("spectrum.json")).unwrap()).unwrap();
    let entry = &spec.as_array().unwrap()[0];
    assert!(entry["margin"].as_f64().unwrap() >= 0.0);
}

#[test]
fn out_env_variable_overrides_default_root() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    write(&cfg_path, &short_config("cli-env").to_string());
    let root = dir.path().join("env-root");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .env("KDVLAB_OUT", &root)
        .current_dir(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(root.join("cli-env/summary.json").exists());
}

#[test]
fn repeated_cli_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    write(&cfg_path, &short_config("cli-det").to_string());
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let status = bin()
            .args(["run", "--config"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push((
            std::fs::read(out.join("series.csv")).unwrap(),
            std::fs::read(out.join("summary.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "CSV bytes differ");
    assert_eq!(outputs[0].1, outputs[1].1, "summary bytes differ");
}
