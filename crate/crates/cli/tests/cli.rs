// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lattice-optics"));
    c.env_remove("LATTICE_OPTICS_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let mut a = args.to_vec();
    a.extend(["--out", "-"]);
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

/// Non-comment lines.
fn data(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header_line<'a>(csv: &'a str, key: &str) -> &'a str {
    let tag = format!("# {key}: ");
    csv.lines().find_map(|l| l.strip_prefix(tag.as_str())).unwrap_or_else(|| panic!("no {key} header"))
}

fn error_record(o: &Output) -> serde_json::Value {
    let line = String::from_utf8_lossy(&o.stderr).lines().last().unwrap_or_default().to_string();
    serde_json::from_str(&line).unwrap_or_else(|_| panic!("stderr is not a JSON record: {line}"))
}

#[test]
fn rt_curve_crosses_near_transfer_time() {
    let csv = stdout_of(&["rt-curve", "--L", "51", "--beta", "0.95", "--t-max", "80"]);
    let rows = data(&csv);
    assert_eq!(rows[0], ["t", "abs_R", "abs_T", "arg_R_over_T"]);
    assert_eq!(rows.len(), 802);
    // |T| peaks near t ≈ 55 with |R| ≈ |T| there
    let (t, r, tr) = rows[1..]
        .iter()
        .map(|r| (r[0].parse::<f64>().unwrap(), r[1].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap()))
        .filter(|x| x.0 > 45.0 && x.0 < 62.0)
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .unwrap();
    assert!((t - 55.0).abs() < 1.0, "peak at {t}");
    assert!((r - tr).abs() < 0.02, "|R| = {r}, |T| = {tr}");
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["correlation-map", "--L", "15", "--stats", "hardcore", "--t", "9"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    let a = ["calibrate", "--L-grid", "11:19"];
    assert_eq!(stdout_of(&a), stdout_of(&a));
}

#[test]
fn beta_auto_is_recorded() {
    let csv = stdout_of(&["correlation-map", "--L", "21", "--stats", "boson", "--u", "0", "--beta", "auto", "--t", "18"]);
    let resolved: serde_json::Value = serde_json::from_str(header_line(&csv, "resolved")).unwrap();
    let beta = resolved["beta"].as_f64().unwrap();
    assert!((beta - 0.9085).abs() < 1e-3, "beta = {beta}");
    assert_eq!(resolved["beta_source"], "calibrated 50/50");
    assert_eq!(resolved["t"].as_f64(), Some(18.0));
    let rows = data(&csv);
    assert_eq!(rows[0], ["j", "k", "P", "C"]);
    assert_eq!(rows.len(), 1 + 21 * 21);
}

#[test]
fn calibrate_filters_parity() {
    let rows = data(&stdout_of(&["calibrate", "--parity", "odd", "--scheme", "uniform", "--L-grid", "11:21"]));
    let ls: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ls, ["11", "13", "15", "17", "19", "21"]);
    let rows = data(&stdout_of(&["calibrate", "--parity", "even", "--L-grid", "10:14"]));
    assert_eq!(rows.len(), 4);
    let eta: f64 = rows[3][2].parse().unwrap();
    assert!(eta > 0.3 && eta < 0.6);
}

#[test]
fn json_mirrors_csv() {
    let args = ["hom", "--L", "11", "--stats", "fermion", "--t-max", "5", "--t-step", "1"];
    let csv = data(&stdout_of(&args));
    let mut j = args.to_vec();
    j.extend(["--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&j)).unwrap();
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), csv.len() - 1);
    for (rec, row) in records.iter().zip(&csv[1..]) {
        for (col, cell) in csv[0].iter().zip(row) {
            assert_eq!(rec[col].as_f64().unwrap(), cell.parse::<f64>().unwrap());
        }
    }
    assert_eq!(doc["provenance"]["experiment"], "hom");
    assert!(doc["provenance"].get("timestamp").is_none());
}

#[test]
fn timestamp_only_on_request() {
    let csv = stdout_of(&["cm-table", "--beta", "2", "--timestamp"]);
    assert!(header_line(&csv, "timestamp").parse::<u64>().is_ok());
    assert!(!stdout_of(&["cm-table", "--beta", "2"]).contains("timestamp"));
}

#[test]
fn config_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "experiment = \"rt-curve\"\nformat = \"csv\"\n[params]\nL = 11\nt-max = 2.0\n").unwrap();
    let out = dir.path().join("a.csv");
    let o = run(&["rt-curve", "--L", "31", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(header_line(&csv, "config").contains("\"L\":11"));
    assert_eq!(data(&csv).len(), 22);

    let out2 = dir.path().join("b.csv");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", out2.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out2).unwrap(), csv);
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[params]\nL = 11\nbetta = 0.9\n").unwrap();
    let o = run(&["rt-curve", "--config", cfg.to_str().unwrap(), "--out", "-"]);
    assert_eq!(o.status.code(), Some(2));
    let rec = error_record(&o);
    assert_eq!(rec["error"]["kind"], "config");
    assert!(rec["error"]["message"].as_str().unwrap().contains("betta"));
}

#[test]
fn mismatched_experiment_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "experiment = \"hom\"\n").unwrap();
    let o = run(&["calibrate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        vec!["rt-curve", "--L", "11", "--phi", "0.3"],
        vec!["rt-curve"],
        vec!["rt-curve", "--L", "12", "--beta", "0.9"],
        vec!["calibrate", "--L-grid", "11:20:2"],
        vec!["three-body", "--L", "41"],
        vec!["mach-zehnder", "--L", "21", "--scheme", "uniform", "--phi", "4"],
        vec!["hom", "--L", "11", "--stats", "anyon"],
        vec!["cm-table"],
        vec!["nonsense"],
    ] {
        let mut a = args.clone();
        a.extend(["--out", "-"]);
        let o = run(&a);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_record(&o)["error"]["exit_code"], 2);
    }
}

#[test]
fn numerical_failure_exits_3() {
    let o = run(&["bunching-transition", "--L", "11", "--u-grid", "0:1:0.5", "--out", "-"]);
    assert_eq!(o.status.code(), Some(3));
    let rec = error_record(&o);
    assert_eq!(rec["error"]["kind"], "numerical");
    assert_eq!(rec["error"]["experiment"], "bunching-transition");
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["cm-table", "--beta", "1", "--format", "json"])
        .env("LATTICE_OPTICS_OUT", dir.path().join("nested"))
        .output()
        .unwrap();
    assert!(o.status.success());
    let path = dir.path().join("nested").join("cm-table.json");
    assert!(Path::new(&path).exists());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 7);
}

#[test]
fn workers_flag_does_not_change_results() {
    let a = ["mach-zehnder", "--L", "21", "--scheme", "uniform", "--phi-grid", "0:1:0.5"];
    let one = stdout_of(&[&a[..], &["--workers", "1"]].concat());
    let two = stdout_of(&[&a[..], &["--workers", "2"]].concat());
    assert_eq!(data(&one), data(&two));
    let rows = data(&one);
    let f0: f64 = rows[1][6].parse().unwrap();
    assert!(f0 > 0.5, "phi = 0 routes to L, got {f0}");
}

#[test]
fn analytic_check_reports_agreement() {
    let csv = stdout_of(&["analytic-check", "--L", "21", "--beta", "2"]);
    let r: serde_json::Value = serde_json::from_str(header_line(&csv, "resolved")).unwrap();
    assert!(r["max_energy_diff"].as_f64().unwrap() < 1e-10);
    assert!((r["total_weight"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(data(&csv)[1..].iter().any(|row| row[1] == "oob"));
}

#[test]
fn imperfection_scans_run() {
    let csv = stdout_of(&["imperfections", "--L", "21", "--scan", "curvature", "--grid", "0:0.02:0.01"]);
    let rows = data(&csv);
    assert_eq!(rows[0], ["parameter", "epsilon", "beta_used", "recalibrated", "P_T", "t_star", "delta_P"]);
    assert_eq!(rows.len(), 4);
    let o = run(&["imperfections", "--scan", "walls", "--recalibrate", "--out", "-"]);
    assert_eq!(o.status.code(), Some(2));
}
