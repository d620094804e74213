//! End-to-end tests of the repct binary: output formats, config layering,
//! and the exit-code contract.

use std::process::{Command, Output};

fn repct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn repct_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_repct"));
    cmd.args(args);
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn classify_reports_the_verdict_as_json() {
    let out = repct(&["classify", "--rho0", "1", "--d0", "2", "--gamma0", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["region"], "S2");
    assert_eq!(v["theorem"], "zero-background");
    let g = 0.7833936678835931;
    assert!((v["surface_value"].as_f64().unwrap() - g).abs() < 1e-12);
    assert!((v["margin"].as_f64().unwrap() - (2.0 - g)).abs() < 1e-12);
}

#[test]
fn classify_accepts_tensor_entries() {
    let out = repct(&[
        "classify", "--m11", "1", "--m12", "2", "--m21", "3", "--m22", "4", "--rho0", "1",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // trace 5 sits just below the surface at gap 33
    assert_eq!(v["region"], "Supercritical");
    assert!(v["margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn classify_rejects_invalid_input_with_code_two() {
    let missing = repct(&["classify", "--d0", "1", "--gamma0", "1"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("rho0"));

    let negative = repct(&["classify", "--rho0", "-1", "--d0", "1", "--gamma0", "1"]);
    assert_eq!(code(&negative), 2);

    let unknown_flag = repct(&["classify", "--rho0", "1", "--nope", "3"]);
    assert_eq!(code(&unknown_flag), 2);

    let mixed = repct(&[
        "classify", "--rho0", "1", "--d0", "1", "--gamma0", "1", "--m11", "0", "--m12", "0",
        "--m21", "0", "--m22", "0",
    ]);
    assert_eq!(code(&mixed), 2);
}

#[test]
fn help_and_version_exit_zero() {
    let help = repct(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("classify"));
    assert!(stdout(&help).contains("sweep"));

    let version = repct(&["--version"]);
    assert_eq!(code(&version), 0);
    assert!(stdout(&version).contains("repct"));

    let sub_help = repct(&["simulate", "--help"]);
    assert_eq!(code(&sub_help), 0);
    assert!(stdout(&sub_help).contains("--t-end"));
}

#[test]
fn simulate_reports_global_existence_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("trajectory.csv");
    let out = repct(&[
        "simulate", "--rho0", "1", "--d0", "1", "--gamma0", "4", "--t-end", "5", "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("GLOBAL T=5"), "stdout: {}", stdout(&out));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,rho,d");
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 10, "expected a sampled trajectory, got {} rows", rows.len());
    for row in &rows {
        assert_eq!(row.split(',').count(), 3);
        for field in row.split(',') {
            field.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn simulate_reports_breakdown_with_a_bracket() {
    let out = repct(&["simulate", "--rho0", "1", "--d0", "-1", "--gamma0", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let line = stdout(&out);
    assert!(line.starts_with("BREAKDOWN t*="), "stdout: {line}");
    assert!(line.contains('\u{b1}') || line.contains("+-") || line.contains("±"), "stdout: {line}");
}

#[test]
fn simulate_full_tensor_system_writes_wide_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("full.csv");
    let out = repct(&[
        "simulate", "--full", "--m11", "0.2", "--m12", "0.8", "--m21", "-0.7", "--m22", "0.1",
        "--rho0", "0.6", "--t-end", "5", "--output", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("GLOBAL T=5"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,rho,d,m11,m12,m21,m22");
}

#[test]
fn simulate_step_size_underflow_exits_three() {
    // an absurd blow-up threshold is never reached; the integrator chases
    // the pole until the step size underflows
    let out = repct(&[
        "simulate", "--rho0", "1", "--d0", "-1", "--gamma0", "1", "--blowup-threshold", "1e300",
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("step size underflow"), "stderr: {}", stderr(&out));
}

#[test]
fn sweep_emits_csv_and_excludes_boundary_cells() {
    let out = repct_env(
        &[
            "sweep", "--rho0-min", "1", "--rho0-max", "2", "--rho0-steps", "2", "--gamma0-min",
            "3", "--gamma0-max", "4", "--gamma0-steps", "2",
        ],
        &[("REPCT_THREADS", "2")],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rho0,Gamma0,k,c,branch,analytic,empirical,discrepancy,bracket_width,n_sims,status"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    // the cell (2, 4) sits on the sign-change locus Gamma0 = 2 k rho0
    assert_eq!(rows.iter().filter(|r| r.ends_with("excluded_near_boundary")).count(), 1);
    assert_eq!(rows.iter().filter(|r| r.ends_with("ok_survive_above")).count(), 3);
    assert!(stderr(&out).contains("4 rows"));
}

#[test]
fn strict_sweep_exits_four_when_a_cell_cannot_be_bracketed() {
    // beyond the saddle density every probe breaks down
    let out = repct(&[
        "sweep", "--rho0-min", "8", "--rho0-max", "8", "--rho0-steps", "1", "--gamma0-min", "16",
        "--gamma0-max", "16", "--gamma0-steps", "1", "--c", "1", "--branch", "upper", "--strict",
    ]);
    assert_eq!(code(&out), 4, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("no_bracket_both_broke_down"), "stdout: {}", stdout(&out));
}

#[test]
fn sweep_rejects_bad_thread_cap() {
    let out = repct_env(
        &[
            "sweep", "--rho0-min", "1", "--rho0-max", "1", "--rho0-steps", "1", "--gamma0-min",
            "3", "--gamma0-max", "3", "--gamma0-steps", "1",
        ],
        &[("REPCT_THREADS", "zero")],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("REPCT_THREADS"));
}

#[test]
fn sweep_preset_conflicts_with_grid_flags() {
    let out = repct(&["sweep", "--preset", "thm11", "--k", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("conflicts"));
}

#[test]
fn portrait_preset_writes_the_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("portrait.json");
    let out = repct(&["portrait", "--preset", "fig21", "--output", json_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    for key in ["params", "nullcline", "separatrix", "critical_points", "trajectories"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(v["params"]["beta"].as_f64().unwrap(), -1.0);
    let trajectories = v["trajectories"].as_array().unwrap();
    assert!(!trajectories.is_empty());
    for record in trajectories {
        assert!(record["seed"].as_array().unwrap().len() == 2);
        assert!(!record["samples"].as_array().unwrap().is_empty());
        assert!(!record["outcome"].as_str().unwrap().is_empty());
    }
}

#[test]
fn portrait_custom_setup_prints_to_stdout() {
    let out = repct(&[
        "portrait", "--beta", "1", "--rho-max", "3", "--resolution", "50", "--seeds", "1:0,2:-1",
        "--t-end", "5",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["trajectories"].as_array().unwrap().len(), 2);
    assert_eq!(v["nullcline"].as_array().unwrap().len(), 50);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.conf");
    std::fs::write(&cfg_path, "rho0 = 2\nd0 = 0\ngamma0 = -1\n").unwrap();

    let from_config = repct(&["classify", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(code(&from_config), 0, "stderr: {}", stderr(&from_config));
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_config)).unwrap();
    assert_eq!(v["region"], "S1");

    let overridden =
        repct(&["classify", "--config", cfg_path.to_str().unwrap(), "--gamma0", "4"]);
    assert_eq!(code(&overridden), 0, "stderr: {}", stderr(&overridden));
    let v: serde_json::Value = serde_json::from_str(&stdout(&overridden)).unwrap();
    assert_eq!(v["region"], "S2");
    assert_eq!(v["margin"].as_f64().unwrap(), 0.0);
}

#[test]
fn unknown_config_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.conf");
    std::fs::write(&cfg_path, "bogus = 1\n").unwrap();
    let out = repct(&["classify", "--config", cfg_path.to_str().unwrap(), "--rho0", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown key"));
}

#[test]
fn verify_quick_reports_and_exits_zero() {
    let out = repct(&["verify", "--quick"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[PASS] surface_closed_forms"));
    assert!(text.contains("all 4 checks passed"));
}
