//! End-to-end checks of the command-line surface: config handling, run
//! outputs and the file formats.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qch-lab")
}

fn scratch(sub: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(sub);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_command_produces_expected_files() {
    let dir = scratch("run-free");
    let config_path = dir.join("run.conf");
    std::fs::write(
        &config_path,
        "scenario = free\nengines = [qch, classical]\nt_max = 0.05\nrecord_every = 5\nsnapshot_every = 25\n",
    )
    .unwrap();
    let out = dir.join("out");
    let status = Command::new(bin())
        .arg("run")
        .arg(&config_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let run_dir = out.join("run");
    let names: Vec<String> = std::fs::read_dir(&run_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.contains(&"qch.csv".to_string()), "{names:?}");
    assert!(names.contains(&"classical.csv".to_string()));
    assert!(names.contains(&"ehrenfest_qch.csv".to_string()));
    assert!(names.contains(&"manifest.json".to_string()));
    assert!(names.contains(&"snapshot_qch_0000.csv".to_string()));
    assert_eq!(
        names
            .iter()
            .filter(|n| n.as_str() == "manifest.json")
            .count(),
        1
    );

    // canonical header, 11 rows for 50 steps at record_every = 5, LF only
    let text = std::fs::read_to_string(run_dir.join("qch.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,r1,f1_mean,x2_mean,w_mean,p2_mean,energy,norm2,diff_r1_f1,diff_r1_x2"
    );
    assert_eq!(lines.count(), 11);
    assert!(!text.contains('\r'));

    // every value parses back; the derived columns reproduce exactly
    for line in text.lines().skip(1) {
        let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(vals.len(), 10);
        assert_eq!(vals[8], vals[1] - vals[2]);
        assert_eq!(vals[9], vals[1] - vals[3]);
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["truncated"], serde_json::Value::Bool(false));
    assert!(manifest["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(manifest["config"]["scenario"], "free");
}

#[test]
fn misspelled_key_fails_before_any_output() {
    let dir = scratch("bad-key");
    let config_path = dir.join("bad.conf");
    std::fs::write(&config_path, "scenario = harmonic\nalpah = 1.0\n").unwrap();
    let out = dir.join("out");
    let result = Command::new(bin())
        .arg("run")
        .arg(&config_path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert!(stderr.contains("alpah"), "stderr: {stderr}");
    assert!(!out.exists(), "no output directory on config error");
}

#[test]
fn invalid_value_reports_and_fails() {
    let dir = scratch("bad-value");
    let config_path = dir.join("bad.conf");
    std::fs::write(&config_path, "scenario = harmonic\nalpha = -1\n").unwrap();
    let result = Command::new(bin())
        .arg("run")
        .arg(&config_path)
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(
        stderr.contains("alpha must be positive"),
        "stderr: {stderr}"
    );
}

#[test]
fn unknown_preset_is_rejected() {
    let result = Command::new(bin())
        .args(["preset", "fig99"])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("fig99"), "stderr: {stderr}");
}

#[test]
fn set_overrides_reach_the_run() {
    let dir = scratch("overrides");
    let config_path = dir.join("run.conf");
    std::fs::write(&config_path, "scenario = free\nengines = [classical]\n").unwrap();
    let out = dir.join("out");
    let status = Command::new(bin())
        .arg("run")
        .arg(&config_path)
        .arg("--out")
        .arg(&out)
        .args(["--set", "t_max=0.02", "--set", "record_every=2"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("run").join("classical.csv")).unwrap();
    assert_eq!(text.lines().count(), 12); // header + 11 rows
}

#[test]
fn out_dir_env_is_honored() {
    let dir = scratch("env-out");
    let config_path = dir.join("run.conf");
    std::fs::write(
        &config_path,
        "scenario = free\nengines = [classical]\nt_max = 0.01\n",
    )
    .unwrap();
    let out = dir.join("from-env");
    let status = Command::new(bin())
        .arg("run")
        .arg(&config_path)
        .env("QCH_LAB_OUT", &out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("run").join("classical.csv").is_file());
}

#[test]
fn sampler_suite_preset_passes() {
    let dir = scratch("sampler-suite");
    let status = Command::new(bin())
        .args(["preset", "sampler-suite", "--out"])
        .arg(&dir)
        .args(["--set", "n_paths=20000"])
        .status()
        .unwrap();
    assert!(status.success());
    let suite = dir.join("sampler-suite");
    assert!(suite.join("checks.json").is_file());
    assert!(suite.join("histogram_free_gaussian.csv").is_file());
    assert!(suite.join("histogram_ground_state.csv").is_file());
    let checks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(suite.join("checks.json")).unwrap()).unwrap();
    for check in checks.as_array().unwrap() {
        assert_eq!(check["passed"], serde_json::Value::Bool(true), "{check}");
    }
}
