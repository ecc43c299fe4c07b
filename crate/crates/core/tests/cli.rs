use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nls-waveguide")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn cubic_ground_state_constant() {
    let v = json(&["ground-state", "--alpha", "2", "--out", "json"]);
    assert_eq!(v["schema"], 1);
    let rows = v["rows"].as_array().unwrap();
    let g = rows.iter().find(|r| r["name"] == "G").unwrap();
    let g: f64 = g["value"].as_str().unwrap().parse().unwrap();
    assert!((g - 1.0 / 96.0).abs() < 1e-12);
}

#[test]
fn sphere_thresholds_report() {
    let v = json(&["thresholds", "--alpha", "1", "--manifold", "sphere:4", "--out", "json"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["criterion_improved"], true);
    assert_eq!(v["conditional_on_b"], false);
}

#[test]
fn torus_report_is_conditional() {
    let out = run(&["thresholds", "--alpha", "2.5", "--manifold", "torus:6.283185307179586"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("WARNING"));
    assert!(text.contains("conditional_on_B"));
}

#[test]
fn inadmissible_alpha_is_a_domain_error() {
    let out = run(&["thresholds", "--N", "2", "--alpha", "5", "--manifold", "sphere:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["thresholds", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sphere-scan", "--k", "5:2"]).status.code(), Some(2));
}

#[test]
fn selftest_exit_codes() {
    let ok = run(&["selftest"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    assert_eq!(run(&["selftest", "--inject-fault"]).status.code(), Some(1));
}

#[test]
fn sphere_scan_is_deterministic() {
    let args = ["sphere-scan", "--k", "2:6", "--alpha-step", "0.05", "--out", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("k,alpha,T1,T2,T3,T4,exact_holds"));
}

#[test]
fn bifurcation_json_is_deterministic() {
    let args = [
        "bifurcation", "--rho-grid", "1.2:1.6:2", "--nx", "128", "--ny", "16", "--out", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn config_file_supplies_flags() {
    let dir = std::env::temp_dir().join(format!("nlsw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# sphere run\nalpha = 1\nmanifold = sphere:4\nout = json\n").unwrap();
    let v = json(&["--config", path.to_str().unwrap(), "thresholds"]);
    assert_eq!(v["alpha"], 1.0);
    // Command-line flags take precedence over the file.
    let v = json(&["--config", path.to_str().unwrap(), "thresholds", "--alpha", "1.2"]);
    assert_eq!(v["alpha"], 1.2);
    std::fs::write(&path, "not a pair\n").unwrap();
    assert_eq!(run(&["--config", path.to_str().unwrap(), "thresholds"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
