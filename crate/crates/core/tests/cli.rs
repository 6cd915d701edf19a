use std::path::Path;
use std::process::{Command, Output};

use gyrospec::cli::table::{parse_csv, CSV_HEADER};
use gyrospec::kg_gyroscope::Sign;

fn gyrospec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gyrospec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn kg_spherical_p_shell_is_sqrt3() {
    let out = gyrospec(&["kg", "--l-max", "1"]);
    assert!(out.status.success());
    let rows = parse_csv(&stdout(&out)).unwrap();
    let plus: Vec<_> = rows.iter().filter(|r| r.l == 1 && r.sign == Sign::Plus).collect();
    assert_eq!(plus.len(), 3);
    for r in plus {
        assert!((r.e_numeric - 3f64.sqrt()).abs() < 1e-14);
        assert!(r.rel_diff.unwrap() < 1e-12);
    }
}

#[test]
fn dirac_spherical_p_shell() {
    let out = gyrospec(&["dirac", "--l-max", "1"]);
    let rows = parse_csv(&stdout(&out)).unwrap();
    let at = |e: f64| rows.iter().filter(|r| r.l == 1 && (r.e_numeric - e).abs() < 1e-12).count();
    // j = 3/2 at √2 and j = 1/2 at √5 per sign
    assert_eq!(at(2f64.sqrt()), 4);
    assert_eq!(at(5f64.sqrt()), 2);
    assert_eq!(at(-2f64.sqrt()), 4);
    assert_eq!(at(-5f64.sqrt()), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["dirac", "--l-max", "3", "--inertia", "0.7,0.7,2.2", "--mass", "3"];
    let a = gyrospec(&args);
    let b = gyrospec(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with(CSV_HEADER));
}

#[test]
fn validate_passes_and_fault_fails() {
    let ok = gyrospec(&["validate"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = gyrospec(&["validate", "--inject-fault", "--format", "json"]);
    assert_eq!(bad.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["all_pass"], false);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"squared_hamiltonian_identity"), "{failed:?}");
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["kg", "--l-max", "60"][..],
        &["kg", "--inertia", "1,2"],
        &["kg", "--inertia", "1,-2,3"],
        &["kg", "--mass", "0"],
        &["dirac", "--variant", "nonabelian", "--inertia", "1,2,3"],
        &["dirac", "--variant", "nonabelian", "--v", "1,1,0"],
        &["scan", "--scan", "mass:1:0:0.1"],
        &["kg", "--bogus"],
    ] {
        let out = gyrospec(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = gyrospec(&["kg", "--l-max", "60"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("l_max"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"l_max": 1, "params": {"mass": 2.0, "inertia": [1.0, 1.0, 3.0]}, "output_format": "json"}"#,
    );
    let out = gyrospec(&["kg", "--config", &cfg]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2 * (1 + 3));

    let out = gyrospec(&["kg", "--config", &cfg, "--l-max", "2", "--format", "csv", "--mass", "5"]);
    let rows = parse_csv(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 2 * (1 + 3 + 5));
    let ground = rows.iter().find(|r| r.l == 0 && r.sign == Sign::Plus).unwrap();
    assert!((ground.e_numeric - 5.0).abs() < 1e-14);

    let bad = write(dir.path(), "bad.json", r#"{"lmax": 3}"#);
    assert_eq!(gyrospec(&["kg", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let out = gyrospec(&["kg", "--l-max", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(parse_csv(&text).unwrap().len(), 18);
}

#[test]
fn covariant_reads_system_file() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(
        dir.path(),
        "sys.json",
        r#"{
          "masses": [1.0, 2.0, 1.5],
          "positions": [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.2], [0.0, -0.5, -0.3, 0.4]],
          "momenta": [[1.02, 0.1, 0.15, 0.0], [2.001, -0.05, 0.0, 0.05], [1.52, 0.0, -0.1, 0.2]]
        }"#,
    );
    let out = gyrospec(&["covariant", "--system", &sys, "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["particles"], 3);
    for (k, v) in r["residuals"].as_object().unwrap() {
        assert!(v.as_f64().unwrap() < 1e-10, "{k}: {v}");
    }

    let default = gyrospec(&["covariant"]);
    assert!(default.status.success());
    assert!(stdout(&default).starts_with("quantity,value"));
}

#[test]
fn spinning_collinear_system_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(
        dir.path(),
        "dumbbell.json",
        r#"{
          "masses": [1.0, 1.0, 1.0],
          "positions": [[0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]],
          "momenta": [[1.02, 0.0, -0.2, 0.0], [1.0, 0.0, 0.0, 0.0], [1.02, 0.0, 0.2, 0.0]]
        }"#,
    );
    let out = gyrospec(&["covariant", "--system", &sys]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inertia"));

    let broken = write(dir.path(), "broken.json", r#"{"masses": [1.0]}"#);
    assert_eq!(gyrospec(&["covariant", "--system", &broken]).status.code(), Some(2));
}

#[test]
fn scan_emits_grid_in_order() {
    let out = gyrospec(&["scan", "--scan", "I3_over_I1:1:2:0.5", "--l-max", "1", "--model", "kg"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("axis,value,model,l,m,branch,sign,E_closed,E_numeric,rel_diff"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 3 * 8);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!((values[0], values[values.len() - 1]), (1.0, 2.0));
}
