use std::path::Path;
use std::process::{Command, Output};

use ncgeom::fuzzy_sphere::build_rep;
use ncgeom::matrix::{max_abs_diff, MatrixJson};
use serde_json::Value;

fn ncgeom(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgeom"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect()
}

fn slope_line(text: &str) -> Option<f64> {
    text.lines().find_map(|l| l.strip_prefix("# slope,")).map(|s| s.parse().unwrap())
}

#[test]
fn star_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, u, v, want) in
        [("vey", "p", "q", "p q + (1/2) i eps"), ("normal", "q", "p", "p q - i eps"), ("vey", "1", "q", "q")]
    {
        let o = ncgeom(dir.path(), &["star", "--kind", kind, u, v]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = ncgeom(dir.path(), &["star", "p +", "q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_sphere_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["validate", "--geometry", "sphere", "--N", "2,8", "--R", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let report = read_json(&dir.path().join("validate_sphere.json"));
    assert_eq!(report["pass"], Value::Bool(true));
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 12);
    for c in checks {
        assert!(c["check"].is_string() && c["N"].is_u64() && c["residual"].is_number());
        assert_eq!(c["pass"], Value::Bool(true));
    }
}

#[test]
fn tolerance_override_controls_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["--tol-override", "relations=-1", "validate", "--geometry", "sphere", "--N", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let report = read_json(&dir.path().join("validate_sphere.json"));
    assert_eq!(report["pass"], Value::Bool(false));
    let o = ncgeom(dir.path(), &["--tol-override", "nonsense=1", "validate", "--geometry", "sphere", "--N", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ncgeom(dir.path(), &["validate", "--geometry", "sphere", "--N", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_torus_and_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["validate", "--geometry", "torus", "--N", "3"]);
    assert!(o.status.success());
    let report = read_json(&dir.path().join("validate_torus.json"));
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    assert!(names.contains(&"trace_delta"));

    let profile = dir.path().join("sphere.rho");
    std::fs::write(&profile, "# R = 1\nz^0 eps^0 : 1\nz^2 eps^0 : -1\n").unwrap();
    let o = ncgeom(dir.path(), &["validate", "--geometry", "rotation", "--profile", profile.to_str().unwrap(), "--N", "16"]);
    assert!(o.status.success());
    assert_eq!(read_json(&dir.path().join("validate_rotation.json"))["pass"], Value::Bool(true));

    // two bounded components
    let bad = dir.path().join("bad.rho");
    std::fs::write(&bad, "z^0 eps^0 : -4\nz^2 eps^0 : 5\nz^4 eps^0 : -1\n").unwrap();
    let o = ncgeom(dir.path(), &["validate", "--geometry", "rotation", "--profile", bad.to_str().unwrap(), "--N", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("components"));
}

#[test]
fn validate_phase_space_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let o = ncgeom(dir.path(), &["--seed", seed, "validate", "--geometry", "phase-space", "--points", "50"]);
        assert!(o.status.success());
        std::fs::read_to_string(dir.path().join("validate_phase-space.json")).unwrap()
    };
    assert_eq!(run("5"), run("5"));
}

#[test]
fn converge_trace_is_exact_for_cos2() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["converge", "--study", "trace", "--N", "8,16,32"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("converge_trace.csv")).unwrap();
    assert!(text.starts_with("N,eps,value,reference,abs_err\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!((r[2] - 1.0 / 3.0).abs() <= 1e-12);
        assert!(r[4] <= 1e-12);
    }
}

#[test]
fn converge_single_n_has_no_slope() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["converge", "--study", "ordering", "--N", "8"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("converge_ordering.csv")).unwrap();
    assert_eq!(csv_rows(&text).len(), 1);
    assert_eq!(slope_line(&text), None);
}

#[test]
fn converge_ordering_is_first_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["converge", "--study", "ordering", "--N", "8,16,32,64"]);
    assert!(o.status.success());
    let s = slope_line(&std::fs::read_to_string(dir.path().join("converge_ordering.csv")).unwrap()).unwrap();
    assert!((-1.3..=-0.7).contains(&s), "{s}");
}

// The measured decay is second order, outside the first-order band the
// command checks by default, so the exit status is 1.
#[test]
fn converge_bracket_reports_second_order_decay() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncgeom(dir.path(), &["converge", "--study", "bracket", "--N", "8,16,32,64"]);
    let s = slope_line(&std::fs::read_to_string(dir.path().join("converge_bracket.csv")).unwrap()).unwrap();
    assert!((s + 2.0).abs() < 0.1, "{s}");
    assert_eq!(o.status.code(), Some(1));
    let summary = read_json(&dir.path().join("converge_bracket.json"));
    assert_eq!(summary["pass"], Value::Bool(false));
}

#[test]
fn converge_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        ncgeom(dir.path(), &["converge", "--study", "trace", "--field", "demo1", "--field", "demo2", "--N", "4,8"]);
        std::fs::read(dir.path().join("converge_trace.csv")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 7\n[tolerances]\nslope_min = -2.5\n[converge]\nstudy = \"bracket\"\nn = [8, 16, 32]\n").unwrap();
    let o = ncgeom(dir.path(), &["--config", cfg.to_str().unwrap(), "converge", "--N", "8,16"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("converge_bracket.csv")).unwrap();
    assert_eq!(csv_rows(&text).len(), 2);
    std::fs::write(&cfg, "[converge]\nbogus = 1\n").unwrap();
    let o = ncgeom(dir.path(), &["--config", cfg.to_str().unwrap(), "converge", "--study", "trace", "--N", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn encode_round_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    std::fs::write(&one, r#"{"L":0,"coeffs":[{"n":0,"m":0,"re":1.0,"im":0.0}]}"#).unwrap();
    let o = ncgeom(dir.path(), &["encode", "--N", "16", "--R", "1", "--extra", &format!("h={}", one.display())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = build_rep(16, 1.0).unwrap();
    for (name, want) in ["x1", "x2", "x3"].iter().zip(rep.cartesian()) {
        let m = MatrixJson::read(&dir.path().join(format!("{name}.json"))).unwrap().to_matrix().unwrap();
        assert!(max_abs_diff(&m, &want) < 1e-10);
    }
    let h = MatrixJson::read(&dir.path().join("h.json")).unwrap().to_matrix().unwrap();
    assert!(max_abs_diff(&h, &ncgeom::matrix::identity(16)) < 1e-12);
}

#[test]
fn encode_reports_truncation_tail() {
    let dir = tempfile::tempdir().unwrap();
    let mut coeffs = Vec::new();
    let mut tail = 0.0f64;
    for n in 0..=40usize {
        let c = 1.0 / (1.0 + n as f64).powi(2);
        coeffs.push(format!(r#"{{"n":{n},"m":0,"re":{c:e},"im":0.0}}"#));
        if n >= 8 {
            tail += c * c;
        }
    }
    let f = dir.path().join("f.json");
    std::fs::write(&f, format!(r#"{{"L":40,"coeffs":[{}]}}"#, coeffs.join(","))).unwrap();
    let o = ncgeom(dir.path(), &["encode", "--N", "8", "--extra", &format!("f={}", f.display())]);
    assert!(o.status.success());
    let report = read_json(&dir.path().join("encode_report.json"));
    let entry = report["matrices"].as_array().unwrap().iter().find(|e| e["name"] == "f").unwrap().clone();
    assert_eq!(entry["band_limit"], 40);
    assert!((entry["truncation_error"].as_f64().unwrap() - tail.sqrt()).abs() < 1e-12);
    let bad = ncgeom(dir.path(), &["encode", "--N", "8", "--extra", "x1=x2"]);
    assert_eq!(bad.status.code(), Some(2));
}
