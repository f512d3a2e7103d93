#![allow(clippy::approx_constant)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn rail() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/rail.csv")
        .display()
        .to_string()
}

fn banova(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_banova"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn classic_rail_text() {
    let o = banova(&["classic", &rail()]);
    assert!(o.status.success());
    let out = stdout(&o);
    for needle in ["9310.50", "1862.10", "115.18", "194.00", "16.17"] {
        assert!(out.contains(needle), "{needle} missing from\n{out}");
    }
}

#[test]
fn classic_json_carries_the_text_numbers() {
    let text = stdout(&banova(&["classic", &rail()]));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&banova(&["classic", &rail(), "--format", "json"]))).unwrap();
    for row in json["rows"].as_array().unwrap() {
        for key in ["sum_sq", "mean_sq", "f_value"] {
            if let Some(x) = row[key].as_f64() {
                assert!(text.contains(&format!("{x:.2}")), "{key} = {x} not in text");
            }
        }
    }
}

#[test]
fn unbalanced_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "unbalanced.csv", "group,value\na,1\na,2\nb,3\n");
    let o = banova(&["classic", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UnbalancedDesign"));
}

#[test]
fn bad_header_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.csv", "g,y\na,1\na,2\nb,3\nb,4\n");
    assert_eq!(banova(&["classic", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(banova(&["classic", "/nonexistent/data.csv"]).status.code(), Some(2));
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_banova"))
        .args(["classic", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(fs::read(rail()).unwrap().as_slice())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), stdout(&banova(&["classic", &rail()])));
}

#[test]
fn banova_rail_defaults() {
    let o = banova(&["banova", &rail()]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| l.contains("alpha")).collect();
    assert_eq!(rows.len(), 3, "{out}");
    assert!(rows[..2].iter().all(|r| r.trim_end().ends_with("1.000")), "{out}");
    assert!(out.contains("Pr(sigma2_alpha = 0 | Y) = 0.000"));
}

#[test]
fn banova_json_carries_the_text_numbers() {
    let text = stdout(&banova(&["banova", &rail(), "--draws", "20000", "--seed", "3"]));
    let json: serde_json::Value = serde_json::from_str(&stdout(&banova(&[
        "banova",
        &rail(),
        "--draws",
        "20000",
        "--seed",
        "3",
        "--format",
        "json",
    ])))
    .unwrap();
    for row in json["rows"].as_array().unwrap() {
        for key in ["mean", "median", "q_lower", "q_upper"] {
            let x = row[key].as_f64().unwrap();
            assert!(text.contains(&format!("{x:.2}")), "{key} = {x} not in\n{text}");
        }
    }
}

#[test]
fn banova_is_deterministic_and_exports_draws() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |p: &Path| {
        banova(&[
            "banova",
            &rail(),
            "--draws",
            "5000",
            "--seed",
            "8",
            "--export-draws",
            p.to_str().unwrap(),
        ])
    };
    let (oa, ob) = (run(&a), run(&b));
    assert_eq!(oa.stdout, ob.stdout);
    let draws = fs::read_to_string(&a).unwrap();
    assert_eq!(draws, fs::read_to_string(&b).unwrap());
    assert_eq!(draws.lines().count(), 5001);
    assert!(draws.starts_with("draw,sigma2_eps,sigma2_alpha,at_zero"));
    let other = banova(&["banova", &rail(), "--draws", "5000", "--seed", "9"]);
    assert_ne!(oa.stdout, other.stdout);
}

#[test]
fn constant_data_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "constant-data.csv", "group,value\na,5\na,5\nb,5\nb,5\n");
    let o = banova(&["banova", p.to_str().unwrap(), "--draws", "2000"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(banova(&["classic", p.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn banova_rejects_bad_settings() {
    assert_eq!(banova(&["banova", &rail(), "--draws", "10"]).status.code(), Some(2));
    assert_eq!(banova(&["banova", &rail(), "--ci", "1.5"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "h.json", r#"{"tau": 2.0}"#);
    assert_eq!(
        banova(&["banova", &rail(), "--hyper", unknown.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let nonconj = write(dir.path(), "n.json", r#"{"tau_eps": 1.0}"#);
    let o = banova(&["banova", &rail(), "--hyper", nonconj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NonConjugateConfig"));
}

#[test]
fn hyperparameter_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.json", r#"{"u_eps": 3.0, "v_eps": 500.0}"#);
    let base = banova(&["banova", &rail(), "--draws", "5000", "--format", "json"]);
    let tuned = banova(&[
        "banova",
        &rail(),
        "--draws",
        "5000",
        "--format",
        "json",
        "--hyper",
        h.to_str().unwrap(),
    ]);
    assert!(tuned.status.success());
    let mean = |o: &Output| -> f64 {
        let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["rows"][2]["mean"].as_f64().unwrap()
    };
    assert!(mean(&tuned) > mean(&base));
}

#[test]
fn region_writes_both_grids() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = banova(&[
        "region",
        &rail(),
        "--draws",
        "20000",
        "--grid",
        "30x20",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lik = fs::read_to_string(dir.path().join("relative_likelihood.csv")).unwrap();
    let hpd = fs::read_to_string(dir.path().join("hpd_density.csv")).unwrap();
    assert!(lik.starts_with("# kind=RelativeLikelihood\n"));
    assert!(hpd.starts_with("# kind=HpdDensity\n"));
    for grid in [&lik, &hpd] {
        assert_eq!(grid.lines().filter(|l| l.starts_with("# level=")).count(), 3);
        assert_eq!(grid.lines().filter(|l| !l.starts_with('#')).count(), 1 + 30 * 20);
    }
    let thresholds: Vec<f64> = lik
        .lines()
        .filter_map(|l| l.strip_prefix("# level="))
        .map(|l| l.split_once(",threshold=").unwrap().1.parse().unwrap())
        .collect();
    for (t, want) in thresholds.iter().zip([-0.6931, -1.3863, -2.9957]) {
        assert!((t - want).abs() < 1e-4);
    }
}

#[test]
fn region_single_level_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = banova(&[
        "region",
        &rail(),
        "--draws",
        "20000",
        "--grid",
        "10x10",
        "--levels",
        "0.9",
        "--format",
        "json",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["relative_likelihood.json", "hpd_density.json"] {
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        assert_eq!(v["contour_levels"].as_array().unwrap().len(), 1);
    }
    assert_eq!(
        banova(&["region", &rail(), "--levels", "1.2", "--out-dir", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        banova(&["region", &rail(), "--grid", "ten", "--out-dir", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        banova(&["region", &rail(), "--draws", "5000", "--out-dir", out])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_one_replicate_per_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = banova(&[
        "simulate",
        "--preset",
        "paper",
        "--reps",
        "1",
        "--draws",
        "2000",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let records = fs::read_to_string(dir.path().join("simulation_records.csv")).unwrap();
    let cases: Vec<&str> = records.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(cases, ["A", "B"]);
    let agg: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("simulation_aggregate.json")).unwrap()).unwrap();
    assert_eq!(agg["aggregates"].as_array().unwrap().len(), 2);
}

#[test]
fn simulate_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"case_a": {"n_groups": 3, "n_reps": 4, "sigma2_alpha": 0.0, "sigma2_eps": 1.0},
            "case_b": {"n_groups": 4, "n_reps": 2, "sigma2_alpha": 5.0, "sigma2_eps": 1.0}}"#,
    );
    let out = dir.path().to_str().unwrap();
    let o = banova(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--reps",
        "3",
        "--draws",
        "1000",
        "--format",
        "csv",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1 + 6);
}

#[test]
fn simulate_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = banova(&["simulate", "--out-dir", out]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"case_a": {"n_groups": 1}}"#);
    assert_eq!(
        banova(&["simulate", "--spec", bad.to_str().unwrap(), "--out-dir", out])
            .status
            .code(),
        Some(2)
    );
    let invalid = write(
        dir.path(),
        "invalid.json",
        r#"{"case_a": {"n_groups": 1, "n_reps": 4, "sigma2_alpha": 0.0, "sigma2_eps": 1.0},
            "case_b": {"n_groups": 4, "n_reps": 2, "sigma2_alpha": 5.0, "sigma2_eps": 1.0}}"#,
    );
    let o = banova(&[
        "simulate",
        "--spec",
        invalid.to_str().unwrap(),
        "--reps",
        "1",
        "--draws",
        "1000",
        "--out-dir",
        out,
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvalidSpec"));
}
