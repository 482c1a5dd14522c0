use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyperconvex"));
    c.env_remove("HYPERCONVEX_TOL");
    c
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn segments(dir: &Path) -> (PathBuf, PathBuf) {
    (
        write(
            dir,
            "a.json",
            r#"{"type":"polytope","ambient_dim":2,"points":[[0,0],[10,0]]}"#,
        ),
        write(
            dir,
            "b.json",
            r#"{"type":"polytope","ambient_dim":2,"points":[[0,0],[20,0]]}"#,
        ),
    )
}

#[test]
fn dist_metrics() {
    let dir = TempDir::new().unwrap();
    let (a, b) = segments(dir.path());
    let v = json(
        &bin()
            .args(["dist", "--metric", "hausdorff"])
            .arg(&a)
            .arg(&b)
            .output()
            .unwrap(),
    );
    assert_eq!(v["value"], 10.0);
    for metric in ["aw", "aw-origin"] {
        let v = json(
            &bin()
                .args(["dist", "--metric", metric, "--eps", "1e-3"])
                .arg(&a)
                .arg(&b)
                .output()
                .unwrap(),
        );
        let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
        assert!(lo <= 1.0 / 11.0 && 1.0 / 11.0 <= hi && hi - lo <= 1e-3, "{metric}: {v}");
    }
    let x = write(
        dir.path(),
        "x.json",
        r#"{"type":"subspace","ambient_dim":2,"basis":[[1,0]]}"#,
    );
    let d = write(
        dir.path(),
        "d.json",
        r#"{"type":"subspace","ambient_dim":2,"basis":[[1,1]]}"#,
    );
    let v = json(
        &bin()
            .args(["dist", "--metric", "gap"])
            .arg(&x)
            .arg(&d)
            .output()
            .unwrap(),
    );
    assert!((v["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn project_point() {
    let dir = TempDir::new().unwrap();
    let (a, _) = segments(dir.path());
    let v = json(&bin().arg("project").arg(&a).args(["--point", "-3,4"]).output().unwrap());
    assert_eq!(v["dist"], 5.0);
    assert_eq!(v["point"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn flat_chart_round_trip() {
    let dir = TempDir::new().unwrap();
    let w = write(
        dir.path(),
        "w.json",
        r#"{"type":"subspace","ambient_dim":2,"basis":[[1,0]]}"#,
    );
    let v = write(
        dir.path(),
        "v.json",
        r#"{"type":"subspace","ambient_dim":2,"basis":[[0.6,0.8]]}"#,
    );
    let om = write(dir.path(), "om.json", "[0, 2]");
    let out = bin()
        .args(["chart", "flat", "--w"])
        .arg(&w)
        .arg("--forward")
        .arg(&v)
        .arg(&om)
        .output()
        .unwrap();
    let flat = json(&out);
    assert_eq!(flat["type"], "flat");
    let f = write(dir.path(), "f.json", &flat.to_string());
    let back = json(
        &bin()
            .args(["chart", "flat", "--w"])
            .arg(&w)
            .arg("--inverse")
            .arg(&f)
            .output()
            .unwrap(),
    );
    let omega: Vec<f64> = serde_json::from_value(back["omega"].clone()).unwrap();
    assert!((omega[0]).abs() < 1e-12 && (omega[1] - 2.0).abs() < 1e-12);
    let basis = back["v"]["basis"][0].as_array().unwrap();
    assert!((basis[0].as_f64().unwrap().abs() - 0.6).abs() < 1e-12);
}

#[test]
fn convex_chart_round_trip() {
    let dir = TempDir::new().unwrap();
    let w = write(
        dir.path(),
        "w.json",
        r#"{"type":"subspace","ambient_dim":2,"basis":[[1,0]]}"#,
    );
    let v = write(
        dir.path(),
        "v.json",
        r#"{"type":"subspace","ambient_dim":2,"basis":[[0.6,0.8]]}"#,
    );
    let om = write(
        dir.path(),
        "om.json",
        r#"{"type":"polytope","ambient_dim":2,"points":[[0,-1]]}"#,
    );
    let a = write(
        dir.path(),
        "a.json",
        r#"{"type":"polytope","ambient_dim":2,"points":[[1,0],[3,0]]}"#,
    );
    let out = bin()
        .args(["chart", "convex", "--w"])
        .arg(&w)
        .arg("--forward")
        .args([&v, &om, &a])
        .output()
        .unwrap();
    let b = json(&out);
    assert_eq!(b["type"], "polytope");
    let bp = write(dir.path(), "b.json", &b.to_string());
    let t = json(
        &bin()
            .args(["chart", "convex", "--w"])
            .arg(&w)
            .arg("--inverse")
            .arg(&bp)
            .output()
            .unwrap(),
    );
    assert_eq!(t["a"]["type"], "polytope");
    let omega: Vec<f64> = serde_json::from_value(t["omega"].clone()).unwrap();
    assert!(omega[0].abs() < 1e-12 && (omega[1] + 1.0).abs() < 1e-12);
}

#[test]
fn gen_is_deterministic() {
    let run = || {
        bin()
            .args([
                "gen",
                "--kind",
                "uniform-subspace",
                "--dim",
                "3",
                "--k",
                "1",
                "--seed",
                "9",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(json(&a), json(&b));
    assert_eq!(json(&a)["ambient_dim"], 3);
}

#[test]
fn verify_writes_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = bin()
        .args([
            "verify",
            "--suite",
            "gap-complement",
            "--dim",
            "4",
            "--trials",
            "100",
            "--seed",
            "7",
            "--report",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout: Value = serde_json::from_slice(&out.stdout).unwrap();
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stdout, file);
    assert_eq!(file["passed"], true);
    assert_eq!(file["trials"], 100);
}

#[test]
fn usage_and_schema_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let (a, _) = segments(dir.path());
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"type":"polytope","ambient_dim":2,"points":[]}"#,
    );
    let cases: Vec<Vec<std::ffi::OsString>> = vec![
        vec!["dist".into(), "--metric".into(), "hausdorff".into(), a.clone().into()],
        vec![
            "dist".into(),
            "--metric".into(),
            "hausdorff".into(),
            a.clone().into(),
            bad.clone().into(),
        ],
        vec![
            "verify".into(),
            "--suite".into(),
            "nope".into(),
            "--dim".into(),
            "2".into(),
            "--trials".into(),
            "1".into(),
        ],
        vec![
            "gen".into(),
            "--kind".into(),
            "cube".into(),
            "--dim".into(),
            "2".into(),
            "--k".into(),
            "1".into(),
        ],
        vec!["project".into(), a.clone().into(), "--point".into(), "1,x".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn tolerance_override_from_env() {
    let dir = TempDir::new().unwrap();
    let (a, _) = segments(dir.path());
    let out = bin()
        .env("HYPERCONVEX_TOL", "not-a-number")
        .arg("project")
        .arg(&a)
        .args(["--point", "1,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .env("HYPERCONVEX_TOL", "1e-7")
        .arg("project")
        .arg(&a)
        .args(["--point", "1,1"])
        .output()
        .unwrap();
    assert_eq!(json(&out)["dist"], 1.0);
}
