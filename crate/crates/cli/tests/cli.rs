use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rsl_core::radon::io::read_text;
use rsl_core::report::{parse_num, CsvTable};

fn rsl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsl")).current_dir(dir).args(args).output().expect("spawn rsl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn avg_single_time_matches_kernel() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("delta.grid"), "1 0 0\n1 0\n").unwrap();
    let o = rsl(dir.path(), &["avg", "--map", "n^2", "--body", "ball", "--t", "3", "--input", "delta.grid", "--out", "out"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let g = read_text(&fs::read_to_string(dir.path().join("out/average.grid")).unwrap()).unwrap();
    assert_eq!((g.bbox.lo.clone(), g.bbox.hi.clone()), (vec![0], vec![4]));
    let want = [0.2, 0.4, 0.0, 0.0, 0.4];
    for (v, w) in g.values.iter().zip(want) {
        assert!((v.re - w).abs() < 1e-15 && v.im == 0.0);
    }
}

#[test]
fn avg_family_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = rsl(dir.path(), &["avg", "--map", "n", "--grid", "dyadic:0..2", "--out", "out"]);
    assert_eq!(o.status.code(), Some(0));
    let t = CsvTable::from_csv(&fs::read_to_string(dir.path().join("out/results.csv")).unwrap()).unwrap();
    assert_eq!(t.header, ["t", "x1", "re", "im"]);
    // three times on the common box [−3, 3]
    assert_eq!(t.rows.len(), 21);
    let mass: f64 = t.rows.iter().filter(|r| r[0] == t.rows[20][0]).map(|r| parse_num(&r[2]).unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-14);
}

#[test]
fn sigma_lists_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let o = rsl(dir.path(), &["sigma", "--N", "3", "--dim", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[1], serde_json::json!({ "a": [-1], "q": 2 }));
}

#[test]
fn suite_is_clean_and_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = rsl(d.path(), &["suite", "--trials", "1500", "--seed", "7", "--out", "out"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["explicit_violations"], 0);
        assert_eq!(v["seed"], 7);
    }
    for f in ["results.csv", "summary.json"] {
        assert_eq!(fs::read(a.path().join("out").join(f)).unwrap(), fs::read(b.path().join("out").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn constants_outputs_are_deterministic() {
    let args = ["constants", "--map", "n^2", "--grid", "dyadic:0..3", "--budget", "40", "--seed", "5", "--out", "out"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(rsl(a.path(), &args).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_rsl"))
        .current_dir(b.path())
        .env("RSL_THREADS", "1")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    for f in ["results.csv", "summary.json", "witness-s5.grid", "trace-s5.csv"] {
        assert_eq!(fs::read(a.path().join("out").join(f)).unwrap(), fs::read(b.path().join("out").join(f)).unwrap(), "{f}");
    }
    let t = CsvTable::from_csv(&fs::read_to_string(a.path().join("out/results.csv")).unwrap()).unwrap();
    assert_eq!(t.column("seed").unwrap(), ["5"]);
    assert!(parse_num(t.column("value").unwrap()[0]).unwrap() >= 1.0);
}

#[test]
fn sweep_and_fourier_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = rsl(dir.path(), &["sweep", "--map", "n^2", "--grid", "dyadic:0..2", "--budget", "20", "--coeffs", "1..3", "--out", "s"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_over_min"], 1.0);
    let o = rsl(dir.path(), &["fourier", "gauss", "--map", "n^2", "--N", "20", "--out", "g"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("g/gauss.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    let o = rsl(dir.path(), &["fourier", "minor-arc", "--map", "n", "--N", "6", "--budget", "64", "--out", "m"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("m/minor_arc.svg").exists());
}

#[test]
fn validation_errors_exit_one_with_json() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.csv"), "x,y\n").unwrap();
    for args in [
        vec!["report", "--input", "empty.csv"],
        vec!["avg", "--bogus", "1"],
        vec!["avg", "--map", "n^2 + 1", "--t", "2"],
        vec!["seminorm", "--kind", "var:0.5"],
        vec!["fourier", "spiral"],
    ] {
        let o = rsl(dir.path(), &args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
        assert_eq!(err["exit_code"], 1, "{args:?}");
    }
    let o = rsl(dir.path(), &["report", "--input", "empty.csv"]);
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "empty_series");
}
