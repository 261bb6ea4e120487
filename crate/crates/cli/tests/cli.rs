use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn momap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momap")).args(args).output().expect("spawn momap")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn galilean_verify_passes() {
    let o = momap(&["verify", "--example", "galilean"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("PASS cocycle.identity"));
    assert!(text.ends_with("all checks passed\n"));
}

#[test]
fn zero_tolerance_fails_with_every_check_listed() {
    let pass = json(&momap(&["verify", "--example", "heisenberg", "--json"]));
    let o = momap(&["verify", "--example", "heisenberg", "--json", "--tol", "0"]);
    assert_eq!(code(&o), 1);
    let fail = json(&o);
    assert_eq!(fail["status"], "fail");
    let names = |v: &serde_json::Value| -> Vec<String> { v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect() };
    assert_eq!(names(&pass), names(&fail));
    let checks = fail["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["tolerance"] == 0.0));
    assert!(checks.iter().any(|c| c["pass"] == false));
    // exact zeros still pass at tolerance 0
    assert!(checks.iter().any(|c| c["pass"] == true));
}

#[test]
fn broken_jacobi_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(
        dir.path(),
        "broken.toml",
        "dim = 3\ngram = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]\nbrackets = [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [2, 0, 1, 2.0], [0, 2, 0, 1.0]]\n",
    );
    let cfg = write(dir.path(), "cfg.toml", &format!("example = \"user-algebra-file\"\n[user]\nalgebra = {alg:?}\n"));
    let o = momap(&["verify", "--config", &cfg, "--json"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    let jacobi = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "algebra.jacobi").expect("jacobi check");
    assert_eq!(jacobi["pass"], false);
    assert!(jacobi["note"].as_str().unwrap().contains("worst triple"), "{jacobi}");

    let o = momap(&["critical", "--config", &cfg]);
    assert_eq!(code(&o), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&momap(&["verify", "--example", "nonsense"])), 2);
    assert_eq!(code(&momap(&["frobnicate"])), 2);
    assert_eq!(code(&momap(&["verify", "--example", "user-algebra-file"])), 2);
    assert_eq!(code(&momap(&["verify", "--config", "/nonexistent/cfg.toml"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "example = \"galilean\"\n[sampling]\nponts = 3\n");
    assert_eq!(code(&momap(&["verify", "--config", &cfg])), 2);

    // (p, q, x) with x on the unit sphere but p ≠ 0 is not critical, and is refused
    let mut point = ["0.0"; 9];
    point[0] = "1.0";
    point[8] = "1.0";
    let cfg = write(dir.path(), "h.toml", &format!("example = \"galilean\"\n[hessian]\npoint = [{}]\n", point.join(", ")));
    let o = momap(&["hessian", "--config", &cfg, "--json"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["status"], "refused");
}

#[test]
fn fixed_seed_reports_are_identical() {
    for ex in ["galilean", "siegel"] {
        let a = momap(&["verify", "--example", ex, "--seed", "11", "--json"]);
        let b = momap(&["verify", "--example", ex, "--seed", "11", "--json"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{ex}");
    }
    let a = momap(&["verify", "--example", "unitary", "--seed", "1", "--json"]);
    let b = momap(&["verify", "--example", "unitary", "--seed", "2", "--json"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn critical_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = momap(&["critical", "--example", "unitary", "--out", out.to_str().unwrap(), "--svg"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    for f in ["report.json", "checks.csv", "trajectory.csv", "trajectory.svg"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(r["experiment"], "critical");
    assert!(!r["trajectory"].as_array().unwrap().is_empty());
    let csv = fs::read_to_string(out.join("checks.csv")).unwrap();
    assert!(csv.starts_with("name,anchor,defect,tolerance,pass\n"));
}
