use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

fn scenario(map: Value, eps: f64) -> Value {
    json!({
        "dimension": 2,
        "map": map,
        "epsilon": eps,
        "window": {"lo": [-2.0, -2.0], "hi": [2.0, 2.0]}
    })
}

fn affine(lambda: f64) -> Value {
    json!({"kind": "affine", "params": {"lambda": lambda}})
}

fn config(dir: &Path, name: &str, cfg: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    p
}

fn base_config(lambda: f64) -> Value {
    json!({
        "scenario": scenario(affine(lambda), 0.25),
        "h_box": 0.02,
        "h_front": 0.01,
        "curve": {"kind": "circle", "center": [0.0, 0.0], "radius": 1.0},
        "family": {"kind": "epsilon"},
        "deltas": [0.1, 0.05],
        "n_iter": 60,
        "n_orbits": 4
    })
}

fn run(args: &[&str], cfg: &Path, out: &Path) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_noisebound"))
        .args(args)
        .arg("--config")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    status.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn csv_rows(p: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn minimal_set_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = config(dir.path(), "a.json", &base_config(0.5));
    let out = dir.path().join("a");
    assert_eq!(run(&["minimal-set"], &ok, &out), 0);
    let cert = read_json(&out.join("certificate.json"));
    assert_eq!(cert["passed"], true);
    let rows = csv_rows(&out.join("boxset.csv"));
    assert_eq!(rows.len() as u64, cert["cells"].as_u64().unwrap());
    let far = rows
        .iter()
        .map(|r| r[2].parse::<f64>().unwrap().hypot(r[3].parse::<f64>().unwrap()))
        .fold(0.0, f64::max);
    assert!((far - 0.5).abs() < 0.05, "{far}");

    let exp = config(dir.path(), "e.json", &base_config(2.0));
    assert_eq!(run(&["minimal-set"], &exp, &dir.path().join("e")), 3);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"scenario\": [").unwrap();
    assert_eq!(run(&["minimal-set"], &bad, &dir.path().join("b")), 1);
}

#[test]
fn boundary_flow_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = config(dir.path(), "a.json", &base_config(0.5));
    let out = dir.path().join("a");
    assert_eq!(run(&["boundary-flow", "--relax"], &ok, &out), 0);
    let mut loops: Vec<PathBuf> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("loop_"))
        .collect();
    loops.sort();
    assert!(loops.len() > 2);
    for r in csv_rows(loops.last().unwrap()) {
        let rad = r[1].parse::<f64>().unwrap().hypot(r[2].parse::<f64>().unwrap());
        assert!((rad - 0.5).abs() < 1e-3, "{rad}");
    }
    assert_eq!(read_json(&out.join("singularity.json"))["singular"], false);

    let mut star = base_config(0.5);
    star["scenario"] = scenario(affine(0.5), 0.6);
    star["curve"] = json!({"kind": "polar", "center": [0.0, 0.0], "radius": 1.0, "harmonics": [[3, 0.3]]});
    let star = config(dir.path(), "s.json", &star);
    let out = dir.path().join("s");
    assert_eq!(run(&["boundary-flow", "--steps", "4"], &star, &out), 4);
    let rep = read_json(&out.join("singularity.json"));
    assert_eq!(rep["singular"], true);
    assert!(!rep["flagged_indices"].as_array().unwrap().is_empty());

    let exp = config(dir.path(), "e.json", &base_config(2.0));
    assert_eq!(run(&["boundary-flow", "--relax"], &exp, &dir.path().join("e")), 5);
}

#[test]
fn spectrum_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = config(dir.path(), "a.json", &base_config(0.5));
    let out = dir.path().join("a");
    assert_eq!(run(&["spectrum"], &ok, &out), 0);
    let rep = read_json(&out.join("spectrum.json"));
    assert_eq!(rep["verdict"], "NormallyAttracting");
    assert!((rep["normal"][0].as_f64().unwrap() - 0.5f64.ln()).abs() < 0.01);

    let injected = dir.path().join("anomaly.json");
    std::fs::write(
        &injected,
        json!({"tangential_exponent": 0.0, "normal_exponents": [0.69, -0.69],
               "per_orbit_spread": 0.0, "iterations_used": 100})
        .to_string(),
    )
    .unwrap();
    let out = dir.path().join("i");
    let args = ["spectrum", "--inject-report", injected.to_str().unwrap()];
    assert_eq!(run(&args, &ok, &out), 6);
    assert_eq!(read_json(&out.join("spectrum.json"))["verdict"], "ContactAnomaly");

    let exp = config(dir.path(), "e.json", &base_config(2.0));
    assert_eq!(run(&["spectrum"], &exp, &dir.path().join("e")), 5);
}

#[test]
fn persist_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = config(dir.path(), "a.json", &base_config(0.5));
    let out = dir.path().join("a");
    assert_eq!(run(&["persist"], &ok, &out), 0);
    let rows = csv_rows(&out.join("persistence.csv"));
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let delta: f64 = r[0].parse().unwrap();
        let c0: f64 = r[1].parse().unwrap();
        assert!((c0 - 2.0 * delta).abs() <= 0.01 + 1e-6, "{r:?}");
    }

    let mut lam = base_config(0.5);
    lam["family"] = json!({"kind": "lambda"});
    let lam = config(dir.path(), "l.json", &lam);
    let out = dir.path().join("l");
    assert_eq!(run(&["persist", "--deltas", "0.7,0.1"], &lam, &out), 7);
    let rows = csv_rows(&out.join("persistence.csv"));
    assert_eq!(rows[0].last().unwrap(), "false");
    assert_eq!(rows[1].last().unwrap(), "true");

    let exp = config(dir.path(), "e.json", &base_config(2.0));
    assert_eq!(run(&["persist"], &exp, &dir.path().join("e")), 8);
}

#[test]
fn equidistant_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = config(dir.path(), "a.json", &base_config(0.5));
    let out = dir.path().join("a");
    assert_eq!(run(&["equidistant", "--offset", "0.5"], &ok, &out), 0);
    for r in csv_rows(&out.join("curve.csv")) {
        let rad = r[1].parse::<f64>().unwrap().hypot(r[2].parse::<f64>().unwrap());
        assert!((rad - 1.5).abs() < 1e-3);
    }

    let mut ell = base_config(0.5);
    ell["curve"] = json!({"kind": "ellipse", "center": [0.0, 0.0], "a": 2.0, "b": 1.0});
    let ell = config(dir.path(), "el.json", &ell);
    let out = dir.path().join("el");
    assert_eq!(run(&["equidistant", "--offset", "-0.7"], &ell, &out), 4);
    assert!(out.join("curve.csv").exists());
    assert_eq!(read_json(&out.join("singularity.json"))["singular"], true);

    let mut none = base_config(0.5);
    none.as_object_mut().unwrap().remove("curve");
    let none = config(dir.path(), "n.json", &none);
    assert_eq!(run(&["equidistant", "--offset", "0.5"], &none, &dir.path().join("n")), 1);
}

#[test]
fn csv_curve_input() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("x,y\n");
    for k in 0..200 {
        let t = std::f64::consts::TAU * k as f64 / 200.0;
        text.push_str(&format!("{},{}\n", t.cos(), t.sin()));
    }
    std::fs::write(dir.path().join("circle.csv"), text).unwrap();
    let mut cfg = base_config(0.5);
    cfg["curve"] = json!({"kind": "csv", "path": "circle.csv"});
    let cfg = config(dir.path(), "c.json", &cfg);
    assert_eq!(run(&["equidistant", "--offset", "0.25"], &cfg, &dir.path().join("c")), 0);
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "a.json", &base_config(0.5));
    for cmd in ["minimal-set", "spectrum"] {
        let (a, b) = (dir.path().join(format!("{cmd}1")), dir.path().join(format!("{cmd}2")));
        assert_eq!(run(&[cmd, "--seed", "7"], &cfg, &a), 0);
        assert_eq!(run(&[cmd, "--seed", "7"], &cfg, &b), 0);
        for e in std::fs::read_dir(&a).unwrap() {
            let name = e.unwrap().file_name();
            let x = std::fs::read(a.join(&name)).unwrap();
            let y = std::fs::read(b.join(&name)).unwrap();
            assert_eq!(x, y, "{cmd}: {name:?}");
        }
    }
}
