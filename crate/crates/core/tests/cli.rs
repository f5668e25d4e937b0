use std::path::Path;
use std::process::Command;

fn suq2(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_suq2"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env_remove("SUQ2_OUT_DIR")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn classify_sweep_partitions_bands() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = suq2(dir.path(), &["classify", "--s", "1.013", "--c-range", "0.2:2.0:0.01"]);
    assert_eq!(code, 0);
    let csv = read(dir.path(), "classify.csv");
    let mut bands = std::collections::BTreeSet::new();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let c: f64 = cols[0].parse().unwrap();
        let band = cols[1];
        let class = cols[2];
        let expected = match class {
            "continuous1" => "above_c0",
            "discrete3" | "finite2b" => "c2_to_c1",
            other => panic!("unexpected class {other} at c = {c}"),
        };
        assert_eq!(band, expected);
        bands.insert(band.to_string());
    }
    assert_eq!(bands.len(), 2);
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn classify_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = suq2(dir.path(), &["classify", "--s", "1.013", "--c", "0.1"]);
    assert_eq!(code, 0);
    assert_eq!(read(dir.path(), "classify.csv").lines().count(), 1);
    let (code, _, err) = suq2(dir.path(), &["classify", "--s", "0", "--c", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("s = 0"));
    let (code, _, _) = suq2(dir.path(), &["classify", "--c", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn rep_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = suq2(dir.path(), &["rep", "--s", "0.5", "--c", "1", "--verify"]);
    assert_eq!(code, 0, "{out}");
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "rep.json")).unwrap();
    assert!(json["report"]["res_jp_jm"].as_f64().unwrap() < 1e-10);
    let (code, _, _) = suq2(dir.path(), &["rep", "--s", "1.013", "--c", "2", "--basis=-3:3", "--verify"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "rep.json")).unwrap();
    assert_eq!(json["report"]["truncated"], true);
    let (code, _, _) = suq2(dir.path(), &["rep", "--s", "1.013", "--c", "1.2", "--basis=-2:2"]);
    assert_eq!(code, 3);
}

#[test]
fn potential_shapes() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("wells", vec!["--s", "0.25", "--m", "1"]),
        ("pt", vec!["--s", "3", "--m", "1", "--amp1", "0"]),
        ("morse", vec!["--s", "3.05", "--m", "3", "--f1", "constant-plus", "--f2", "exponential"]),
    ] {
        let mut a = vec!["potential", "--name", name];
        a.extend(args);
        let (code, _, err) = suq2(dir.path(), &a);
        assert_eq!(code, 0, "{err}");
    }
    let pt = read(dir.path(), "pt.csv");
    let v: Vec<f64> = pt.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let n = v.len();
    assert!(v[n / 2] < v[0] && v[n / 2] < v[n - 1]);
    assert!((v[0] - v[n - 1]).abs() < 1e-9);
    let wells = read(dir.path(), "wells.csv");
    assert!(wells.lines().skip(1).any(|l| l.ends_with(",1")));
}

#[test]
fn spectrum_models() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = suq2(dir.path(), &["spectrum", "--model", "box", "--grid", "0:1:0.001", "--n", "3"]);
    assert_eq!(code, 0);
    let rows: Vec<f64> = read(dir.path(), "spectrum.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    for (k, e) in rows.iter().enumerate() {
        let exact = ((k + 1) as f64 * std::f64::consts::PI).powi(2);
        assert!((e - exact).abs() < 1e-4 * exact);
    }
    let (code, _, _) = suq2(dir.path(), &["spectrum", "--s", "0.25", "--m", "1", "--n", "2", "--name", "cells"]);
    assert_eq!(code, 0);
    let cells: std::collections::BTreeSet<String> =
        read(dir.path(), "cells.csv").lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert!(cells.len() > 1);
}

#[test]
fn flow_surface_hopf() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = suq2(dir.path(), &["flow"]);
    assert_eq!(code, 0);
    assert_eq!(read(dir.path(), "flow.csv").lines().count(), 1 + 9 * 500);
    let (code, out, _) = suq2(dir.path(), &["surface", "--c", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("transition s* = 0.90"));
    let (code, out, _) = suq2(dir.path(), &["hopf", "--verify"]);
    assert_eq!(code, 0);
    assert!(out.contains("coassociativity"));
}

#[test]
fn config_env_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("defaults.cfg");
    std::fs::write(&cfg, "s = 0.25\nm = 1\ngrid = -5:5:0.01\n").unwrap();
    let (code, _, err) = suq2(dir.path(), &["--config", cfg.to_str().unwrap(), "potential", "--m", "2"]);
    assert_eq!(code, 0, "{err}");
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path(), "potential.manifest.json")).unwrap();
    assert_eq!(manifest["args"]["m"], 2.0);
    assert_eq!(manifest["args"]["grid"], "-5:5:0.01");

    let env_dir = dir.path().join("env");
    let out = Command::new(env!("CARGO_BIN_EXE_suq2"))
        .args(["flow", "--points", "20"])
        .env("SUQ2_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_dir.join("flow.csv").exists());

    let again = dir.path().join("again");
    let m = dir.path().join("potential.manifest.json");
    let (code, out, _) = suq2(&again, &["replay", m.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(read(dir.path(), "potential.csv"), read(&again, "potential.csv"));

    let mut tampered: serde_json::Value = serde_json::from_str(&read(dir.path(), "potential.manifest.json")).unwrap();
    tampered["outputs"]["potential.csv"] = "00".into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, tampered.to_string()).unwrap();
    let (code, _, _) = suq2(&again, &["replay", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn help_and_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(suq2(dir.path(), &["--help"]).0, 0);
    assert_eq!(suq2(dir.path(), &["classify", "--s", "x"]).0, 2);
    assert_eq!(suq2(dir.path(), &["nonsense"]).0, 2);
}
