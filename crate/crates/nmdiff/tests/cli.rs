use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nmdiff::csvio::Table;

fn nmdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmdiff"))
        .args(args)
        .env_remove("NMDIFF_THREADS")
        .output()
        .expect("binary runs")
}

fn config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_table(out: &Output) -> Table {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("stdout.csv");
    std::fs::write(&p, &out.stdout).unwrap();
    Table::read(&p).unwrap()
}

#[test]
fn density_rows() {
    let dir = tempfile::tempdir().unwrap();
    let gauss = config(dir.path(), "g.json", r#"{"parent": {"kind": "bm"}, "kernel": {"kind": "power", "beta": 1}}"#);
    let out = nmdiff(&["density", "--config", s(&gauss), "--t", "1", "--x-min", "-1", "--x-max", "1", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let t = stdout_table(&out);
    assert_eq!(t.header, ["x", "f"]);
    assert!((t.rows[1][1] - 0.28209479177387814).abs() < 1e-12);

    let one = nmdiff(&["density", "--config", s(&gauss), "--t", "1", "--x-min", "0", "--x-max", "0", "--points", "1"]);
    assert_eq!(stdout_table(&one).rows.len(), 1);

    let exp = config(dir.path(), "e.json", r#"{"kernel": {"kind": "exp", "a": 1}}"#);
    let file = dir.path().join("exp.csv");
    let out = nmdiff(&["density", "--config", s(&exp), "--t", "50", "--points", "61", "--x-min", "-3", "--x-max", "3", "--out", s(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    for row in Table::read(&file).unwrap().rows {
        let stationary = 0.5 * (-row[0].abs()).exp();
        assert!((row[1] - stationary).abs() < 1e-6);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = config(dir.path(), "bad.json", r#"{"kernel": {"kind": "power", "beta": -0.5}}"#);
    let out = nmdiff(&["density", "--config", s(&bad), "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kernel.beta"));

    let broken = config(dir.path(), "broken.json", "{\n  \"kernel\": {\"kind\": \"power\" \"beta\": 0.5}\n}");
    let out = nmdiff(&["density", "--config", s(&broken), "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(nmdiff(&["density", "--t", "1"]).status.code(), Some(2));
    assert_eq!(nmdiff(&["figure", "99"]).status.code(), Some(2));

    let pe = config(dir.path(), "pe.json", r#"{"kernel": {"kind": "power_exp", "beta": 0.5, "a": 1}}"#);
    assert_eq!(nmdiff(&["density", "--config", s(&pe), "--t", "1"]).status.code(), Some(3));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", r#"{"kernel": {"kind": "power", "beta": 0.5}}"#);
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = nmdiff(&["simulate", "--config", s(&cfg), "--n", "1", "--seed", "7", "--steps", "32", "--out", s(&p)]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read_to_string(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert!(a.starts_with("t,value,time_change\n"));
    assert_eq!(a.lines().count(), 34);

    let delta = config(dir.path(), "d.json", r#"{"kernel": {"kind": "power", "beta": 1}, "time_model": {"kind": "delta"}}"#);
    let out = nmdiff(&["simulate", "--config", s(&delta), "--n", "1", "--steps", "8"]);
    let t = stdout_table(&out);
    assert_eq!(t.column("t").unwrap(), t.column("time_change").unwrap());

    let multi = dir.path().join("m.csv");
    let out = nmdiff(&["simulate", "--config", s(&cfg), "--n", "3", "--steps", "4", "--out", s(&multi)]);
    assert_eq!(out.status.code(), Some(0));
    for i in 0..3 {
        assert!(dir.path().join(format!("m_{i}.csv")).exists());
    }
    let out = nmdiff(&["simulate", "--config", s(&cfg), "--n", "3", "--steps", "4", "--concat"]);
    let t = stdout_table(&out);
    assert_eq!(t.header[0], "path_id");
    assert_eq!(t.rows.len(), 15);
}

#[test]
fn mc_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", r#"{"kernel": {"kind": "power", "beta": 0.5}, "time_model": {"kind": "abs_bm"}}"#);
    let json = dir.path().join("r.json");
    let out = nmdiff(&["mc", "--config", s(&cfg), "--n", "5000", "--seed", "3", "--t-grid", "1:8", "--out", s(&json), "--ks"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["times", "mean", "mean_se", "var", "var_se", "theory_var"] {
        assert!(report[key].is_array(), "{key}");
    }
    assert!(report["hist"]["edges"].is_array() && report["hist"]["counts"].is_array());
    assert!(report["ks"]["stat"].as_f64().unwrap() < report["ks"]["crit_1pct"].as_f64().unwrap());
    let table = Table::read(&json.with_extension("csv")).unwrap();
    assert_eq!(table.header, ["t", "var_est", "var_se", "var_theory"]);
    let g = 0.886_226_925_452_758_f64;
    for row in &table.rows {
        assert!((row[3] - 2.0 * row[0].sqrt() / g).abs() < 1e-12);
    }

    let noise = config(dir.path(), "n.json", r#"{"kernel": {"kind": "exp", "a": 1}, "time_model": {"kind": "min_exp_noise"}}"#);
    let run = |workers: Option<&str>, threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nmdiff"));
        cmd.args(["mc", "--config", s(&noise), "--n", "500", "--t-grid", "10:16"]);
        if let Some(w) = workers {
            cmd.args(["--workers", w]);
        }
        match threads {
            Some(t) => cmd.env("NMDIFF_THREADS", t),
            None => cmd.env_remove("NMDIFF_THREADS"),
        };
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let base = run(None, None);
    assert_eq!(base, run(Some("1"), None));
    assert_eq!(base, run(Some("8"), Some("2")));
    let report: serde_json::Value = serde_json::from_slice(&base).unwrap();
    let times = report["times"].as_array().unwrap();
    let theory = report["theory_var"].as_array().unwrap();
    for (t, v) in times.iter().zip(theory) {
        let t = t.as_f64().unwrap();
        assert!((v.as_f64().unwrap() - 2.0 * (1.0 - (-t).exp())).abs() < 1e-12);
    }
}

#[test]
fn kernel_validation_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let good = config(dir.path(), "g.json", r#"{"kernel": {"kind": "power_exp", "beta": 0.5, "a": 1}}"#);
    let out = nmdiff(&["validate-kernel", "--config", s(&good), "--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["pass"], true);
    let bad = config(dir.path(), "b.json", r#"{"kernel": {"kind": "power", "beta": 1.5}}"#);
    let out = nmdiff(&["validate-kernel", "--config", s(&bad)]);
    assert_eq!(out.status.code(), Some(4));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["pass"], false);
    assert!(rep["first_violation"]["s"].is_number());

    let power = config(dir.path(), "p.json", r#"{"kernel": {"kind": "power", "beta": 0.5}}"#);
    let out = nmdiff(&["verify", "--config", s(&power), "--x", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!(r <= 1e-4);
    let out = nmdiff(&["verify", "--config", s(&power), "--x", "1", "--t", "1", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(4));
    let out = nmdiff(&["verify", "--config", s(&power), "--x", "0", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = nmdiff(&["verify", "--config", s(&power), "--set", "kernel.beta=1", "--x", "-1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn figure_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let out = nmdiff(&["figure", "1", "--out-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let t = Table::read(&dir.path().join("fig1_hbeta.csv")).unwrap();
    assert_eq!(t.header, ["tau", "h_025", "h_05", "h_075"]);
    let h05 = t.column("h_05").unwrap();
    assert!((h05[0] - 0.5641895835477563).abs() < 1e-14);

    let out = nmdiff(&["figure", "5", "--out-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let hist = Table::read(&dir.path().join("fig5_hist.csv")).unwrap();
    assert_eq!(hist.header, ["left", "right", "count", "density"]);
    assert!(dir.path().join("fig5_density.csv").exists());
    let first = std::fs::read(dir.path().join("fig5_hist.csv")).unwrap();
    nmdiff(&["figure", "5", "--out-dir", s(dir.path()), "--workers", "3"]);
    assert_eq!(first, std::fs::read(dir.path().join("fig5_hist.csv")).unwrap());
}
