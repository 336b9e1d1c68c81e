use std::path::Path;
use std::process::{Command, Output};

fn ptgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptgauss")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ptgauss(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    ptgauss(args).status.code().unwrap()
}

/// One numeric column of a CSV table.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["evolve", "--kappa", "0.5", "--gamma", "0.3", "--steps", "3"]), 0);
    assert_eq!(code(&["verify", "--tolerance", "1e-30"]), 1);
    assert_eq!(code(&["evolve", "--kappa", "-1", "--gamma", "0.3"]), 2);
    assert_eq!(code(&["evolve", "--kappa", "0.5", "--gamma", "0.3", "--model", "nope"]), 2);
    assert_eq!(code(&["sink", "--kappa", "0.6", "--gamma", "0.8"]), 3);
    assert_eq!(code(&["evolve", "--kappa", "0.9", "--gamma", "0.9", "--model", "sink"]), 3);
}

#[test]
fn verify_is_reproducible() {
    let a = stdout(&["verify", "--seed", "7"]);
    let b = stdout(&["verify", "--seed", "7"]);
    assert_eq!(a, b);
    let checks = a.lines().filter(|l| l.starts_with("PASS")).count();
    assert!(checks >= 6, "{a}");
    assert!(!a.contains("FAIL"));
}

#[test]
fn sweep_is_deterministic_across_threads() {
    let args = ["sweep", "--grid-n", "6", "--model", "sink", "--quantity", "tau1"];
    let one = stdout(&[&args[..], &["--threads", "1"]].concat());
    let many = stdout(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(one, many);
    assert_eq!(one, stdout(&args));
    assert_eq!(one.lines().next().unwrap(), "kappa_over_eps,gamma_over_eps,value,flags,regime");
    assert_eq!(one.lines().count(), 1 + 36);
}

#[test]
fn lambda_sweep() {
    let csv = stdout(&["sweep", "--grid-n", "3", "--quantity", "lambda", "--model", "sink"]);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    // γ = 0 rows carry no sink
    for r in rows.iter().filter(|r| r[1].parse::<f64>().unwrap() == 0.0 && r[4] == "oscillatory") {
        assert_eq!(r[2].parse::<f64>().unwrap(), 0.0);
    }
    // κ = 1, γ = 0 sits on the exceptional point
    let ep = rows.iter().find(|r| r[0].starts_with("1.0") && r[1].starts_with("0.0")).unwrap();
    assert_eq!(ep[2], "NaN");
    assert_eq!(ep[4], "exceptional_point");
}

#[test]
fn sink_report() {
    let csv = stdout(&["sink", "--kappa", "0.5", "--gamma", "0.5"]);
    let lambda = column(&csv, "lambda")[0];
    assert!((lambda + 2.0).abs() < 1e-12);
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["sink", "--kappa", "0.5", "--gamma", "0.5", "--format", "json"])).unwrap();
    assert!((json["lambda"].as_f64().unwrap() + 2.0).abs() < 1e-12);
}

#[test]
fn full_model_loses_quantumness() {
    let csv = stdout(&["evolve", "--kappa", "0.5", "--gamma", "0.3", "--t-max", "400", "--steps", "801"]);
    let t = column(&csv, "eps_t");
    for name in ["tau", "tau1", "tau2", "EN"] {
        let v = column(&csv, name);
        if name != "tau2" {
            assert!(v.iter().any(|x| *x > 0.0), "{name} never nonclassical");
        }
        for (ti, vi) in t.iter().zip(&v) {
            if *ti >= 200.0 {
                assert_eq!(*vi, 0.0, "{name} at eps*t = {ti}");
            }
        }
    }
}

#[test]
fn sink_model_is_periodic() {
    let (k, g) = (0.5f64, 0.3f64);
    let period = 2.0 * std::f64::consts::PI / (1.0 - k * k - g * g).sqrt();
    let t_max = format!("{}", 2.0 * period);
    let csv = stdout(&["evolve", "--kappa", "0.5", "--gamma", "0.3", "--model", "sink", "--t-max", &t_max, "--steps", "201"]);
    for name in ["B1", "B2", "ReC1", "tau1", "EN"] {
        let v = column(&csv, name);
        for i in 0..100 {
            assert!((v[i] - v[i + 100]).abs() < 1e-6, "{name} row {i}: {} vs {}", v[i], v[i + 100]);
        }
    }
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let out = dir.path().join("out.json");
    std::fs::write(&cfg, "# demo\nmodel = semiclassical\nquantity = en\ngrid_n = 4\nformat = json\n").unwrap();
    let path = |p: &Path| p.to_str().unwrap().to_owned();

    let from_file = stdout(&["sweep", "--config", &path(&cfg)]);
    let doc: serde_json::Value = serde_json::from_str(&from_file).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 16);

    // flags win over the file, and --out writes instead of printing
    let printed = stdout(&["sweep", "--config", &path(&cfg), "--grid-n", "2", "--format", "csv", "--out", &path(&out)]);
    assert!(printed.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().count(), 1 + 4);

    std::fs::write(&cfg, "model = full\nquantity = ratio_en\n").unwrap();
    assert_eq!(code(&["sweep", "--config", &path(&cfg)]), 2);
    std::fs::write(&cfg, "no equals sign\n").unwrap();
    assert_eq!(code(&["sweep", "--config", &path(&cfg)]), 2);
}
