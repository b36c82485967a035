use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use robust_tails::io::{read_sample, Header};
use robust_tails::{fit_tail, AmbiguitySet, CurveMethod, DivergenceSpec, WorstCaseCurve};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_robust-tails"));
    c.env_remove("ROBUST_TAILS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Pareto(β = 2) plotting-position sample with a header row.
fn pareto_csv(dir: &Path) -> PathBuf {
    let n = 2000;
    let mut text = String::from("claim\n");
    for i in 0..n {
        let q = (i as f64 + 0.5) / n as f64;
        text.push_str(&format!("{}\n", (1.0 - q).powf(-0.5)));
    }
    let path = dir.join("claims.csv");
    fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

#[test]
fn help_lists_exit_codes() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for line in ["Exit codes:", "0  success", "2  input error", "3  fit failure", "4  numerical failure", "ROBUST_TAILS_THREADS"] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1.0\n2.0\nabc\n").unwrap();
    let missing = dir.path().join("missing.csv");
    for p in [&empty, &bad, &missing] {
        let out = run(&["fit", "--input", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}: {}", p.display(), String::from_utf8_lossy(&out.stderr));
    }
    let data = pareto_csv(dir.path());
    let out = run(&["fit", "--input", data.to_str().unwrap(), "--threshold", "q1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["fit", "--input", data.to_str().unwrap()]).env("ROBUST_TAILS_THREADS", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn light_tailed_data_exit_3() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("uniform.csv");
    let text: String = (0..1000).map(|i| format!("{}\n", (i as f64 + 0.5) / 1000.0)).collect();
    fs::write(&path, text).unwrap();
    let out = run(&["fit", "--input", path.to_str().unwrap(), "--threshold", "q0.9"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fit_matches_library_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let data = pareto_csv(dir.path());
    let report = json(&run(&["fit", "--input", data.to_str().unwrap(), "--threshold", "4.0"]));
    let sample = read_sample(&data, 0, Header::Auto).unwrap();
    let fit = fit_tail(&sample, 4.0).unwrap();
    let r = &report["fit"];
    assert_eq!(f(&r["beta"]).to_bits(), fit.model.beta.to_bits());
    assert_eq!(f(&r["sigma"]).to_bits(), fit.model.sigma.to_bits());
    assert_eq!(f(&r["p_u"]).to_bits(), fit.model.p_u.to_bits());
    assert_eq!(f(&r["epsilon"]).to_bits(), fit.epsilon().to_bits());
    assert_eq!(r["n_total"], 2000);
    assert!((fit.model.beta - 2.0).abs() < 0.3, "{}", fit.model.beta);
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let data = pareto_csv(dir.path());
    let args = ["bounds", "--input", data.to_str().unwrap(), "--seed", "7", "--grid", "5:200:40:log"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = bin().args(args).env("ROBUST_TAILS_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn report_and_csv_round_trip_against_library() {
    let dir = TempDir::new().unwrap();
    let data = pareto_csv(dir.path());
    let out = dir.path().join("report.json");
    let status = run(&[
        "bounds", "--input", data.to_str().unwrap(), "--threshold", "4.0", "--divergence", "kl",
        "--divergence", "chi2", "--delta", "w=0.3,f=0.05", "--s", "1.2", "--grid", "5:500:30:log",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();

    let sample = read_sample(&data, 0, Header::Auto).unwrap();
    let model = fit_tail(&sample, 4.0).unwrap().model;
    let xs: Vec<f64> = report["curves"][0]["points"].as_array().unwrap().iter().map(|p| f(&p["x"])).collect();
    assert_eq!(xs.len(), 30);
    let expected = [
        WorstCaseCurve::reference(&model, &xs).unwrap(),
        WorstCaseCurve::compute(&model, AmbiguitySet::Wasserstein { s: 1.2, delta: 0.3 }, CurveMethod::Preasymptotic, &xs).unwrap(),
        WorstCaseCurve::compute(&model, AmbiguitySet::Wasserstein { s: 1.2, delta: 0.3 }, CurveMethod::Asymptotic, &xs).unwrap(),
        WorstCaseCurve::compute(&model, AmbiguitySet::FDivergence { spec: DivergenceSpec::kl(), delta: 0.05 }, CurveMethod::Preasymptotic, &xs).unwrap(),
        WorstCaseCurve::compute(&model, AmbiguitySet::FDivergence { spec: DivergenceSpec::kl(), delta: 0.05 }, CurveMethod::Asymptotic, &xs).unwrap(),
        WorstCaseCurve::compute(&model, AmbiguitySet::FDivergence { spec: DivergenceSpec::chi_squared(), delta: 0.05 }, CurveMethod::Preasymptotic, &xs).unwrap(),
        WorstCaseCurve::compute(&model, AmbiguitySet::FDivergence { spec: DivergenceSpec::chi_squared(), delta: 0.05 }, CurveMethod::Asymptotic, &xs).unwrap(),
    ];
    let curves = report["curves"].as_array().unwrap();
    assert_eq!(curves.len(), expected.len());
    for (c, e) in curves.iter().zip(&expected) {
        assert_eq!(c["name"].as_str().unwrap(), e.name());
        let csv = fs::read_to_string(dir.path().join(c["csv"].as_str().unwrap())).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,probability"));
        let points = c["points"].as_array().unwrap();
        for ((p, line), q) in points.iter().zip(lines).zip(&e.points) {
            let (cx, cp) = line.split_once(',').unwrap();
            assert_eq!(f(&p["x"]).to_bits(), q.x.to_bits());
            assert_eq!(f(&p["probability"]).to_bits(), q.probability.to_bits(), "{} at {}", e.name(), q.x);
            assert_eq!(cx.parse::<f64>().unwrap().to_bits(), q.x.to_bits());
            assert_eq!(cp.parse::<f64>().unwrap().to_bits(), q.probability.to_bits());
        }
    }
}

#[test]
fn worst_case_dominates_reference() {
    let dir = TempDir::new().unwrap();
    let data = pareto_csv(dir.path());
    let report = json(&run(&[
        "bounds", "--input", data.to_str().unwrap(), "--divergence", "kl", "--divergence", "hellinger:auto",
        "--divergence", "triangle", "--divergence", "js", "--delta", "w=auto,f=0.02",
    ]));
    let sets = report["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 5);
    for set in sets {
        for row in set["rows"].as_array().unwrap() {
            assert!(f(&row["preasymptotic"]) >= f(&row["reference"]), "{set}");
        }
    }
}

#[test]
fn zero_radius_reproduces_reference() {
    let dir = TempDir::new().unwrap();
    let data = pareto_csv(dir.path());
    let report = json(&run(&[
        "bounds", "--input", data.to_str().unwrap(), "--divergence", "kl", "--divergence", "hellinger:3",
        "--delta", "0", "--grid", "5:300:25:log",
    ]));
    for set in report["sets"].as_array().unwrap() {
        for row in set["rows"].as_array().unwrap() {
            let (p, r) = (f(&row["preasymptotic"]), f(&row["reference"]));
            assert!((p - r).abs() <= 1e-12 * r, "{} {p} vs {r}", set["ambiguity"]);
        }
    }
}

#[test]
fn wasserstein_beyond_tail_index_is_reported_unavailable() {
    let dir = TempDir::new().unwrap();
    let data = pareto_csv(dir.path());
    let report = json(&run(&["bounds", "--input", data.to_str().unwrap(), "--s", "3", "--grid", "5:100:10:log"]));
    let reasons: Vec<&str> = report["curves"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["unavailable"].as_str())
        .collect();
    assert!(reasons.iter().any(|r| r.contains("tail index")), "{reasons:?}");
}

#[test]
fn oracle_check_passes() {
    let report = json(&run(&["oracle-check", "--grid-size", "20000", "--atoms", "4000"]));
    for r in report["checks"]["results"].as_array().unwrap() {
        assert_eq!(r["pass"], true, "{r}");
    }
}
