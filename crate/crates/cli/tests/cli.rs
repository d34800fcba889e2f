use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use schurmult_cli::report::ExperimentReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_schurmult"));
    c.env_remove("SCHURMULT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn snorm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let i3 = write(dir.path(), "i3", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let o = run(&["snorm", &i3, "-p", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");

    let ones = write(dir.path(), "ones", "4 4\n1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1\n");
    assert_eq!(stdout(&run(&["snorm", &ones, "-p", "0.5"])).trim(), "4");

    let o = run(&["snorm", "--generate", "identity:4", "--q", "1", "--r", "0.5"]);
    let expected: f64 = (0..4).map(|j| (1.0 + j as f64).powf(-0.5)).sum::<f64>().powi(2);
    let printed: f64 = stdout(&o).trim().parse().unwrap();
    assert!((printed - expected).abs() <= 1e-11 * expected);
    let digits = stdout(&o).trim().replace('.', "");
    assert_eq!(digits.trim_start_matches('0').len(), 12);
}

#[test]
fn snorm_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad", "2 2\n1 2 3\n");
    assert_eq!(run(&["snorm", &bad, "-p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["snorm", "/definitely/missing", "-p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["snorm", "--generate", "identity:2"]).status.code(), Some(2));
    assert_eq!(run(&["snorm", "--generate", "identity:2", "-p", "0"]).status.code(), Some(2));
}

#[test]
fn mult_examples() {
    let dir = tempfile::tempdir().unwrap();
    let diag = write(dir.path(), "d", "4 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    let o = run(&["mult", &diag, "-p", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["lower"].as_f64().unwrap() - 4.0).abs() <= 1e-9);
    assert!((v["upper"].as_f64().unwrap() - 4.0).abs() <= 1e-12);
    assert!(v["lower_witness"].is_array());
    assert_eq!(v["candidates"].as_array().unwrap().len(), 0);

    let o = run(&["mult", "--generate", "flat-unitary:4", "-p", "0.5", "--certificates"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["lower"].as_f64().unwrap() >= 8.0 - 1e-6);
    assert!(!v["candidates"].as_array().unwrap().is_empty());

    let o = run(&["mult", "--generate", "ones:3", "-p", "0.5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["lower"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!((v["upper"].as_f64().unwrap() - 1.0).abs() <= 1e-12);

    assert_eq!(run(&["mult", "--generate", "ones:3", "-p", "1.5"]).status.code(), Some(2));
}

#[test]
fn mult_is_reproducible_and_seed_env_applies() {
    let args = ["mult", "--generate", "direct-sum:1,3", "-p", "0.5", "--restarts", "4"];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    let explicit = stdout(&bin().args(args).arg("--seed").arg("9").output().unwrap());
    let from_env = stdout(&bin().args(args).env("SCHURMULT_SEED", "9").output().unwrap());
    assert_eq!(explicit, from_env);
    let bad = bin().args(args).env("SCHURMULT_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn experiment_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["experiment", "yq-sharpness", "p=0.5", "q=2", "sizes=2,4,8,16", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("yq-sharpness.csv")).unwrap();
    assert!(csv.starts_with("check,relation,expected,observed,tolerance,pass\n"));
    let report: ExperimentReport =
        serde_json::from_str(&fs::read_to_string(dir.path().join("yq-sharpness.json")).unwrap()).unwrap();
    let slope = report.rows.iter().find(|r| r.check == "slope").unwrap();
    assert!((slope.observed - 1.0).abs() <= 0.05);
    assert_eq!(report.parameters["sizes"], "2,4,8,16");

    let o = run(&["experiment", "tensor-separation", "p=0.5", "m=2", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let report: ExperimentReport =
        serde_json::from_str(&fs::read_to_string(dir.path().join("tensor-separation.json")).unwrap()).unwrap();
    let lower = report.rows.iter().find(|r| r.check == "tensor-lower-bound").unwrap();
    let mult = report.rows.iter().find(|r| r.check == "multiplier-norm").unwrap();
    assert!((lower.observed - 1.0).abs() <= 1e-12 && (mult.observed - 2.0).abs() <= 1e-12);

    let o = run(&["experiment", "doi-reduction", "dim=5", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let report: ExperimentReport =
        serde_json::from_str(&fs::read_to_string(dir.path().join("doi-reduction.json")).unwrap()).unwrap();
    assert!(report.rows.iter().find(|r| r.check == "schur-reduction").unwrap().observed <= 1e-14);
}

#[test]
fn reports_are_byte_identical() {
    for name in ["cb-check", "wp-separation", "doi-reduction"] {
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for d in [&d1, &d2] {
            let o = run(&["experiment", name, "--seed", "5", "--out", d.path().to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{name}");
        }
        for ext in ["csv", "json"] {
            let a = fs::read(d1.path().join(format!("{name}.{ext}"))).unwrap();
            let b = fs::read(d2.path().join(format!("{name}.{ext}"))).unwrap();
            assert_eq!(a, b, "{name}.{ext}");
        }
    }
}

#[test]
fn experiment_failures_and_usage_errors() {
    // Blocks that violate the spacing make the certificate rows fail.
    let o = run(&["experiment", "tensor-separation", "m=2", "blocks=1,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL spacing-1"));
    assert_eq!(run(&["experiment", "no-such-thing"]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "yq-sharpness", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "yq-sharpness", "sizes"]).status.code(), Some(2));
    assert_eq!(run(&["experiment", "tensor-separation", "m=3"]).status.code(), Some(2));
}
