use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitary-euler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn cp3_volume() {
    let v = json(&["volume", "--coset", "CP(3)"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["exact"], "pi^3/6");
    assert!((v["float"].as_f64().unwrap() - PI.powi(3) / 6.0).abs() < 1e-12);
}

#[test]
fn coset_volumes() {
    assert_eq!(json(&["volume", "--coset", "SU(4)/SU(2)xSU(2)"])["exact"], "pi^5/(6*sqrt(2))");
    assert_eq!(json(&["volume", "--coset", "SU(9)/U(4)xU(4)"])["exact"], "pi^24/58525286400000");
    assert_eq!(json(&["volume", "--coset", "Gr(4,1)"])["exact"], "pi^3/6");
    let v = json(&["volume", "--coset", "SU(4)/U(2)xU1[SU(3)]"]);
    assert_eq!(v["exact"], "pi^5/(9*sqrt(2))");
}

#[test]
fn u1_volume_is_a_constraint_error() {
    let out = run(&["volume", "--coset", "U(1)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("N >= 2"), "{}", stderr(&out));
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(run(&["volume", "--coset", "SU(4"]).status.code(), Some(2));
    assert_eq!(run(&["volume", "--coset", "SU(4)", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--what", "su", "--n", "2", "--count", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["integrate", "--kernel", "haar-su:3", "--method", "mc", "--samples", "10000"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["integrate", "--kernel", "nope:3", "--method", "factorized"]).status.code(),
        Some(2)
    );
}

#[test]
fn element_from_plain_array() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let angles: Vec<f64> = (1..=15).map(|i| 0.1 * i as f64).collect();
    write!(f, "{}", serde_json::to_string(&angles).unwrap()).unwrap();
    let v = json(&["element", "--group", "SU(4)", "--angles", f.path().to_str().unwrap()]);
    assert_eq!(v["n"], 4);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 4);
    assert!(v["unitarity_error"].as_f64().unwrap() < 1e-12);
    assert!(v["det_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn element_from_angle_vector() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let doc = serde_json::json!({
        "n": 2,
        "convention": "covering",
        "angles": [
            {"i": 1, "value": 0.3, "lo": 0.0, "hi": PI},
            {"i": 2, "value": 0.4, "lo": 0.0, "hi": PI / 2.0},
            {"i": 3, "value": 9.0, "lo": 0.0, "hi": PI}
        ],
        "beta": {"value": 0.2, "lo": 0.0, "hi": PI}
    });
    write!(f, "{doc}").unwrap();
    let v = json(&["element", "--group", "U(2)", "--angles", f.path().to_str().unwrap()]);
    assert_eq!(v["out_of_range"], serde_json::json!([3]));
    assert!(v["unitarity_error"].as_f64().unwrap() < 1e-12);
    let wrong = run(&["element", "--group", "SU(3)", "--angles", f.path().to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn element_rejects_missing_and_invalid_files() {
    assert_eq!(run(&["element", "--group", "SU(3)", "--angles", "/nonexistent.json"]).status.code(), Some(2));
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "not json").unwrap();
    let path = f.path().to_str().unwrap();
    assert_eq!(run(&["element", "--group", "SU(3)", "--angles", path]).status.code(), Some(2));
    assert_eq!(run(&["element", "--group", "SO(3)", "--angles", path]).status.code(), Some(2));
}

#[test]
fn kernel_factor_list() {
    let v = json(&["kernel", "--context", "pure-state", "--n", "3"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["dims"], 6);
    let forms: Vec<&str> = v["factors"].as_array().unwrap().iter().map(|f| f["form"].as_str().unwrap()).collect();
    assert_eq!(forms, ["sin2a", "cospow-sin", "cos-sinpow"]);
    let q = json(&["kernel", "--context", "pure-state", "--n", "3", "--ranges", "quotient"]);
    assert_eq!(q["xi"], 4.0);
}

#[test]
fn integrate_factorized_and_mc() {
    let v = json(&["integrate", "--kernel", "pure-state:3", "--method", "factorized"]);
    assert_eq!(v["method"], "factorized");
    assert!((v["value"].as_f64().unwrap() / (PI.powi(3) / 6.0) - 1.0).abs() < 1e-12);
    let q = json(&["integrate", "--kernel", "truncated-haar:3", "--method", "factorized", "--ranges", "quotient"]);
    assert!((q["value"].as_f64().unwrap() / (PI.powi(3) / 2.0) - 1.0).abs() < 1e-12);
    let args = ["integrate", "--kernel", "haar-su:3", "--method", "mc", "--samples", "200000", "--seed", "11"];
    let mc = json(&args);
    assert_eq!(mc["seed"], 11);
    let (value, se) = (mc["value"].as_f64().unwrap(), mc["abs_error_estimate"].as_f64().unwrap());
    let exact = 3f64.sqrt() * PI.powi(5);
    assert!((value - exact).abs() < 5.0 * se, "{value} +- {se}");
    assert_eq!(json(&args), mc);
}

#[test]
fn sample_json_lines() {
    let out = run(&["sample", "--what", "mixed", "--n", "4", "--count", "5", "--seed", "3", "--s", "2"]);
    assert!(out.status.success());
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["record"], "header");
    assert_eq!(lines[0]["schema"], 1);
    assert_eq!(lines[0]["seed"], 3);
    for rec in &lines[1..] {
        let l: Vec<f64> = rec["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(l[3] >= 0.25 && l[..3].iter().all(|&x| x <= 0.25));
        assert!(rec["defect"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn sample_is_reproducible() {
    let a = run(&["sample", "--what", "su", "--n", "3", "--count", "4", "--seed", "9"]);
    let b = run(&["sample", "--what", "su", "--n", "3", "--count", "4", "--seed", "9"]);
    let c = run(&["sample", "--what", "su", "--n", "3", "--count", "4", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sample_csv_columns() {
    let out = run(&["sample", "--what", "pure", "--n", "3", "--count", "2", "--seed", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sample,field,row,col,re,im");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6 && l.contains(",psi,")));
}

#[test]
fn sample_dimension_errors() {
    let out = run(&["sample", "--what", "su", "--n", "9", "--count", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn fscheck_report() {
    for chart in ["hurwitz", "euler"] {
        let v = json(&["fscheck", "--chart", chart, "--n", "4", "--points", "20", "--seed", "5"]);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["points"], 20);
        assert!(v["max_rel_error"].as_f64().unwrap() < 1e-4);
    }
}

#[test]
fn verify_volumes_suite() {
    let v = json(&["verify", "--suite", "volumes"]);
    assert_eq!(v["pass"], true);
    let ids: Vec<u64> = v["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [1, 8]);
    let pretty = run(&["verify", "--suite", "volumes", "--format", "pretty"]);
    let text = String::from_utf8(pretty.stdout).unwrap();
    assert!(text.contains("[PASS] criterion 1"));
}

#[test]
fn csv_outputs_parse() {
    let out = run(&["volume", "--coset", "SU(4)/SU(2)xSU(2)", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "schema,coset,exact,float");
    assert!(lines[1].starts_with("1,SU(4)/SU(2)xSU(2),pi^5/(6*sqrt(2)),"));
}
