use std::process::{Command, Output};

use hasse_order::modcat;
use hasse_order::verify::{Env, Params};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hasse-order")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, Option<i32>) {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let o = run(&all);
    (serde_json::from_slice(&o.stdout).unwrap_or(Value::Null), o.status.code())
}

#[test]
fn eval_pi_d() {
    let (v, code) = json(&["eval", "x", "--N", "4"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["ord"], "1");
    assert_eq!(v["trd"], "0");
    assert_eq!(v["nrd"], "-3");
    assert_eq!(v["matrix"]["shift"], 0);
    assert_eq!(v["matrix"]["entries"], serde_json::json!([[[0, 0], [3, 0]], [[1, 0], [0, 0]]]));
}

#[test]
fn eval_identity_and_scalar() {
    let (v, _) = json(&["eval", "1", "--d", "3", "--p", "5"]);
    assert_eq!((v["ord"].as_str(), v["trd"].as_str(), v["nrd"].as_str()), (Some("0"), Some("3"), Some("1")));
    let (v, _) = json(&["eval", "(3+x)*(3-x)"]);
    // 6 = π_K · 2 with π_K = 3
    assert_eq!(v["element"], "pK^1 * (2)");
    assert_eq!(v["nrd"], "pK^2 * (4)");
}

#[test]
fn eval_parse_error_has_position() {
    let o = run(&["eval", "2 + th^"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 7"));
}

#[test]
fn verify_default_passes_and_is_deterministic() {
    let (a, code) = json(&["verify", "--seed", "11"]);
    assert_eq!(code, Some(0));
    assert_eq!(a["schema"], "hasse-order-report/1");
    assert_eq!(a["params"]["N"], 8);
    assert_eq!(a["suites"].as_array().unwrap().len(), 10);
    let (b, _) = json(&["verify", "--seed", "11", "--sequential"]);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn injected_fault_exits_one() {
    let (v, code) = json(&["verify", "--suites", "modules", "--inject-fault", "modcat.cycle"]);
    assert_eq!(code, Some(1));
    let failures = v["suites"][0]["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures[0]["got"]["residuals"].is_array());
}

#[test]
fn bad_parameters_exit_two() {
    assert_eq!(run(&["verify", "--d", "4", "--r", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suites", "nope"]).status.code(), Some(2));
}

#[test]
fn dumps() {
    let (v, _) = json(&["dump", "idempotents", "--d", "1"]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    let (v, _) = json(&["dump", "milnor-basis", "--d", "3", "--p", "5"]);
    assert_eq!(v["dimension_over_fp"], 6 * 3);
    let (v, _) = json(&["dump", "witt-laws", "--p", "2"]);
    assert_eq!(v["sum"]["c1"], "a1 + b1 - a0*b0");
    let (v, _) = json(&["dump", "peirce", "--d", "3", "--p", "5", "--r", "2"]);
    let pieces = v.as_array().unwrap();
    assert_eq!(pieces.len(), 9);
    assert_eq!(pieces.iter().filter(|p| p["x_is_iso"] == false).count(), 3);
}

#[test]
fn witt_arithmetic() {
    let (v, code) = json(&["witt", "2,1", "--coeff", "int", "--p", "3", "--N", "4"]);
    assert_eq!(code, Some(0));
    // ghost (2, 2^3 + 3·1) = (2, 11)
    assert_eq!(v["ghost_a"], serde_json::json!(["2", "11"]));
    assert_eq!(v["V(a)"], serde_json::json!(["0", "2", "1"]));
}

#[test]
fn decompose_file() {
    let env = Env::new(Params::default()).unwrap();
    let m = modcat::standard(&env.tensor, 1).sum(&modcat::standard(&env.tensor, 0)).sum(&modcat::standard(&env.tensor, 1));
    let path = std::env::temp_dir().join(format!("hasse-order-module-{}.json", std::process::id()));
    std::fs::write(&path, m.to_json().to_string()).unwrap();
    let (v, code) = json(&["decompose", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, Some(0));
    assert_eq!(v["sorted_labels"], serde_json::json!([0, 1, 1]));
}
