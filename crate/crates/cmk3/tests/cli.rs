use std::io::Write;
use std::process::Command;

use cmk3::{run, Outcome};
use serde_json::Value;

fn call(args: &[&str]) -> Outcome {
    let argv = std::iter::once("cmk3").chain(args.iter().copied());
    run(argv.map(std::ffi::OsString::from))
}

fn answer(args: &[&str]) -> (i32, Value) {
    let out = call(args);
    let text = if out.stdout.is_empty() { &out.stderr } else { &out.stdout };
    let v = serde_json::from_str(text).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
    (out.code, v)
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cmk3"));
    c.env_remove("CMK3_SEARCH_BOUND").env_remove("CMK3_CATALOG");
    c
}

#[test]
fn k3_exists_conductor_51_has_no_surface() {
    let (code, v) = answer(&["k3-exists", "--conductor", "51", "--subgroup", "16"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "none");
    assert_eq!(v["reason"], "ramified prime 3 with f=8 > 6");
}

#[test]
fn k3_exists_cyclotomic() {
    let (code, v) = answer(&["k3-exists", "--cyclotomic", "44"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "infinitely_many");
}

#[test]
fn craig_lattice_invariants() {
    let (code, v) = answer(&["lattice", "--craig", "--p", "7", "--a", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["det"], "343");
    assert_eq!(v["signature"], serde_json::json!([2, 4]));
    assert_eq!(v["length"], 3);
}

#[test]
fn witt_comparison_sets_exit_code() {
    let (code, v) = answer(&["witt", "--craig", "--p", "7", "--a", "1", "--against", "7,1,-1"]);
    assert_eq!((code, &v["equal"]), (0, &Value::Bool(true)));
    let (code, v) = answer(&["witt", "--craig", "--p", "7", "--a", "1", "--against", "7,1,1"]);
    assert_eq!((code, &v["equal"]), (1, &Value::Bool(false)));
}

#[test]
fn picard_verdicts() {
    let (code, v) = answer(&["picard", "--cyclotomic", "44", "--N", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["picard"], "U(1)");
    assert_eq!(v["note"], "Kondo");
    let (code, v) = answer(&["picard", "--cyclotomic", "44", "--N", "43"]);
    assert_eq!(code, 1);
    assert_eq!(v["picard"], "not_realizable");
    let (code, v) = answer(&["picard", "--cyclotomic", "25", "--det", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["picard"], "q_I");
    assert_eq!(v["gram"], serde_json::json!([["2", "1"], ["1", "-2"]]));
}

#[test]
fn disc_check_exit_codes() {
    let (code, v) = answer(&["disc-enumerate", "--cyclotomic", "7", "--check", "7:0^1"]);
    assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)));
    let (code, v) = answer(&["disc-enumerate", "--cyclotomic", "7", "--check", "7:0^2"]);
    assert_eq!((code, &v["pass"]), (1, &Value::Bool(false)));
    let failed: Vec<&Value> = v["reason"]["children"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["rule"], "condition (iv)");
}

#[test]
fn disc_enumerate_lists_sorted_ideals() {
    let (code, v) = answer(&["disc-enumerate", "--cyclotomic", "7", "--norm-bound", "2000"]);
    assert_eq!(code, 0);
    let norms: Vec<u64> = v["ideals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["norm"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!(!norms.is_empty());
    assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(v["count"], norms.len());
}

#[test]
fn surface_twisted_by_thirteen() {
    let (code, v) = answer(&["surface", "--p", "7", "--a", "1", "--j", "13:0"]);
    assert_eq!(code, 0);
    assert_eq!(v["disc_module"]["norm"], "1183");
    assert_eq!(v["embedding"]["uniquely_embeds"], true);
    assert_eq!(v["root_free"], true);
    assert_eq!(v["glued"]["signature"], serde_json::json!([3, 19]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["field"][..],
        &["field", "--cyclotomic", "7", "--conductor", "7"][..],
        &["lattice", "--gram", "not json"][..],
        &["surface", "--p", "7", "--j", "13"][..],
        &["witt", "--craig", "--p", "7", "--against", "7,1"][..],
        &["field", "--cyclotomic", "7", "--search-bound", "0"][..],
    ] {
        let out = call(args);
        assert_eq!(out.code, 2, "{args:?}: {out:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invalid_input_is_a_json_error() {
    let (code, v) = answer(&["field", "--cyclotomic", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "invalid_input");
    assert!(v["reason"].is_string());
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["surface", "--p", "7", "--a", "3"][..],
        &["disc-enumerate", "--cyclotomic", "9", "--sig", "2,4", "--norm-bound", "500"][..],
        &["catalog", "show"][..],
    ] {
        let first = call(args);
        let second = call(args);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn human_rendering() {
    let out = call(&["--human", "field", "--cyclotomic", "7"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().any(|l| l == "degree: 6"));
    assert!(serde_json::from_str::<Value>(&out.stdout).is_err());
}

#[test]
fn pretty_output_parses_to_the_same_value() {
    let compact = call(&["lattice", "--standard", "e8"]);
    let pretty = call(&["--pretty", "lattice", "--standard", "e8"]);
    assert_ne!(compact.stdout, pretty.stdout);
    let a: Value = serde_json::from_str(&compact.stdout).unwrap();
    let b: Value = serde_json::from_str(&pretty.stdout).unwrap();
    assert_eq!(a, b);
    assert_eq!(a["det"], "1");
}

#[test]
fn search_bound_from_environment() {
    let ok = binary()
        .args(["surface", "--p", "7", "--j", "13:0"])
        .env("CMK3_SEARCH_BOUND", "2,3")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = binary()
        .args(["field", "--cyclotomic", "7"])
        .env("CMK3_SEARCH_BOUND", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("search bound"));
}

#[test]
fn builtin_catalog_verifies() {
    let (code, v) = answer(&["catalog", "verify"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["pass"], true);
}

#[test]
fn tampered_catalog_is_reported() {
    let (_, mut cat) = answer(&["catalog", "show"]);
    let entry = cat["entries"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["id"] == "X3(7)")
        .unwrap();
    entry["expected"]["det_T"] = Value::String("344".into());
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{cat}").unwrap();
    let path = file.path().to_str().unwrap();
    let (code, v) = answer(&["catalog", "verify", "--catalog", path]);
    assert_eq!(code, 1);
    let m = &v["report"]["mismatches"];
    assert_eq!(m.as_array().unwrap().len(), 1);
    assert_eq!(m[0]["id"], "X3(7)");
    assert_eq!(m[0]["invariant"], "det_T");
    assert_eq!(m[0]["got"], "343");
}

#[test]
fn catalog_from_environment() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{}", r#"{"version":1,"entries":[{"id":"E","kind":"existence","conductor":51,"subgroup":[16],"expected":{"verdict":"none"}}]}"#).unwrap();
    let out = binary().args(["catalog", "verify"]).env("CMK3_CATALOG", file.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["checked"], 1);
}

#[test]
fn missing_or_malformed_catalog() {
    let (code, v) = answer(&["catalog", "verify", "--catalog", "/nonexistent/catalog.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "io");
    assert!(v["reason"].as_str().unwrap().contains("/nonexistent/catalog.json"));

    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"version":99,"entries":[]}}"#).unwrap();
    let (code, v) = answer(&["catalog", "verify", "--catalog", file.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(v["reason"].as_str().unwrap().contains("version 99"));
}

#[test]
fn regenerate_reproduces_builtin_expectations() {
    let (_, shown) = answer(&["catalog", "show"]);
    let (code, regen) = answer(&["catalog", "regenerate"]);
    assert_eq!(code, 0);
    for (a, b) in shown["entries"].as_array().unwrap().iter().zip(regen["entries"].as_array().unwrap()) {
        for (k, want) in a["expected"].as_object().unwrap() {
            assert_eq!(&b["expected"][k], want, "{} {k}", a["id"]);
        }
    }
}
