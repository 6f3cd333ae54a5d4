use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn slo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = slo(args);
    let code = out.status.code().expect("exit code");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, doc)
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.display().to_string()
}

fn without_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn fourth_root_for_two() {
    let (code, doc) = report(&["fourth-root", "--p", "2", "--precision", "32"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["r"], 31);
    assert_eq!(doc["result"]["certificate"], "0");
    let q: u64 = doc["result"]["q"].as_str().unwrap().parse().unwrap();
    assert_eq!((q as u128).pow(4) % (1 << 32), (1u128 << 32) - 31);
    assert_eq!(q % 8, 1);
}

#[test]
fn identity_decomposes_to_empty_word() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "I.json",
        &json!({"ring": {"char": "zero", "p": 5, "precision": 4}, "matrix": [["1", "0"], ["0", "1"]]}),
    );
    let (code, doc) = report(&["decompose", "--input", &input]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["word"], json!([]));
    assert_eq!(doc["result"]["round_trip"], true);
}

#[test]
fn decompose_with_ring_from_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.json", &json!([["2", "3"], ["1", "2"]]));
    let (code, doc) = report(&["decompose", "--input", &input, "--p", "2", "--precision", "8"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["round_trip"], true);
    assert!(doc["result"]["length"].as_u64().unwrap() <= 13);

    let sl3 = write(dir.path(), "m3.json", &json!([["1", "2", "0"], ["0", "1", "0"], ["3", "6", "1"]]));
    let (code, doc) = report(&["decompose", "--input", &sl3, "--p", "5", "--precision", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["n"], 3);

    let singular = write(dir.path(), "s.json", &json!([["2", "0"], ["0", "2"]]));
    let (code, _) = report(&["decompose", "--input", &singular, "--p", "2", "--precision", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn abelianization_of_sl2_mod_3() {
    let (code, doc) = report(&["congruence", "abelianization", "--n", "2", "--p", "3", "--m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["invariant_factors"], json!([3]));
    assert_eq!(doc["provenance"][0]["oracle"], "naive-closure-commutator");
    assert_eq!(doc["provenance"][0]["matches"], true);
}

#[test]
fn congruence_orders_and_indices() {
    let (code, doc) = report(&["congruence", "order", "--p", "2", "--m", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["order"], 384);

    let (code, doc) = report(&["congruence", "el-index", "--p", "3", "--k", "1", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["index"], 72);
    assert_eq!(doc["provenance"][0]["pinned"], 72);

    let (code, doc) = report(&["congruence", "el-index", "--n", "3", "--p", "2", "--k", "0", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["index"], 1);

    let (code, doc) = report(&["congruence", "index", "--p", "3", "--k", "1", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["kernel_index"], 24);
}

#[test]
fn element_cap_is_reported_not_truncated() {
    let (code, _) = report(&["congruence", "order", "--p", "5", "--m", "2", "--element-cap", "100"]);
    assert_eq!(code, 2);
    let err = String::from_utf8(slo(&["congruence", "order", "--p", "5", "--m", "2", "--element-cap", "100"]).stderr)
        .unwrap();
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn nontrivial_rep_for_three() {
    let (code, doc) = report(&["nontrivial-rep", "--p", "3", "--dim", "3"]);
    assert_eq!(code, 0);
    let rep = &doc["result"]["representation"];
    assert_eq!(rep["cyclic_order"], 3);
    assert_eq!(rep["target_dim"], 3);
    assert_eq!(doc["result"]["relators_killed"], 200);
    let (code, _) = report(&["congruence", "nontrivial-rep", "--p", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn hensel_lifts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "f.json", &json!({"poly": ["-2", "0", "1"], "a": "3"}));
    let (code, doc) = report(&["hensel", "--input", &good, "--p", "7", "--precision", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["root"], "4567");

    let bad = write(dir.path(), "g.json", &json!({"poly": ["-2", "0", "1"], "a": "1"}));
    let (code, _) = report(&["hensel", "--input", &bad, "--p", "7", "--precision", "5"]);
    assert_eq!(code, 2);

    let poly = write(dir.path(), "h.json", &json!({"poly": [[1], [0], [1]], "a": [1, 1]}));
    let (code, _) = report(&["hensel", "--input", &poly, "--p", "3", "--precision", "4", "--char", "positive"]);
    assert_eq!(code, 2);
}

#[test]
fn ring_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let inv = write(dir.path(), "inv.json", &json!({"op": "inv", "a": "3"}));
    let (code, doc) = report(&["ring", "--p", "2", "--precision", "4", "--input", &inv]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["value"], "11");

    let level = write(dir.path(), "lvl.json", &json!({"op": "level", "gens": [[0, 0, 1]]}));
    let (code, doc) = report(&["ring", "--p", "3", "--precision", "6", "--char", "positive", "--input", &level]);
    assert_eq!(code, 2, "{doc}");
    let level = write(dir.path(), "lvl2.json", &json!({"op": "level", "gens": ["9"]}));
    let (code, doc) = report(&["ring", "--p", "3", "--precision", "6", "--input", &level]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["value"], 2);

    let (code, doc) = report(&["ring", "--p", "3", "--precision", "4", "--char", "positive"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["cardinality"], "81");
    assert_eq!(doc["result"]["uniformizer"], json!([0, 1, 0, 0]));
}

#[test]
fn el_diagonal_and_identities() {
    let (code, doc) = report(&["el-diagonal", "--p", "3", "--precision", "10", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["holds"], true);
    assert_eq!(doc["result"]["word"].as_array().unwrap().len(), 4);

    let (code, _) = report(&["el-diagonal", "--p", "3", "--precision", "4", "--k", "2"]);
    assert_eq!(code, 2);

    for args in [
        vec!["verify-identities", "--p", "5", "--precision", "8"],
        vec!["verify-identities", "--p", "2", "--precision", "12", "--char", "positive", "--n", "4"],
    ] {
        let (code, doc) = report(&args);
        assert_eq!(code, 0, "{doc}");
        let fams = doc["result"]["families"].as_object().unwrap();
        assert!(fams.values().all(|f| f["failed"] == 0));
    }
}

#[test]
fn flags_jh_and_invariance() {
    let dir = tempfile::tempdir().unwrap();
    let heis = json!([["1", "0", "1"], ["0", "1", "0"], ["0", "0", "1"]]);
    let input = write(dir.path(), "jh.json", &json!({"matrices": [heis]}));
    let (code, doc) = report(&["flags", "jh", "--input", &input]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["dims"], json!([0, 2, 3]));
    assert_eq!(doc["result"]["verification"]["maximal"], true);

    let e12 = json!([["1", "5", "0"], ["0", "1", "0"], ["0", "0", "1"]]);
    let flag = doc["result"]["flag"].clone();
    let ok = write(dir.path(), "inv.json", &json!({"matrices": [e12], "flag": flag}));
    let (code, doc) = report(&["flags", "check-invariance", "--input", &ok]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["invariant"], true);

    // E31 moves e1 out of span(e1, e2)
    let e31 = json!([["1", "0", "0"], ["0", "1", "0"], ["1/2", "0", "1"]]);
    let bad = write(dir.path(), "bad.json", &json!({"matrices": [e31], "flag": flag}));
    let (code, doc) = report(&["flags", "check-invariance", "--input", &bad]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["invariant"], false);
    assert_eq!(doc["ok"], false);

    let not_unipotent = write(dir.path(), "nu.json", &json!([[["2", "0"], ["0", "1"]]]));
    let (code, _) = report(&["flags", "jh", "--input", &not_unipotent]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(slo(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(slo(&["fourth-root", "--p", "4", "--precision", "8"]).status.code(), Some(2));
    assert_eq!(slo(&["fourth-root", "--precision", "8"]).status.code(), Some(2));
    assert_eq!(slo(&["decompose"]).status.code(), Some(2));
    assert_eq!(slo(&["congruence", "order", "--p", "2"]).status.code(), Some(2));
    assert_eq!(slo(&["verify-paper", "--only", "12"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-identities", "--p", "7", "--precision", "6", "--seed", "11"];
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(without_time(a), without_time(b));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let code = slo(&["congruence", "abelianization", "--p", "2", "--m", "2", "--out", out.to_str().unwrap()])
        .status
        .code();
    assert_eq!(code, Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(written["result"]["invariant_factors"], json!([4]));
}

#[test]
fn verify_paper_subset() {
    let (code, doc) = report(&["verify-paper", "--only", "1,2,8"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["passed"], 3);
    let fixtures: Vec<_> = doc["provenance"].as_array().unwrap().iter().map(|p| p["fixture"].clone()).collect();
    assert_eq!(fixtures.len(), 4);
}

#[test]
fn regen_golden_reproduces_pinned_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = report(&["verify-paper", "--regen-golden", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    for f in doc["result"]["fixtures"].as_array().unwrap() {
        assert_eq!(f["changed"], false, "{f}");
    }
    let regenerated = std::fs::read_to_string(dir.path().join("el_index.json")).unwrap();
    let pinned = std::fs::read_to_string(slo_core::golden::source_dir().join("el_index.json")).unwrap();
    assert_eq!(regenerated, pinned);
}
