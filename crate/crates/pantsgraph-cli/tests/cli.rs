//! End-to-end checks of the command-line interface.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pantsgraph"))
        .args(args)
        .env_remove("PANTSGRAPH_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn ball_reports_the_pinned_sizes() {
    let v = json_of(&run(&[
        "ball",
        "--model",
        "n3",
        "--base",
        "V3:0/1,1/1,1/2",
        "--radius",
        "1",
    ]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 7);

    let v = json_of(&run(&[
        "ball", "--model", "fan", "--base", "centre", "--radius", "1", "--width", "4",
    ]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);

    let v = json_of(&run(&["ball", "--model", "n12", "--radius", "3"]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn ball_emits_dot_when_asked() {
    let out = run(&["ball", "--model", "n12", "--radius", "1", "--format", "dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph"), "unexpected DOT: {text}");
}

#[test]
fn census_finds_no_violations() {
    let v = json_of(&run(&[
        "census", "--model", "n3", "--radius", "2", "--max-len", "3",
    ]));
    assert_eq!(v["unclassifiable_triangles"], 0);
    assert!(v["farey_triangles"].as_u64().unwrap() > 0);
    assert!(v["fan_triangles"].as_u64().unwrap() > 0);
}

#[test]
fn classifier_agreement_is_total() {
    let v = json_of(&run(&["classify", "--model", "n3", "--radius", "2"]));
    assert_eq!(v["agreement_percent"], 100);
    assert!(v["interior_edges"].as_u64().unwrap() > 0);
}

#[test]
fn signatures_match_the_three_models() {
    for (model, g, b) in [("n3", 3, 0), ("fan", 2, 1), ("n12", 1, 2)] {
        let v = json_of(&run(&["signature", "--model", model]));
        assert_eq!(v["g"], g, "genus of {model}");
        assert_eq!(v["b"], b, "boundary count of {model}");
    }
}

#[test]
fn phi_applies_the_shear() {
    let v = json_of(&run(&["phi", "--word", "T", "--curve", "2s:0/1"]));
    assert_eq!(v["image"], "2s:1/1");
    let v = json_of(&run(&["phi", "--word", "", "--curve", "1s:3/5"]));
    assert_eq!(v["image"], "1s:3/5");
}

#[test]
fn contract_loop_is_deterministic() {
    let a = run(&["contract-loop", "--seed", "7", "--length", "9"]);
    let b = run(&["contract-loop", "--seed", "7", "--length", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["moves"].as_u64().unwrap() > 0);
}

#[test]
fn fixtures_report_their_predicates() {
    let v = json_of(&run(&["fixtures"]));
    let rows = v["fixtures"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let by_name = |name: &str| {
        rows.iter()
            .find(|r| r["name"] == name)
            .unwrap_or_else(|| panic!("missing fixture {name}"))
            .clone()
    };
    assert_eq!(by_name("quad_2tight")["two_tight"], true);
    assert_eq!(by_name("pentagon_n4_not2tight")["two_tight"], false);
    assert_eq!(by_name("hexagon_n13")["tame"], true);
    assert_eq!(by_name("heptagon_n22")["standard_heptagon"], true);
    assert_eq!(by_name("heptagon_n22_quad")["standard_heptagon"], false);
}

#[test]
fn bad_inputs_exit_nonzero() {
    assert!(!run(&["ball", "--model", "n3", "--base", "R5"]).status.success());
    assert!(!run(&["phi", "--word", "Q", "--curve", "a0"]).status.success());
    assert!(!run(&["phi", "--word", "T", "--curve", "zz"]).status.success());
    assert!(!run(&["signature", "--model", "n3", "--radius", "0"]).status.success());
}
