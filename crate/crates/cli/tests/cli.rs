use std::path::PathBuf;
use std::process::{Command, Output};

use nrelcat::msset::TruncatedMSSet;
use nrelcat::relcat::NRelCategory;

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrelcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&["validate", "--input", &data("nrel/2_v1_x_1_w_n_1.json")]), 0);
    for name in [
        "1_with_discrete_v1_n_1_axiom_i_fails",
        "square_a_c_in_v1_and_b_d_in_v2_n_2_axiom_ii_fails",
    ] {
        let path = data(&format!("counterexamples/{name}.json"));
        assert_eq!(code(&["validate", "--input", &path]), 1, "{name}");
    }
}

#[test]
fn budget_exhaustion_is_not_failure() {
    let path = data("nrel/involution_n_1.json");
    let tight = ["--budget-len", "1", "--budget-classes", "5"];
    assert_eq!(code(&[&["counit", "--input", &path][..], &tight].concat()), 3);
    assert_eq!(code(&[&["validate", "--input", &path][..], &tight].concat()), 3);
    assert_eq!(code(&["counit", "--input", &path]), 0);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["nerve"]), 2);
    assert_eq!(code(&["nerve", "--input", "/nonexistent.json"]), 2);
    assert_eq!(code(&["nerve", "--trunc", "0", "--input", &data("nrel/1_w_n_1.json")]), 2);
    assert_eq!(code(&["suite", "--corpus", "elsewhere"]), 2);
    assert_eq!(code(&["canonical-iso", "--index", "0,0"]), 2);
    // a multisimplicial set where a category is expected
    assert_eq!(code(&["validate", "--input", &data("msset/delta_1_1.json")]), 2);
}

#[test]
fn nerve_json_round_trips() {
    let text = stdout(&["nerve", "--input", &data("nrel/1_v1_x_1_w_n_1.json"), "--trunc", "2"]);
    let x = TruncatedMSSet::from_json(&text).unwrap();
    assert_eq!(x.bound(), 2);
    assert_eq!(x.to_json().trim(), text.trim());
}

#[test]
fn unit_and_counit_on_corpus_members() {
    assert_eq!(code(&["counit", "--input", &data("nrel/1_v2_x_1_v1_n_2.json"), "--budget-len", "6"]), 0);
    assert_eq!(code(&["unit", "--input", &data("msset/delta_1_0.json")]), 0);
    // N K Δ[1,1] has more cells than Δ[1,1]
    assert_eq!(code(&["unit", "--input", &data("msset/delta_1_1.json")]), 1);
    assert_eq!(code(&["unit", "--input", &data("msset/sk1_delta_0_2.json")]), 1);
}

#[test]
fn enrich_and_restrict() {
    let dir = tempdir();
    let embedded = dir.join("embedded.json");
    let src = data("nrel/1_v1_x_1_w_n_1.json");
    assert_eq!(code(&["enrich", "--input", &src, "--output", embedded.to_str().unwrap()]), 0);
    let d = NRelCategory::from_json(&std::fs::read_to_string(&embedded).unwrap()).unwrap();
    assert_eq!(d.n(), 2);
    let back = stdout(&["enrich", "--restrict", "--input", embedded.to_str().unwrap()]);
    let c = NRelCategory::from_json(&back).unwrap();
    let orig = NRelCategory::from_json(&std::fs::read_to_string(&src).unwrap()).unwrap();
    assert_eq!(c.to_json(), orig.to_json());

    let g = stdout(&[
        "grothendieck",
        "--input",
        embedded.to_str().unwrap(),
        "--from",
        "(0,0)",
        "--to",
        "(1,1)",
        "--max-len",
        "2",
    ]);
    let gr = NRelCategory::from_json(&g).unwrap();
    assert_eq!((gr.ambient().object_count(), gr.ambient().arrow_count()), (7, 51));
}

#[test]
fn zigzag_composition() {
    let dir = tempdir();
    let embedded = dir.join("embedded.json");
    assert_eq!(
        code(&["enrich", "--input", &data("nrel/1_w_n_1.json"), "--output", embedded.to_str().unwrap()]),
        0
    );
    let z1 = dir.join("z1.json");
    let z2 = dir.join("z2.json");
    std::fs::write(&z1, r#"{"type":{"plus":[1],"minus":[]},"from":0,"to":1,"arrows":[1]}"#).unwrap();
    std::fs::write(&z2, r#"{"type":{"plus":[],"minus":[1]},"from":1,"to":0,"arrows":[1]}"#).unwrap();
    let out = stdout(&[
        "zigzag",
        "--input",
        embedded.to_str().unwrap(),
        "--input",
        z1.to_str().unwrap(),
        "--input",
        z2.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["type"]["plus"], serde_json::json!([1]));
    assert_eq!(v["type"]["minus"], serde_json::json!([2]));
    assert_eq!(v["arrows"], serde_json::json!([1, 1]));
    // the same composite is rejected when the backward arrow is not allowed
    let code = code(&[
        "zigzag",
        "--input",
        &data("nrel/1_v1_n_1.json"),
        "--input",
        z1.to_str().unwrap(),
        "--input",
        z2.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn divisions_and_homotopies() {
    assert_eq!(code(&["division", "--input", &data("nrel/2_v1_n_2.json")]), 0);
    assert_eq!(code(&["homotopy", "--p", "1", "--tag", "w", "--nerve"]), 0);
    assert_eq!(code(&["colim-check", "--input", &data("msset/sk1_delta_0_2.json")]), 0);
    // the structures of Δ_rel Δ[0,0] and of its division product differ
    let out = run(&["--format", "human", "canonical-iso", "--n", "1", "--index", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ambient isomorphism: yes"), "{text}");
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nrelcat-cli-{}-{:?}", std::process::id(), std::thread::current().id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
