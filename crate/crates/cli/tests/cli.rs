use std::path::PathBuf;
use std::process::{Command, Output};

use ghom_cli::error::{EXIT_BUDGET, EXIT_CLASSES_DIFFER, EXIT_INVALID, EXIT_NOT_FOUND, EXIT_UNDECIDED};
use ghom_cli::Report;
use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn ghom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghom")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> u8 {
    out.status.code().expect("exited") as u8
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Runs with `--json`, checks success and the parser round trip, returns the result payload.
fn report(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.push("--json");
    let out = ghom(&full);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let r: Report = serde_json::from_str(&stdout(&out)).expect("report parses");
    let again: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert!(r.same_payload(&again));
    r
}

#[test]
fn sft_homology_both_methods_on_full_shift() {
    let r = report(&["sft", "homology", "--matrix", &data("full3.json"), "--degree", "0", "--method", "both"]);
    assert_eq!(r.method.as_deref(), Some("both"));
    assert_eq!(r.result["match"], json!(true));
    assert_eq!(r.result["matrix"]["group"], json!("Z/2Z"));
    assert_eq!(r.result["truncation"]["group"], json!("Z/2Z"));
    let r = report(&["sft", "homology", "--matrix", &data("full3.json"), "--degree", "1", "--method", "truncation", "--depth", "6"]);
    assert_eq!(r.result["truncation"]["group"], json!("0"));
    assert!(r.result.get("matrix").is_none());
}

#[test]
fn sft_homology_clopen_class() {
    let r = report(&[
        "sft", "homology", "--matrix", &data("full3.json"), "--degree", "0", "--method", "matrix", "--clopen", &data("cylinder1.json"),
    ]);
    assert_eq!(r.result["matrix"]["class"], json!([1]));
    let out = ghom(&["sft", "homology", "--matrix", &data("full3.json"), "--degree", "1", "--clopen", &data("cylinder1.json")]);
    assert_eq!(code(&out), EXIT_INVALID);
}

#[test]
fn sft_index_and_search() {
    let r = report(&["sft", "index", "--matrix", &data("designated.json"), "--tableau", &data("designated_generator.json")]);
    assert_eq!(r.result["index"], json!([1]));
    let r = report(&["sft", "index", "--matrix", &data("full2.json"), "--tableau", &data("swap2.json")]);
    assert_eq!(r.result["zero"], json!(true));
    let r = report(&["sft", "find-index", "--matrix", &data("designated.json"), "--target", "1"]);
    assert_eq!(r.result["index"], json!([1]));
    assert_eq!(r.result["tableau"]["pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn sft_search_failures_have_their_own_codes() {
    let budget = ghom(&["sft", "find-index", "--matrix", &data("designated.json"), "--target", "1", "--budget", "3"]);
    assert_eq!(code(&budget), EXIT_BUDGET);
    let none = ghom(&[
        "sft", "find-index", "--matrix", &data("designated.json"), "--target", "5", "--max-pairs", "4", "--max-word-len", "2",
    ]);
    assert_eq!(code(&none), EXIT_NOT_FOUND);
}

#[test]
fn af_class_decisions() {
    let r = report(&["af", "class", "--diagram", &data("uhf2.json"), "--clopen", &data("U.json"), "--to", &data("V.json")]);
    assert_eq!(r.result["equal"]["answer"], json!("true"));
    let r = report(&["af", "class", "--diagram", &data("collapse.json"), "--clopen", &data("left.json"), "--to", &data("right.json")]);
    assert_eq!(r.result["equal"], json!({"answer": "true", "level": 2}));
    let out = ghom(&[
        "af", "class", "--diagram", &data("collapse.json"), "--clopen", &data("left.json"), "--to", &data("right.json"), "--budget", "0",
    ]);
    assert_eq!(code(&out), EXIT_UNDECIDED);
    let r = report(&["af", "class", "--diagram", &data("uhf2.json"), "--clopen", &data("W.json")]);
    assert_eq!(r.result["class"], json!({"level": 2, "vector": [1]}));
}

#[test]
fn af_transport_and_classes_differ() {
    let r = report(&["af", "transport", "--diagram", &data("uhf2.json"), "--from", &data("U.json"), "--to", &data("V.json")]);
    assert_eq!(r.result["tableau"]["pairs"], json!([[[[1, 1]], [[1, 2]]], [[[1, 2]], [[1, 1]]]]));
    let out = ghom(&["af", "transport", "--diagram", &data("uhf2.json"), "--from", &data("U.json"), "--to", &data("W.json")]);
    assert_eq!(code(&out), EXIT_CLASSES_DIFFER);
}

#[test]
fn af_riesz_and_h1() {
    let r = report(&["af", "riesz", "--diagram", &data("uhf2.json"), "--elements", &data("riesz.json")]);
    assert_eq!(r.result["h"], json!({"level": 2, "vector": [2]}));
    let r = report(&["af", "h1check", "--diagram", &data("uhf2.json"), "--depth", "4"]);
    assert_eq!(r.result["all_trivial"], json!(true));
    assert_eq!(r.result["levels"].as_array().unwrap().len(), 5);
}

#[test]
fn towers_commands() {
    let t = data("towers.json");
    let r = report(&["towers", "match", "--towers", &t, "--range", &data("range1.json"), "--range", &data("range2.json"), "--within", &data("within.json")]);
    assert_eq!(r.result["bisections"], json!([{"a": [[1, 3]]}, {"a": [[2, 4]]}]));
    let r = report(&["towers", "match", "--towers", &t, "--range", &data("range1.json"), "--source", &data("source.json")]);
    assert_eq!(r.result["bisection"], json!({"a": [[1, 3]]}));
    assert_eq!(r.result["involution"]["a"], json!([3, 2, 1, 4]));
    let out = ghom(&["towers", "match", "--towers", &t, "--range", &data("within.json"), "--source", &data("source.json")]);
    assert_eq!(code(&out), EXIT_INVALID);
    let r = report(&["towers", "extend", "--towers", &t, "--heights", &data("heights.json")]);
    assert_eq!(r.result["towers"], json!([{"class_id": "a", "orbit_size": 8}, {"class_id": "b", "orbit_size": 9}]));
    let r = report(&["towers", "reduce", "--towers", &t, "--clopen", &data("full_clopen.json")]);
    assert_eq!(r.result["heights"], json!({"a": [2, 0], "b": [2]}));
}

#[test]
fn zn_csv_and_reports() {
    let out = ghom(&["zn", "ratio", "--N", "2", "--m", "8", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,n,N,ratio,bound"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], ["8", "1", "2", "0.5"]);
    assert!(row[4].parse::<f64>().is_ok());
    let r = report(&["zn", "ratio", "--m", "16,32"]);
    assert_eq!(r.result["rows"][0]["ratio"], json!("1/4"));
    assert_eq!(r.result["rows"][1]["ratio"], json!("1/8"));
    let r = report(&["zn", "ratio", "--config", &data("explicit8.json")]);
    assert_eq!(r.result["rows"][0]["ratio"], json!("1/2"));
    let r = report(&["zn", "ratio", "--config", &data("grid8.json")]);
    assert_eq!(r.result["rows"][0]["m"], json!(8));
    let r = report(&["zn", "bound", "--m", "16"]);
    assert_eq!(r.result["rows"][0]["bound"], json!("1445/64"));
    assert_eq!(code(&ghom(&["zn", "bound", "--m", "4"])), EXIT_INVALID);
}

#[test]
fn check_suite_runs() {
    let r = report(&["check", "zn", "--seed", "7"]);
    assert_eq!(r.result["all_passed"], json!(true));
    assert_eq!(code(&ghom(&["check", "nonsense"])), EXIT_INVALID);
}

#[test]
fn parse_errors_cite_the_document() {
    let dir = std::env::temp_dir().join(format!("ghom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 2,\n \"rows\": [[1, 1], [1,]]}").unwrap();
    let out = ghom(&["sft", "homology", "--matrix", bad.to_str().unwrap(), "--degree", "0"]);
    assert_eq!(code(&out), EXIT_INVALID);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(&format!("{}:2:", bad.display())), "{err}");
    let missing = ghom(&["af", "h1check", "--diagram", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&missing), EXIT_INVALID);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = ["sft", "homology", "--matrix", &data("designated.json"), "--degree", "1", "--json"];
    let a: Value = serde_json::from_str(&stdout(&ghom(&args))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&ghom(&args))).unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(a), strip(b));
}
