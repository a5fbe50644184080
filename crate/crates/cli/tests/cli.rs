use std::process::{Command, Output};

use serde_json::Value;

fn glq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glq")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = glq(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

#[test]
fn verify_passes() {
    let (code, v) = json(&["verify", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["pass"], true);
    let ids: Vec<&str> = v["report"]["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"minors.upper") && ids.contains(&"coproduct"));
}

#[test]
fn verify_trivial_and_word() {
    assert_eq!(glq(&["verify", "--n", "1"]).status.code(), Some(0));
    let (code, v) = json(&["verify", "--n", "3", "--word", "121"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["params"]["word"], "121");
    assert!(v["report"]["checks"].as_array().unwrap().iter().any(|c| c["id"] == "word.121" && c["pass"] == true));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--n", "0"],
        vec!["verify", "--n", "3", "--word", "12"],
        vec!["verify", "--n", "3", "--word", "123"],
        vec!["embed", "--n", "3", "--mode", "nope"],
        vec!["embed", "--n", "1", "--mode", "thm61"],
        vec!["classical"],
    ] {
        assert_eq!(glq(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn embed_counts() {
    let (code, v) = json(&["embed", "--n", "4", "--mode", "thm61"]);
    assert_eq!(code, 0);
    let pairs = v["report"]["checks"].as_array().unwrap().iter().find(|c| c["id"] == "pairs").unwrap();
    assert_eq!(pairs["residual"], 8.0);
    assert_eq!(v["report"]["convention"]["family"], "thm61");
    assert_eq!(v["morphism"]["images"].as_array().unwrap().len(), 9);
    let (code, v) = json(&["embed", "--n", "2", "--mode", "minimal"]);
    assert_eq!(code, 0);
    assert_eq!(v["morphism"]["images"][0]["rendered"], "U1");
}

#[test]
fn reference_table_fails_at_six() {
    let (code, v) = json(&["embed", "--n", "6", "--mode", "example64"]);
    assert_eq!(code, 1);
    let checks = v["report"]["checks"].as_array().unwrap();
    let find = |id: &str| checks.iter().find(|c| c["id"] == id).unwrap().clone();
    assert_eq!(find("morphism")["pass"], false);
    assert_eq!(find("pairs")["residual"], 9.0);
    assert_eq!(find("table.verbatim")["pass"], true);
    assert_eq!(glq(&["embed", "--n", "5", "--mode", "example64"]).status.code(), Some(0));
}

#[test]
fn classical_reports_density_finding() {
    let (code, v) = json(&["classical", "--n", "3", "--samples", "50", "--seed", "7"]);
    assert_eq!(code, 1);
    let checks = v["report"]["checks"].as_array().unwrap();
    let pass = |id: &str| checks.iter().find(|c| c["id"] == id).unwrap()["pass"].as_bool().unwrap();
    assert!(pass("round_trip") && pass("positivity"));
    assert!(!pass("haar.x") && !pass("haar.abu"));
    assert_eq!(v["report"]["params"]["seed"], 7);
    assert_eq!(v["samples"]["haar"]["systems"][0]["ratios"].as_array().unwrap().len(), 50);
    assert_eq!(glq(&["classical", "--n", "1"]).status.code(), Some(0));
    assert_eq!(glq(&["classical", "--n", "2", "--samples", "1000"]).status.code(), Some(1));
}

#[test]
fn out_file_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = glq(&["classical", "--n", "2", "--seed", "3", "--format", "json", "--out", p.to_str().unwrap()]);
        assert!(out.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    let text = dir.path().join("r.txt");
    assert_eq!(glq(&["verify", "--n", "2", "--out", text.to_str().unwrap()]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&text).unwrap().starts_with("verify N=2: PASS"));
}
