use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use wittsig::cli;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn wittsig(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_wittsig")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wittsig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn generated(name: &str, args: &[&str]) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let r = wittsig(&full);
    assert_eq!(r.code, 0, "{}", r.stderr);
    scratch(name, &r.stdout)
}

fn canonical_fixture() -> PathBuf {
    generated("canonical.json", &["canonical", "--r0", "0", "--block", "4:1=1"])
}

#[test]
fn decide_metabolic_fixture() {
    let path = generated("metabolic.json", &["metabolic", "--n", "2", "--seed", "7"]);
    let r = wittsig(&["decide", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["trivial"], true);
}

#[test]
fn decide_canonical_fixture() {
    let path = canonical_fixture();
    let r = wittsig(&["decide", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["trivial"], false);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn decide_rejects_non_hermitian_entry() {
    let path = scratch("skewed.json", r#"{"m": 4, "epsilon": 1, "summands": [{"coeff": "1", "gram": [["i"]]}]}"#);
    let r = wittsig(&["decide", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("(1, 1)"), "{}", r.stderr);
}

#[test]
fn decide_rejects_malformed_files() {
    let path = scratch("broken.json", r#"{"m": 4, "summands": 3}"#);
    assert_eq!(wittsig(&["decide", path.to_str().unwrap()]).code, 2);
    assert_eq!(wittsig(&["decide", "/nonexistent/form.json"]).code, 2);
}

#[test]
fn decide_singular_form_exits_3() {
    let path = scratch("singular.json", r#"{"m": 1, "epsilon": 1, "gram": [["1", "1"], ["1", "1"]]}"#);
    let r = wittsig(&["decide", path.to_str().unwrap()]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

#[test]
fn sigfn_csv_for_canonical_fixture() {
    let path = canonical_fixture();
    let r = wittsig(&["sigfn", path.to_str().unwrap(), "--embedding", "1", "--out", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim_end(), "angle_turns_lo,angle_turns_hi,value\n0/1,3/4,-1/1\n3/4,1/1,1/1");
}

#[test]
fn sigfn_json_for_canonical_fixture() {
    let path = canonical_fixture();
    let r = wittsig(&["sigfn", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["arc_values"], serde_json::json!(["-1/1", "1/1"]));
    assert_eq!(v["candidates"][1], serde_json::json!({"type": "exact", "N": 4, "j": 3}));
}

#[test]
fn sigfn_unit_form_is_one_row() {
    let path = scratch("one.json", r#"{"m": 1, "epsilon": 1, "gram": [["1"]]}"#);
    let r = wittsig(&["sigfn", path.to_str().unwrap(), "--out", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<&str> = r.stdout.lines().skip(1).collect();
    assert_eq!(rows, vec!["0/1,1/1,1/1"]);
}

#[test]
fn sigfn_rejects_non_unit_embedding() {
    let path = canonical_fixture();
    let r = wittsig(&["sigfn", path.to_str().unwrap(), "--embedding", "2"]);
    assert_eq!(r.code, 2);
}

#[test]
fn eval_examples() {
    let path = canonical_fixture();
    let r = wittsig(&["eval", path.to_str().unwrap(), "--embedding", "1", "--point", "2", "1"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "-1"), "{}", r.stderr);

    let identity = scratch("identity.json", r#"{"m": 1, "epsilon": 1, "gram": [["1", "0"], ["0", "1"]]}"#);
    for (n, j) in [("1", "0"), ("3", "2"), ("7", "5")] {
        let r = wittsig(&["eval", identity.to_str().unwrap(), "--point", n, j]);
        assert_eq!((r.code, r.stdout.trim()), (0, "2"));
    }
}

#[test]
fn eval_at_pole_exits_3() {
    let path = scratch("pole.json", r#"{"m": 1, "epsilon": 1, "gram": [["1/(t + t^-1)"]]}"#);
    let r = wittsig(&["eval", path.to_str().unwrap(), "--point", "4", "1"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("exp(2*pi*i*1/4)"), "{}", r.stderr);
}

#[test]
fn gen_constant_golden_ratio_form() {
    let path = generated("golden.json", &["constant", "--m", "5", "--diag", "z+z^-1"]);
    let r = wittsig(&["decide", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["trivial"], false);
    let by: Vec<(u64, String)> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| (w["embedding_k"].as_u64().unwrap(), w["value"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(by, vec![(1, "1/1".to_string()), (2, "-1/1".to_string())]);
}

#[test]
fn embeddings_lists_g0() {
    let r = wittsig(&["embeddings", "--m", "12"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["embeddings"], serde_json::json!([1, 5]));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wittsig(&["frobnicate"]).code, 2);
    for block in ["4:1", "0:0=1", "1:0=1"] {
        assert_eq!(wittsig(&["gen", "canonical", "--block", block]).code, 2, "{block}");
    }
}

#[test]
fn generated_metabolic_forms_decide_trivial() {
    for seed in 0..100u64 {
        let n = (1 + seed % 2).to_string();
        let seed_arg = seed.to_string();
        let gen = cli::run(["wittsig", "gen", "metabolic", "--n", &n, "--seed", &seed_arg]);
        assert_eq!(gen.code, 0, "{}", gen.stderr);
        let path = scratch(&format!("metabolic-{seed}.json"), &gen.stdout);
        let decided = cli::run(["wittsig", "decide", path.to_str().unwrap()]);
        assert_eq!(decided.code, 0, "seed {seed}: {}", decided.stderr);
        let v: Value = serde_json::from_str(&decided.stdout).unwrap();
        assert_eq!(v["trivial"], true, "seed {seed}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = generated("det-a.json", &["metabolic", "--n", "2", "--seed", "11", "--m", "4"]);
    let b = generated("det-b.json", &["metabolic", "--n", "2", "--seed", "11", "--m", "4"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let path = canonical_fixture();
    for args in [vec!["decide"], vec!["sigfn", "--out", "csv"]] {
        let mut full = args.clone();
        full.push(path.to_str().unwrap());
        let first = wittsig(&full);
        let second = wittsig(&full);
        assert_eq!(first.stdout, second.stdout);
    }
}
