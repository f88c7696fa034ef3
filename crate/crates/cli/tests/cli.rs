use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_elliptic-blocks");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("ELLIPTIC_BLOCKS_SEED")
        .output()
        .expect("spawn")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), v)
}

fn export(dir: &Path) -> PathBuf {
    let out = run(&["appendix", "export", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    dir.to_path_buf()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

// exit-1 reports must say what failed
fn assert_witnessed(report: &Value) {
    let failed: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false && c.get("advisory").is_none())
        .collect();
    assert!(!failed.is_empty());
    for c in failed {
        assert!(
            c["witnesses"].as_array().is_some_and(|w| !w.is_empty()),
            "no witness on {c}"
        );
    }
}

#[test]
fn appendix_verify_passes() {
    let (code, v) = json(&["appendix", "verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    let text = run(&["appendix", "verify"]);
    let stdout = String::from_utf8(text.stdout).unwrap();
    assert!(stdout.contains("status: pass"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["--json", "appendix", "verify"],
        vec!["--json", "plan", "--degree", "240", "--genus", "2"],
        vec!["--json", "search", "--prime", "23", "--max-vertices", "12", "--samples", "200", "--seed", "9"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let g1 = dir.path().join("g1.json");
    let (code, v) = json(&["check", "--graph", path(&g1), "--prime", "23"]);
    assert_eq!(code, 0, "{v}");

    // corrupt one value: exit 1 with witnesses
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&g1).unwrap()).unwrap();
    let vertex = &mut doc["vertices"][3];
    vertex["lambda"] = Value::from((vertex["lambda"].as_u64().unwrap() + 1) % 23);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let (code, v) = json(&["check", "--graph", path(&bad), "--prime", "23"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert_witnessed(&v);

    // prime disagreeing with the file is an input error
    let out = run(&["check", "--graph", path(&g1), "--prime", "29"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    std::fs::write(&f, "{ \"vertices\": [ ").unwrap();
    let out = run(&["check", "--graph", path(&f), "--prime", "23"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error[malformed-json]"), "{err}");

    let (code, v) = json(&["rational-check", "--graph", path(&f)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "malformed-json");

    let missing = run(&["check", "--graph", "/nonexistent/g.json", "--prime", "23"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn plan_reachability() {
    let (code, v) = json(&["plan", "--degree", "169", "--genus", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["data"]["outcome"], "UNREACHABLE");
    assert_witnessed(&v);

    let (code, v) = json(&["plan", "--degree", "29", "--genus", "1", "--replay"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["data"]["outcome"], "PLAN");
    assert_eq!(v["data"]["stated_bound"], 213);
}

#[test]
fn finiteness_of_the_special_star() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let (code, v) = json(&["finiteness", "--decorated", path(&dir.path().join("special_star.json"))]);
    assert_eq!(code, 0, "{v}");
    let outcomes = v["data"]["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    assert_eq!(outcomes[0]["kernel"]["kind"], "INFINITE");
    assert_eq!(outcomes[0]["kernel"]["dimension"], 2);
    assert_eq!(outcomes[0]["rank"], 2);
    assert_eq!(v["data"]["all_finite"], false);
}

#[test]
fn make_h_then_insert() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let h = dir.path().join("h2.json");
    let out = run(&[
        "make-h",
        "--block",
        path(&dir.path().join("g2.json")),
        "--out",
        path(&h),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let joined = dir.path().join("joined.json");
    let (code, v) = json(&[
        "insert",
        "--host",
        path(&dir.path().join("g1.json")),
        "--site",
        "n0,n1",
        "--h",
        path(&h),
        "--tag",
        "x",
        "--out",
        path(&joined),
    ]);
    assert_eq!(code, 0, "{v}");
    let (code, v) = json(&["check", "--graph", path(&joined), "--prime", "23"]);
    assert_eq!(code, 0, "{v}");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&joined).unwrap()).unwrap();
    assert_eq!(doc["edges"].as_array().unwrap().len(), 29);

    // a site whose values are not (a, b)
    let out = run(&[
        "insert",
        "--host",
        path(&dir.path().join("g1.json")),
        "--site",
        "n2,n3",
        "--h",
        path(&h),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("site-values"));
}

#[test]
fn cut_open_file_goes_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let out = run(&["make-h", "--block", path(&dir.path().join("g1.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["open_ends"].as_array().unwrap().len(), 2);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 12);
}

#[test]
fn search_seed_comes_from_the_environment() {
    let args = ["--json", "search", "--prime", "23", "--max-vertices", "12", "--samples", "300"];
    let with_env = Command::new(BIN)
        .args(args)
        .env("ELLIPTIC_BLOCKS_SEED", "5")
        .output()
        .unwrap();
    let mut explicit = args.to_vec();
    explicit.extend(["--seed", "5"]);
    let with_flag = run(&explicit);
    assert_eq!(with_env.status.code(), Some(0));
    assert_eq!(with_env.stdout, with_flag.stdout);
    let v: Value = serde_json::from_slice(&with_flag.stdout).unwrap();
    assert!(!v["data"]["blocks"].as_array().unwrap().is_empty());
}

#[test]
fn cycle_search_finds_the_eleven_cycle() {
    let (code, v) = json(&["search", "--prime", "23", "--max-vertices", "11", "--cycles-only"]);
    assert_eq!(code, 0);
    let blocks = v["data"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["vertices"].as_array().unwrap().len(), 11);
}

#[test]
fn solve_reports_a_basis() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let (code, v) = json(&["solve", "--graph", path(&dir.path().join("g1.json")), "--prime", "23"]);
    assert_eq!(code, 0);
    assert!(v["data"]["dimension"].as_u64().unwrap() >= 1);
    let (code, v) = json(&["rational-check", "--graph", path(&dir.path().join("g3.json"))]);
    assert_eq!(code, 0, "{v}");
}
