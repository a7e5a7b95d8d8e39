use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn capset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capset"))
        .args(args)
        .env_remove("CAPSET_PRECISION")
        .output()
        .expect("binary runs")
}

/// Runs with JSON output and returns (exit code, envelope).
fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = capset(&all);
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, value)
}

fn code(args: &[&str]) -> i32 {
    capset(args).status.code().unwrap()
}

#[test]
fn bound_reports_the_base() {
    let (c, v) = json(&["bound", "--p", "3", "--n-max", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["command"], "bound");
    assert_eq!(v["format"], "json");
    let base = v["result"]["base"].as_f64().unwrap();
    assert!((2.835..=2.845).contains(&base), "{base}");

    let (_, v) = json(&["bound", "--p", "3", "--n-max", "0"]);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 0);
    let table =
        String::from_utf8(capset(&["bound", "--p", "3", "--n-max", "0", "--format", "csv"]).stdout)
            .unwrap();
    assert_eq!(table, "n,c,p^{cn},3p^{cn}\n");

    let (_, v) = json(&["bound", "--p", "5", "--n-max", "3"]);
    assert!((v["result"]["c"].as_f64().unwrap() - 0.96548).abs() < 1e-5);
    let main: f64 = v["result"]["rows"][2]["main_bound"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(main > 0.0);

    assert_eq!(code(&["bound", "--p", "4"]), 2);
    assert_eq!(code(&["bound", "--p", "2"]), 2);
    assert_eq!(code(&["bound"]), 2);
}

#[test]
fn dims_table() {
    let (c, v) = json(&["dims", "--p", "3", "--n", "3"]);
    assert_eq!(c, 0);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows[2]["dim"], "10");
    assert_eq!(rows[4]["dim"], "23");
    assert_eq!(rows[6]["dim"], "27");
    assert!(rows.iter().all(|r| r["duality"] == "ok"));
    assert_eq!(code(&["dims", "--p", "3", "--n", "3", "--d-max", "7"]), 2);
    assert_eq!(
        code(&["dims", "--p", "3", "--n", "3", "--d-min", "4", "--d-max", "2"]),
        2
    );
}

#[test]
fn entropy_check_cases() {
    let (c, v) = json(&["entropy-check", "--p", "3", "--n", "3,6,9"]);
    assert_eq!(c, 0);
    let reports = v["result"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["holds"] == true));
    assert_eq!(reports[0]["exact_dim"], "10");

    assert_eq!(code(&["entropy-check", "--p", "3", "--n", "4"]), 2);
    let (c, v) = json(&["entropy-check", "--p", "3", "--n", "4", "--info"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["reports"][0]["degree"], 2);

    let start = std::time::Instant::now();
    let (c, _) = json(&["entropy-check", "--p", "7", "--n", "30"]);
    assert_eq!(c, 0);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn search_modes() {
    let (c, v) = json(&["search", "--p", "3", "--n", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["best_size"], 4);
    assert_eq!(v["result"]["optimal"], true);

    let (_, v) = json(&["search", "--p", "3", "--n", "3", "--mode", "exact"]);
    assert_eq!(v["result"]["best_size"], 9);
    assert_eq!(v["result"]["optimal"], true);

    let run = || {
        json(&[
            "search", "--p", "3", "--n", "6", "--mode", "greedy", "--seed", "7",
        ])
        .1
    };
    let first = run();
    assert_eq!(first, run());
    assert_eq!(first["result"]["progression_free"], true);

    let exact = |threads: &str| json(&["search", "--p", "3", "--n", "3", "--threads", threads]).1;
    assert_eq!(exact("1"), exact("4"));

    let out = capset(&["search", "--p", "3", "--n", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("greedy"));
}

#[test]
fn prove_and_verify() {
    let cap = data("cap9.json");
    let out = capset(&["prove", cap.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let t = &v["result"];
    assert_eq!(t["dims"]["dim_k"], "9");
    assert_eq!(t["dims"]["dim_l"], "23");
    assert!(t["dims"]["dim_v"].as_str().unwrap().parse::<u32>().unwrap() >= 5);
    assert!(t["matrix_rank"].as_u64().unwrap() <= 20);

    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("transcript.json");
    std::fs::write(&saved, &out.stdout).unwrap();
    let (c, r) = json(&["verify", saved.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(r["result"]["mismatches"].as_array().unwrap().len(), 0);

    // a bare transcript is accepted too, and tampering is caught
    let mut bare = t.clone();
    std::fs::write(&saved, serde_json::to_string(&bare).unwrap()).unwrap();
    assert_eq!(json(&["verify", saved.to_str().unwrap()]).0, 0);
    bare["checks"][0]["holds"] = Value::Bool(false);
    std::fs::write(&saved, serde_json::to_string(&bare).unwrap()).unwrap();
    assert_eq!(json(&["verify", saved.to_str().unwrap()]).0, 1);
    std::fs::write(&saved, "{not json").unwrap();
    assert_eq!(code(&["verify", saved.to_str().unwrap()]), 2);
}

#[test]
fn prove_rejections() {
    let (c, v) = json(&["prove", data("line_f3_3.txt").to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["result"]["progression_free"], false);
    let w = &v["result"]["witness"];
    assert!(w["a"].is_object() && w["b"].is_object() && w["c"].is_object());

    let (c, v) = json(&["prove", data("empty_f3_3.txt").to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["input_size"], 0);
    assert_eq!(v["result"]["branch"], "trivial_v");

    assert_eq!(
        code(&["prove", data("square_f3_2.txt").to_str().unwrap()]),
        2
    );
    assert_eq!(code(&["prove", "/nonexistent/file"]), 2);
    assert_eq!(code(&["prove"]), 2);
    let (c, v) = json(&["prove", "--search", "--p", "3", "--n", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["input_size"], 9);
}

#[test]
fn verify_set_cases() {
    let (c, v) = json(&["verify-set", data("square_f3_2.txt").to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["progression_free"], true);
    assert_eq!(v["result"]["cap_equivalence_agrees"], true);

    let (c, v) = json(&["verify-set", data("line_f3_2.txt").to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["result"]["progression_free"], false);
    assert!(v["result"]["witness"].is_object());

    let (c, _) = json(&["verify-set", data("point_f3_3.txt").to_str().unwrap()]);
    assert_eq!(c, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "p=3 n=2\n0 5\n").unwrap();
    assert_eq!(code(&["verify-set", bad.to_str().unwrap()]), 2);
}

#[test]
fn precision_variable_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_capset"))
        .args(["entropy-check", "--p", "3", "--n", "3", "--format", "json"])
        .env("CAPSET_PRECISION", "50")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["precision_digits"], 50);
}
