use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/chains");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rado-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("RADO_LAB_BUDGET_SECONDS")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn formula_examples() {
    let o = run(&["formula", "--m", "4", "--c", "2"]);
    assert_eq!((stdout(&o).trim(), code(&o)), ("7", 0));
    let o = run(&["formula", "--m", "2", "--c", "3"]);
    assert_eq!(stdout(&o).trim(), "infinite (parity)");
    let o = run(&["formula", "--m", "1", "--c", "4", "--a", "3"]);
    assert_eq!(stdout(&o).trim(), "2");
    assert_eq!(code(&run(&["formula", "--m", "0", "--c", "2"])), 2);
    assert_eq!(code(&run(&["formula", "--m", "3"])), 2);
}

#[test]
fn brute_writes_a_checked_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--format", "json", "brute", "--m", "4", "--c", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for key in ["command", "params", "result", "certificate", "diagnostics", "budget_used"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["result"]["value"], 7);
    let cert: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("certificate-m4-c2-a2.json")).unwrap()).unwrap();
    assert_eq!(cert["coloring"]["n"], 6);
    assert_eq!(cert["solution_free"], true);
}

#[test]
fn brute_reports_the_r312_disagreement() {
    let o = run(&["brute", "--m", "3", "--c", "1"]);
    assert_eq!(stdout(&o).trim(), "5");
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("formula: 4"));
}

#[test]
fn brute_budget_exit_codes() {
    let o = run(&["brute", "--m", "2", "--c", "1", "--max-n", "100"]);
    assert_eq!(stdout(&o).trim(), "unknown above 100");
    assert_eq!(code(&o), 3);
    let o = run(&["brute", "--m", "50", "--c", "-46", "--max-n", "30"]);
    assert_eq!((stdout(&o).trim(), code(&o)), ("28", 0));
}

#[test]
fn env_budget_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_rado-lab"))
        .args(["brute", "--m", "2", "--c", "2"])
        .current_dir(dir.path())
        .env("RADO_LAB_BUDGET_SECONDS", "soon")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_rado-lab"))
        .args(["brute", "--m", "2", "--c", "2"])
        .current_dir(dir.path())
        .env("RADO_LAB_BUDGET_SECONDS", "5")
        .output()
        .unwrap();
    assert_eq!((stdout(&o).trim(), code(&o)), ("3", 0));
}

#[test]
fn table_rows_and_formats() {
    let o = run(&["--format", "json", "table", "--m", "2", "--c", "3..4"]);
    assert_eq!(code(&o), 0);
    let rows = json(&o)["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows[0]["formula"], "infinite (parity)");
    assert!(rows[0]["brute"].as_str().unwrap().starts_with("unknown above"));
    assert_eq!((rows[1]["formula"].as_str(), rows[1]["brute"].as_str()), (Some("5"), Some("5")));

    let o = run(&["--format", "csv", "table", "--m", "2..3", "--c", "2"]);
    let text = stdout(&o);
    assert!(text.starts_with("m,c,a,formula,brute,agree,nodes,seconds"));
    assert_eq!(text.lines().count(), 3);

    assert_eq!(code(&run(&["--format", "csv", "formula", "--m", "2", "--c", "2"])), 2);
    assert_eq!(code(&run(&["table", "--m", "5..2", "--c", "1"])), 2);
}

#[test]
fn table_flags_disagreement() {
    let o = run(&["table", "--m", "3", "--c", "1..2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NO"));
}

#[test]
fn check_coloring_examples() {
    let mut x = String::from("R");
    x.push_str(&"B".repeat(25));
    x.push('R');
    let o = run(&["check-coloring", "--m", "50", "--c", "-46", "--coloring", &x]);
    assert_eq!(code(&o), 0);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.json");
    std::fs::write(&file, r#"{"n": 5, "red": [1, 4, 5], "blue": [2, 3]}"#).unwrap();
    let o = run_in(dir.path(), &["--format", "json", "check-coloring", "--m", "3", "--c", "1", "--file", "x.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["witness"]["x0"], 4);

    std::fs::write(&file, r#"{"n": 5, "red": [1, 4], "blue": [2, 3]}"#).unwrap();
    assert_eq!(code(&run_in(dir.path(), &["check-coloring", "--m", "3", "--c", "1", "--file", "x.json"])), 2);
}

#[test]
fn chain_commands() {
    let pass = format!("{FIXTURES}/iib2_m6_c2.json");
    let o = run(&["chain", "verify", "--file", &pass]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let fail = format!("{FIXTURES}/iiib2_m3_c1.json");
    let o = run(&["--format", "json", "chain", "verify", "--file", &fail]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["outcome"], "fail:range");
    assert_eq!(json(&o)["result"]["meets_expected"], true);

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"m":2,"c":2,"a":2,"assumptions":{},"steps":[],"contradiction":[1,2]}"#).unwrap();
    assert_eq!(code(&run_in(dir.path(), &["chain", "verify", "--file", "bad.json"])), 2);

    let o = run(&["chain", "corpus"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 46);
}

#[test]
fn continuous_commands() {
    let o = run(&["continuous", "verify", "--c", "3", "--a", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    let o = run(&["continuous", "verify", "--c", "7/2", "--a", "3/2", "--kind", "intervals"]);
    assert_eq!(code(&o), 0);
    let o = run(&["continuous", "verify", "--c", "5", "--a", "3", "--kind", "blocks"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["continuous", "verify", "--c", "x", "--a", "2"])), 2);
}

#[test]
fn coloring_constructors() {
    let o = run(&["coloring", "lemma1", "--m", "5", "--c", "3"]);
    assert_eq!(stdout(&o).trim(), "RRRBBBBBBBB");
    let o = run(&["coloring", "parity", "--n", "4"]);
    assert_eq!(stdout(&o).trim(), "BRBR");
    let o = run(&["--format", "json", "coloring", "linear", "--c", "1", "--a", "3", "--n", "50"]);
    assert_eq!(json(&o)["result"]["solution_free"], true);
    assert_eq!(code(&run(&["coloring", "parity"])), 2);
}

#[test]
fn explore_negative_c() {
    let o = run(&["explore", "--m", "4", "--c", "-2"]);
    assert_eq!((stdout(&o).trim(), code(&o)), ("1", 0));
    assert_eq!(code(&run(&["explore", "--m", "4", "--c", "-4"])), 2);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["--format", "json", "brute", "--m", "5", "--c", "3", "--threads", "1"][..],
        &["--format", "json", "explore", "--m", "50", "--c", "-46", "--threads", "1"][..],
        &["--format", "json", "chain", "corpus"][..],
    ] {
        let dir = tempfile::tempdir().unwrap();
        let a = run_in(dir.path(), args);
        let b = run_in(dir.path(), args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--out", "r.txt", "formula", "--m", "4", "--c", "2"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(dir.path().join("r.txt")).unwrap(), "7\n");
}
