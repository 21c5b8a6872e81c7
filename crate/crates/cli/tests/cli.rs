use std::process::{Command, Output};

use serde_json::Value;

fn zerotemp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerotemp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn records(out: &Output) -> Vec<Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn of_kind<'a>(recs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    recs.iter().filter(|r| r["record"] == kind).collect()
}

#[test]
fn forbidden_two_is_one_line() {
    let out = zerotemp(&["forbidden", "--n-max", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let rec: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(rec["n"], 2);
    assert_eq!(rec["word"], "00");
}

#[test]
fn language_csv_rows() {
    let out = zerotemp(&["language", "--n-max", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "n,count,k,log_over_n");
    assert!(lines[1].starts_with("1,3,"));
    assert!(lines[2].starts_with("2,8,"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn language_words_are_listed() {
    let recs = records(&zerotemp(&["language", "--n-max", "2", "--words"]));
    let words: Vec<_> = of_kind(&recs, "word")
        .iter()
        .filter(|r| r["n"] == 2)
        .map(|r| r["word"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(words.len(), 8);
    assert!(!words.contains(&"00".to_string()));
}

#[test]
fn paper_level_one_state() {
    let recs = records(&zerotemp(&["params", "--mode", "paper", "--levels", "1"]));
    let states = of_kind(&recs, "state");
    assert_eq!(states.len(), 2);
    assert_eq!(states[1]["beta"], "64");
    assert_eq!(states[1]["ell"], "128");
    assert!(of_kind(&recs, "induction").iter().all(|r| r["status"] != "violated"));
}

#[test]
fn levels_zero_gives_base_state_only() {
    let recs = records(&zerotemp(&["params", "--levels", "0"]));
    let states = of_kind(&recs, "state");
    assert_eq!(states.len(), 1);
    assert_eq!(states[0]["ell"], "2");
}

#[test]
fn toy_schedule_from_file() {
    let dir = std::env::temp_dir().join(format!("zerotemp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let levels: Vec<_> = (1..=4)
        .map(|k| serde_json::json!({ "k": k, "N": "4", "N_prime": "2", "beta": "8" }))
        .collect();
    std::fs::write(&path, serde_json::json!({ "levels": levels }).to_string()).unwrap();
    let out = zerotemp(&["params", "--mode", "toy", "--schedule", path.to_str().unwrap(), "--levels", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(of_kind(&records(&out), "state").len(), 5);
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(zerotemp(&["params", "--schedule", path.to_str().unwrap()]).status.code(), Some(4));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // capacity
    assert_eq!(zerotemp(&["params", "--mode", "paper", "--levels", "3"]).status.code(), Some(2));
    assert_eq!(zerotemp(&["overlaps", "--mode", "paper", "--levels", "2"]).status.code(), Some(2));
    // bad input
    assert_eq!(zerotemp(&["params", "--schedule", "no-such-preset"]).status.code(), Some(4));
    assert_eq!(zerotemp(&["params", "--mode", "paper", "--schedule", "toy-a"]).status.code(), Some(4));
    assert_eq!(zerotemp(&["forbidden", "--n-max", "x"]).status.code(), Some(4));
    assert_eq!(zerotemp(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(zerotemp(&["bounds", "--mu", "0.5"]).status.code(), Some(4));
    assert_eq!(zerotemp(&["grid", "--check", "density", "--window", "0"]).status.code(), Some(4));
    assert_eq!(zerotemp(&["--help"]).status.code(), Some(0));
}

#[test]
fn constraint_violation_in_inputs_file() {
    let dir = std::env::temp_dir().join(format!("zerotemp-bounds-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inputs.json");
    let mut inputs = serde_json::json!({
        "k": 2, "ell": "1024", "ell_prime": "64", "beta": "1099511627776", "n_prime": "4", "n_prev": "8",
        "f_prev_a": "1/4", "f_prev_b": "1/8", "f_a": "1/16", "f_b": "1/8", "d": 2,
        "r_prime": "129", "c_prime": "1000"
    });
    std::fs::write(&path, inputs.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let ok = zerotemp(&["bounds", "--inputs", p, "--mu", "1/2"]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let recs = records(&ok);
    assert_eq!(of_kind(&recs, "term").len(), 9);
    assert_eq!(of_kind(&recs, "chaotic").len(), 1);
    // R'_k below l'_k
    inputs["r_prime"] = "3".into();
    std::fs::write(&path, inputs.to_string()).unwrap();
    assert_eq!(zerotemp(&["bounds", "--inputs", p]).status.code(), Some(3));
    // μ outside [0, 1]
    inputs["r_prime"] = "129".into();
    std::fs::write(&path, inputs.to_string()).unwrap();
    assert_eq!(zerotemp(&["bounds", "--inputs", p, "--mu", "3/2"]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn toy_bounds_report_skipped_levels() {
    let recs = records(&zerotemp(&["bounds"]));
    assert!(!of_kind(&recs, "skipped").is_empty());
    assert!(of_kind(&recs, "skipped")[0]["reason"].as_str().unwrap().contains("epsilon_k"));
}

#[test]
fn paper_bounds_csv() {
    let out = zerotemp(&["bounds", "--mode", "paper", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "k,parity,L_k,U_k_at_mu0,implied_mu_bound");
    assert!(lines[1].starts_with("2,even,-0.0204"));
}

#[test]
fn pretty_and_out_file() {
    let out = zerotemp(&["params", "--levels", "1", "--format", "pretty"]);
    assert!(stdout(&out).lines().next().unwrap().starts_with("state: k=0"));
    let path = std::env::temp_dir().join(format!("zerotemp-out-{}.json", std::process::id()));
    let out = zerotemp(&["forbidden", "--n-max", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 1 + 9);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let plain = records(&zerotemp(&["forbidden", "--n-max", "3", "--stats"]));
    let slices = of_kind(&plain, "slice");
    assert_eq!(slices.len(), 3);
    assert!(slices.iter().all(|s| s.get("elapsed_micros").is_none()));
    let timed = records(&zerotemp(&["forbidden", "--n-max", "3", "--stats", "--timing"]));
    assert!(of_kind(&timed, "slice").iter().all(|s| s.get("elapsed_micros").is_some()));
}

#[test]
fn grid_checks() {
    let recs = records(&zerotemp(&["grid", "--samples", "10", "--structured", "3", "--each"]));
    assert_eq!(of_kind(&recs, "pattern").len(), 10 + 3 * 3);
    assert_eq!(of_kind(&recs, "summary")[0]["holds"], true);
    let dups = records(&zerotemp(&["grid", "--check", "duplications"]));
    assert!(dups.iter().all(|r| r["holds"] == true));
    assert_eq!(dups[1]["distinct"], 65536);
    let dens = records(&zerotemp(&["grid", "--check", "density", "--structured", "4"]));
    assert_eq!(dens.len(), 4);
    assert!(dens.iter().all(|r| r["holds"] == true));
}

#[test]
fn report_is_one_object() {
    let out = zerotemp(&["report", "--n-max", "6", "--samples", "5"]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["record"], "report");
    let failed: Vec<_> = recs[0]["failed"].as_array().unwrap().iter().collect();
    assert_eq!(failed, vec!["self-overlap-classes"]);
}
