use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn binvar(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binvar"))
        .args(args)
        .env("BINVAR_CACHE", cache)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn poincare_json_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = binvar(
        dir.path(),
        &["--json", "poincare", "--n", "10", "--max", "48"],
    );
    assert_eq!(code(&a), 0);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["outcome"], "pass");
    assert_eq!(v["coefficients"][48], "85250");
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 49);
    let b = binvar(
        dir.path(),
        &["--json", "poincare", "--n", "10", "--max", "48"],
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn numerator_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = binvar(
        dir.path(),
        &["--json", "numerator", "--degrees", "2,4,6,6,8,9,10,14"],
    );
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["degree_bound"], 48);
    assert_eq!(v["nonzero"], 37);
    assert_eq!(v["first_zero_multiple_of_6"], 54);
    assert_eq!(v["coefficients"][24], "56");
}

#[test]
fn eval_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = binvar(
        dir.path(),
        &[
            "eval",
            "--invariant",
            "j2",
            "--coeffs",
            "1,0,0,0,0,0,0,0,0,0,1",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2");
    let out = binvar(
        dir.path(),
        &[
            "--json",
            "eval",
            "--invariant",
            "j2",
            "--coeffs",
            "0,0,0,0,0,1,0,0,0,0,0",
        ],
    );
    assert_eq!(json(&out)["value"], "-252");
    let out = binvar(
        dir.path(),
        &[
            "--json",
            "eval",
            "--invariant",
            "k",
            "--coeffs",
            "1,0,0,0,0,0,0,0,0,0,1",
        ],
    );
    assert_eq!(
        json(&out)["coefficients"],
        serde_json::json!(["0", "0", "2", "0", "0"])
    );
}

#[test]
fn form_files_round_trip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    // f = x^10: a nullform on which j2 vanishes.
    let mut terms = vec![Value::Array(vec![]); 11];
    terms[0] = serde_json::json!([[[], "1"]]);
    let doc =
        serde_json::json!({"order": 10, "degree": 1, "vars": [], "domain": "QQ", "terms": terms});
    let path = dir.path().join("f.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let out = binvar(dir.path(), &["--json", "nullcone-verify", "--form-file", p]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["nullform"], true);
    assert_eq!(v["system_vanishes"], true);
    let out = binvar(
        dir.path(),
        &["--json", "eval", "--invariant", "j2", "--form-file", p],
    );
    assert_eq!(json(&out)["value"], "0");
}

#[test]
fn catalog_dump_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = binvar(dir.path(), &["--json", "catalog", "--dump", "k"]);
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("k.json").exists());
    let v = json(&out);
    assert_eq!(v["form"]["order"], 4);
    assert_eq!(v["form"]["terms"].as_array().unwrap().len(), 5);
    let again = binvar(dir.path(), &["--json", "catalog", "--dump", "k"]);
    assert_eq!(out.stdout, again.stdout);
    let uncached = tempfile::tempdir().unwrap();
    let out = binvar(
        uncached.path(),
        &["--no-cache", "--json", "catalog", "--dump", "k"],
    );
    assert_eq!(out.stdout, again.stdout);
    assert!(!uncached.path().join("k.json").exists());
}

#[test]
fn search_resume_matches_a_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp");
    let cps = cp.to_str().unwrap();
    let first = binvar(
        dir.path(),
        &["--json", "search", "--max-degree", "9", "--resume", cps],
    );
    assert_eq!(code(&first), 0);
    assert!(cp.join("degree-09.json").exists());
    let resumed = binvar(
        dir.path(),
        &["--json", "search", "--max-degree", "12", "--resume", cps],
    );
    let fresh = binvar(dir.path(), &["--json", "search", "--max-degree", "12"]);
    assert_eq!(code(&fresh), 0);
    assert_eq!(resumed.stdout, fresh.stdout);
    let v = json(&fresh);
    assert_eq!(v["degrees"][10]["dm"], 12);
    assert_eq!(v["config"]["seed"], "1");
    // A different prime must not reuse these checkpoints.
    let other = binvar(
        dir.path(),
        &[
            "search",
            "--max-degree",
            "12",
            "--prime",
            "197",
            "--resume",
            cps,
        ],
    );
    assert_eq!(code(&other), 2);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["search", "--max-degree", "30"],
        vec!["search", "--prime", "23"],
        vec!["eval", "--invariant", "j2", "--coeffs", "1,2,3"],
        vec![
            "eval",
            "--invariant",
            "nope",
            "--coeffs",
            "1,0,0,0,0,0,0,0,0,0,1",
        ],
        vec!["groebner-check", "--claim", "nope"],
        vec!["ideal-dim", "--preset", "nope"],
        vec!["catalog", "--dump", "nope"],
    ] {
        assert_eq!(code(&binvar(dir.path(), &args)), 2, "{args:?}");
    }
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = binvar(
        dir.path(),
        &[
            "--json",
            "ideal-dim",
            "--select",
            "4",
            "--degree",
            "8",
            "--expect",
            "999",
        ],
    );
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["outcome"], "fail");
    assert_eq!(v["rank"], 1);
}

#[test]
fn exhausted_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = binvar(
        dir.path(),
        &[
            "--json",
            "groebner-check",
            "--claim",
            "a4-a8-a10-in-i",
            "--primes",
            "none",
            "--max-steps",
            "1",
        ],
    );
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["outcome"], "incomplete");
}

#[test]
fn small_checks_pass_and_write_output() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = binvar(
        dir.path(),
        &[
            "--json",
            "--output",
            report.to_str().unwrap(),
            "exceptional-forms",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&report).unwrap(), out.stdout);
    for which in ["7", "8", "jerzy"] {
        let out = binvar(
            dir.path(),
            &["lemma-check", "--which", which, "--samples", "40"],
        );
        assert_eq!(code(&out), 0, "{which}");
    }
    let out = binvar(
        dir.path(),
        &[
            "nullcone-verify",
            "--n",
            "4,10",
            "--samples",
            "20",
            "--seed",
            "5",
        ],
    );
    assert_eq!(code(&out), 0);
    let out = binvar(dir.path(), &["groebner-check", "--claim", "a5-vanishes"]);
    assert_eq!(code(&out), 0);
}
