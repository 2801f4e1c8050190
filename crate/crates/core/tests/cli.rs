use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_large-sieve"))
        .args(args)
        .env_remove("LSL_THREADS")
        .output()
        .expect("spawn large-sieve")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = run(&["verify", "--d", "5", "--x", "10000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["config"]["command"], "verify");
    assert_eq!(v["trials"].as_array().unwrap().len(), 1);
    let c1 = v["c1_hat"].as_f64().unwrap();
    assert!((v["c_default"].as_f64().unwrap() - 4.0 * c1).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["verify", "--d", "10", "--x", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("d ≤ x"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn violation_exits_one() {
    // one prime in range: lhs = 96/101², rhs = 4/101² at c = 0
    let out = run(&["verify", "--d", "97", "--x", "101", "--chars", "all", "--c", "0"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["all_passed"], false);
    let ratio = v["max_ratio"].as_f64().unwrap();
    assert!((ratio - 24.0).abs() < 1e-9, "{ratio}");
}

#[test]
fn character_table_for_d1() {
    let out = run(&["characters", "--d", "1", "--x", "1", "--chars", "all", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,chi0\n0,\"1,0\"\n");
}

#[test]
fn character_table_mod_5() {
    let out = run(&["characters", "--d", "5", "--chars", "all", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().len(), 5);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    // n = 0 is not a unit
    assert!(rows[0].iter().skip(1).all(|c| c == "0,0"));
    assert!(rows[1].iter().skip(1).all(|c| c == "1,0"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "d = 7\nx = 2000\ncoeffs = random-real\ntrials = 2\nseed = 40\n").unwrap();
    let out = run(&["variant-verify", "--config", cfg.to_str().unwrap(), "--seed", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["d"], 7);
    assert_eq!(v["config"]["seed"], 41);
    let seeds: Vec<u64> = v["trials"].as_array().unwrap().iter().map(|t| t["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, vec![41, 42]);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["estimate-constants", "--d", "5", "--x", "3000", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["c1_hat"].as_f64().unwrap() >= 0.0);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["lemma-scan", "--d", "7", "--x", "3000"];
    let one = Command::new(env!("CARGO_BIN_EXE_large-sieve")).args(args).env("LSL_THREADS", "1").output().unwrap();
    let three = Command::new(env!("CARGO_BIN_EXE_large-sieve")).args(args).env("LSL_THREADS", "3").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_large-sieve")).args(args).env("LSL_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn every_report_embeds_the_resolved_config() {
    let keys = [
        "command",
        "d",
        "x",
        "b_exponent",
        "characters",
        "coefficients",
        "trials",
        "seed",
        "c_override",
        "sigma_max",
        "output",
        "format",
    ];
    for command in [
        "characters",
        "lemma-scan",
        "verify",
        "variant-verify",
        "estimate-constants",
        "extremal",
        "duality-selftest",
        "abel-check",
    ] {
        let out = run(&[command, "--d", "5", "--x", "1000"]);
        assert_eq!(out.status.code(), Some(0), "{command}");
        let v = json(&out);
        let cfg = v["config"].as_object().unwrap_or_else(|| panic!("{command}: no config"));
        for key in keys {
            assert!(cfg.contains_key(key), "{command}: missing {key}");
        }
        assert_eq!(cfg["command"], command);
    }
}
