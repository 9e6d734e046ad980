use std::process::{Command, Output};

use serde_json::Value;

fn frechet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frechet")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_suite_reports_and_exits_zero() {
    let out = frechet(&["verify", "extend-real", "--seed", "1", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["suite"]["stats"]["certificates"], 10);
}

#[test]
fn verify_counterexamples_for_one_prime() {
    let out = frechet(&["verify", "counterexamples", "--prime", "3", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suite"]["stats"]["unit_ball_jump"], -1);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(frechet(&["verify", "identity3", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(frechet(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(frechet(&["verify", "digits", "--prime", "9"]).status.code(), Some(2));
    assert_eq!(frechet(&["extend-real", "--x", "1/0", "--h", "1", "--interval", "0,1"]).status.code(), Some(2));
    assert_eq!(frechet(&["bogus"]).status.code(), Some(2));
}

#[test]
fn extend_real_emits_a_verified_certificate() {
    let out = frechet(&["extend-real", "--x", "0", "--h", "-5/2", "--interval", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verdict"]["accepted"], true);
    // k = ⌊2·5/2⌋ + 1 = 6 on each chain
    assert_eq!(doc["size"], 12);
}

#[test]
fn extend_padic_with_and_without_telescope() {
    let base = ["extend-padic", "--prime", "3", "--x", "2", "--h", "5", "--center", "0", "--exponent", "1"];
    let out = frechet(&base);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["size"], 2);

    let mut with = base.to_vec();
    with.extend(["--telescope", "2"]);
    let out = frechet(&with);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"]["accepted"], true);
}

#[test]
fn equal_step_both_sides() {
    for side in ["neg", "pos"] {
        let out = frechet(&["equal-step", "--delta", "1/2", "--order", "3", "--side", side, "--steps", "1,-2/3,1/7"]);
        assert_eq!(out.status.code(), Some(0), "{side}");
        assert_eq!(json(&out)["verdict"]["accepted"], true);
    }
}

#[test]
fn interpolate_polynomial_and_indicator() {
    let poly = frechet(&[
        "interpolate", "--prime", "5", "--x0", "1/2", "--h0", "3", "--degree", "3", "--krange", "-20,20", "--refine", "2",
        "--function", "poly:1,0,-1,2",
    ]);
    assert_eq!(poly.status.code(), Some(0));
    assert_eq!(json(&poly)["refinement"]["consistent"], true);

    // the unit ball of Q_3 is not constant along 0 + k/3
    let ball = frechet(&["interpolate", "--prime", "3", "--x0", "0", "--h0", "1/3", "--degree", "0", "--krange", "-3,3"]);
    assert_eq!(ball.status.code(), Some(1));
}

#[test]
fn campaign_config_and_overrides() {
    let dir = std::env::temp_dir().join(format!("frechet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("config.json");
    std::fs::write(&config, r#"{"seed": 5, "trials": 50, "suites": ["digits", "ultrametric"]}"#).unwrap();

    let run = |report: &str| {
        let path = dir.join(report);
        let out = frechet(&[
            "campaign", "--config", config.to_str().unwrap(), "--report", path.to_str().unwrap(), "--trials", "3",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        doc.as_object_mut().unwrap().remove("timings_ms");
        doc
    };
    let first = run("a.json");
    assert_eq!(first["config"]["trials"], 3);
    assert_eq!(first["config"]["seed"], 5);
    assert_eq!(first, run("b.json"));

    std::fs::write(&config, r#"{"trials": 1, "colour": "blue"}"#).unwrap();
    let out = frechet(&["campaign", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}
