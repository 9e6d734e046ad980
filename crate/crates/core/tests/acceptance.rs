//! The ten acceptance criteria, one pass/fail line each.
//!
//! Runs without the libtest harness so the lines always reach the output.

use std::time::{Duration, Instant};

use frechet::arith::{int, rat, BigRational, PAdicContext, QuadraticElement};
use frechet::campaign::{run_campaign, run_suite, CampaignConfig, SuiteReport};
use frechet::difference::forward_difference;
use frechet::gallery::{remark1_witness, BallIndicator};
use num_traits::Zero;
use serde_json::json;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(name: &str, config: CampaignConfig) -> Result<SuiteReport, String> {
    run_suite(name, &config).map_err(|e| e.to_string())
}

fn summarize(r: &SuiteReport) -> String {
    let first = r.failures.first().map(|f| format!(", first failure {f}")).unwrap_or_default();
    format!("{} checks passed, {} failed{first}", r.passed, r.failed)
}

fn from_suite(r: Result<SuiteReport, String>, extra: impl FnOnce(&SuiteReport) -> Result<String, String>) -> Outcome {
    match r {
        Err(e) => Outcome { ok: false, detail: e },
        Ok(r) => {
            let base = summarize(&r);
            match extra(&r) {
                Ok(more) if r.ok() && r.passed > 0 => Outcome { ok: true, detail: format!("{base}{more}") },
                Ok(more) => Outcome { ok: false, detail: format!("{base}{more}") },
                Err(why) => Outcome { ok: false, detail: format!("{base}; {why}") },
            }
        }
    }
}

fn config(trials: u64, orders: &[usize]) -> CampaignConfig {
    CampaignConfig { seed: 20240601, trials, orders: orders.to_vec(), ..CampaignConfig::default() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = suite("identity3", config(200, &[1, 2, 3, 4, 5]));
    let elapsed = start.elapsed();
    from_suite(r, |r| {
        // two checks per trial: value level and functional level
        if r.passed != 2 * 200 * 5 {
            return Err(format!("expected 2000 checks, got {}", r.passed));
        }
        if elapsed > Duration::from_secs(10) {
            return Err(format!("took {elapsed:?}"));
        }
        Ok(format!(" in {elapsed:.1?}"))
    })
}

fn criterion_2() -> Outcome {
    from_suite(suite("permutation", config(100, &[1, 2, 3, 4])), |r| {
        let expected = 100 * (1 + 2 + 6 + 24);
        if r.passed == expected { Ok(String::new()) } else { Err(format!("expected {expected} permutations checked")) }
    })
}

fn criterion_3() -> Outcome {
    from_suite(suite("reflection", config(200, &[1, 2, 3, 4, 5])), |r| {
        if r.passed == 1000 { Ok(String::new()) } else { Err("expected 1000 checks".into()) }
    })
}

fn criterion_4() -> Outcome {
    from_suite(suite("annihilation", config(100, &[1])), |_| Ok(String::new()))
}

fn criterion_5() -> Outcome {
    let cfg = CampaignConfig { soundness_functions: 100, ..config(100, &[1]) };
    from_suite(suite("extend-real", cfg), |r| {
        if r.stats["certificates"] != json!(100) {
            return Err(format!("generated {} certificates", r.stats["certificates"]));
        }
        Ok(format!(", largest certificate {} instances", r.stats["max_instances"]))
    })
}

fn criterion_6() -> Outcome {
    from_suite(suite("extend-padic", config(100, &[1])), |r| {
        if r.stats["certificates"] != json!(100) || r.stats["max_instances"].as_u64() > Some(2) {
            return Err(format!("unexpected sizes {}", r.stats["sizes"]));
        }
        if r.stats["telescoped"].as_u64().unwrap_or(0) == 0 {
            return Err("no telescoping certificate fit the budget".into());
        }
        Ok(format!(", {} telescoped", r.stats["telescoped"]))
    })
}

fn criterion_7() -> Outcome {
    from_suite(suite("equal-step", config(50, &[2, 3])), |r| {
        if r.stats["certificates"] == json!(200) { Ok(String::new()) } else { Err("expected 200 certificates".into()) }
    })
}

fn criterion_8() -> Outcome {
    from_suite(suite("interpolation", config(100, &[1])), |_| Ok(String::new()))
}

/// `Δ^3_{√2} f(2)` with `f(a + b√2) = a + b√2` on ℚ and `(a + b√2)^2`
/// elsewhere, computed on integer pairs.
fn witness_by_hand() -> (i64, i64) {
    let f = |a: i64, b: i64| if b == 0 { (a, 0) } else { (a * a + 2 * b * b, 2 * a * b) };
    let mut acc = (0, 0);
    for (j, c) in [(0, -1), (1, 3), (2, -3), (3, 1)] {
        let (a, b) = f(2, j);
        acc = (acc.0 + c * a, acc.1 + c * b);
    }
    acc
}

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    for p in [2u64, 3, 5, 7, 11] {
        let phi = BallIndicator::unit_ball(PAdicContext::with_prime(p).unwrap());
        match forward_difference(&phi, &rat(1, p as i64), &BigRational::zero()) {
            Ok(v) if v == int(-1) => {}
            other => problems.push(format!("p={p}: Δ_(1/p)φ(0) = {other:?}")),
        }
    }
    match remark1_witness() {
        Ok(w) if w.value == QuadraticElement::from(int(2)) && witness_by_hand() == (2, 0) => {}
        other => problems.push(format!("witness {other:?}, by hand {:?}", witness_by_hand())),
    }
    let outcome = from_suite(suite("counterexamples", config(1, &[3])), |r| {
        // 4 jumps, 500 flatness + 500 coarse-step jumps, 1 witness, 4 orders, 500 vanishing sums
        if r.passed == 4 + 1000 + 1 + 4 + 500 { Ok(String::new()) } else { Err("expected 1509 checks".to_string()) }
    });
    if problems.is_empty() {
        outcome
    } else {
        Outcome { ok: false, detail: problems.join("; ") }
    }
}

fn criterion_10() -> Outcome {
    let cfg = CampaignConfig { seed: 7, ..CampaignConfig::default() };
    let mut runs = Vec::new();
    for _ in 0..2 {
        let start = Instant::now();
        match run_campaign(&cfg) {
            Ok(r) => runs.push((r, start.elapsed())),
            Err(e) => return Outcome { ok: false, detail: e.to_string() },
        }
    }
    let (a, ta) = &runs[0];
    let (b, tb) = &runs[1];
    let identical = a.deterministic_json() == b.deterministic_json();
    let fast = *ta < Duration::from_secs(60) && *tb < Duration::from_secs(60);
    Outcome {
        ok: identical && fast && a.passed,
        detail: format!("reports identical: {identical}, campaign passed: {}, runs took {ta:.1?} and {tb:.1?}", a.passed),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("equal-step decomposition of mixed differences, s = 1..5", criterion_1),
        ("permutation invariance, s <= 4", criterion_2),
        ("reflection identity, s <= 5", criterion_3),
        ("polynomial annihilation and leading term, n <= 6", criterion_4),
        ("real extension certificates", criterion_5),
        ("p-adic extension certificates", criterion_6),
        ("equal-step extension, s in {2,3}", criterion_7),
        ("p-adic propagation and refinement", criterion_8),
        ("exact reference values", criterion_9),
        ("campaign determinism and runtime", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
