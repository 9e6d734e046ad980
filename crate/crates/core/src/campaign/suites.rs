use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{run_trials, trial_rng, CampaignConfig, Check, SuiteReport};
use crate::arith::{int, rat, BigRational, PAdicContext, QuadraticElement, Scalar, Valuation};
use crate::difference::{
    czerwik_functional, czerwik_identity_check, equal_step_difference, mixed_difference, mixed_difference_recursive,
    permutation_invariance_check, permutations, reflection_identity_check, FormalFunctional, Function, StepVector,
};
use crate::error::{Error, Result};
use crate::extension::soundness::InstanceVanishingFn;
use crate::extension::{
    equal_step_extension_certificate, equal_step_hypothesis, minimal_telescope_exponent, mixed_extension_certificate,
    padic_order1_certificate, real_chain_length, real_order1_certificate, telescoping_padic_certificate,
    verify_certificate, ExtensionCertificate, HypothesisDomain, Side, StepDomain,
};
use crate::gallery::{
    ball_indicator_local_flatness, remark1_vanishing_check, remark1_witness, remark1_witness_for_order, BallIndicator,
    TabulatedFn,
};
use crate::interpolation::{local_reconstruct, propagation_check, refinement_consistency, DensePolynomial};

pub const SUITES: [&str; 11] = [
    "identity3",
    "permutation",
    "reflection",
    "annihilation",
    "ultrametric",
    "digits",
    "extend-real",
    "extend-padic",
    "equal-step",
    "interpolation",
    "counterexamples",
];

/// Numerators and denominators of random rationals stay within `2^16`.
const BOUND: i64 = 1 << 16;

pub(super) fn dispatch(name: &str, config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    match name {
        "identity3" => identity3(config, report),
        "permutation" => permutation(config, report),
        "reflection" => reflection(config, report),
        "annihilation" => annihilation(config, report),
        "ultrametric" => ultrametric(config, report),
        "digits" => digits(config, report),
        "extend-real" => extend_real(config, report),
        "extend-padic" => extend_padic(config, report),
        "equal-step" => equal_step(config, report),
        "interpolation" => interpolation(config, report),
        "counterexamples" => counterexamples(config, report),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

pub(crate) fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

pub(crate) fn random_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    loop {
        let r = random_rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A nonzero rational with numerator and denominator prime to `p`.
fn random_unit(rng: &mut ChaCha8Rng, p: u64, bound: i64) -> BigRational {
    let p = p as i64;
    loop {
        let n = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(1..=bound);
        if n % p != 0 && d % p != 0 {
            return rat(n, d);
        }
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, items: &[T]) -> T {
    items[rng.gen_range(0..items.len() as u64) as usize]
}

fn encode_all<S: Scalar>(v: &[S]) -> Vec<Value> {
    v.iter().map(Scalar::encode).collect()
}

fn per_order<T: Send>(
    config: &CampaignConfig,
    suite: &str,
    orders: &[usize],
    trial: impl Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send,
) -> Vec<T> {
    let trials = config.trials;
    let total = trials * orders.len() as u64;
    run_trials(total, |i| {
        let s = orders[(i / trials) as usize];
        let mut rng = trial_rng(config.seed, suite, i);
        trial(s, &mut rng)
    })
}

fn identity3(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let orders = config.orders_within(1, 6);
    let results = per_order(config, "identity3", &orders, |s, rng| {
        let f = TabulatedFn::new(rng.gen());
        let steps: Vec<BigRational> = (0..s).map(|_| random_rational(rng, BOUND)).collect();
        let x = random_rational(rng, BOUND);
        let input = || json!({ "order": s, "seed": f.seed(), "x": x.encode(), "steps": encode_all(&steps) });
        let st = StepVector::new(steps.clone()).expect("s >= 1");
        let mut checks = Vec::new();
        match czerwik_identity_check(&f, &st, &x) {
            Ok(r) => checks.push(Check::new(r.holds, || json!({ "input": input(), "report": r.encode() }))),
            Err(e) => checks.push(Check::error(input(), &e)),
        }
        let rhs = czerwik_functional(&st, &x);
        let lhs = FormalFunctional::mixed(&x, &st);
        checks.push(Check::new(rhs == lhs, || {
            json!({ "input": input(), "functional_lhs": lhs.encode(), "functional_rhs": rhs.encode() })
        }));
        checks
    });
    report.absorb(results.into_iter().flatten().collect());
    report.stat("orders", json!(orders));
    Ok(())
}

fn permutation(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let orders = config.orders_within(1, 4);
    let results = per_order(config, "permutation", &orders, |s, rng| {
        let f = TabulatedFn::new(rng.gen());
        let steps: Vec<BigRational> = (0..s).map(|_| random_rational(rng, BOUND)).collect();
        let x = random_rational(rng, BOUND);
        let st = StepVector::new(steps.clone()).expect("s >= 1");
        permutations(s)
            .into_iter()
            .map(|sigma| {
                let input = json!({ "order": s, "seed": f.seed(), "x": x.encode(), "steps": encode_all(&steps), "sigma": sigma });
                match permutation_invariance_check(&f, &st, &x, &sigma) {
                    Ok(r) => Check::new(r.holds, || json!({ "input": input, "report": r.encode() })),
                    Err(e) => Check::error(input, &e),
                }
            })
            .collect::<Vec<_>>()
    });
    report.absorb(results.into_iter().flatten().collect());
    report.stat("orders", json!(orders));
    Ok(())
}

fn reflection(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let orders = config.orders_within(1, 6);
    let results = per_order(config, "reflection", &orders, |s, rng| {
        let f = TabulatedFn::new(rng.gen());
        let h = random_rational(rng, BOUND);
        let x = random_rational(rng, BOUND);
        let input = json!({ "order": s, "seed": f.seed(), "x": x.encode(), "h": h.encode() });
        match reflection_identity_check(&f, &h, s, &x) {
            Ok(r) => Check::new(r.holds, || json!({ "input": input, "report": r.encode() })),
            Err(e) => Check::error(input, &e),
        }
    });
    report.absorb(results);
    report.stat("orders", json!(orders));
    Ok(())
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).fold(BigRational::one(), |acc, k| acc * int(k))
}

/// For every degree `n ≤ 6`: `Δ^{n+1}` kills a random degree-`n`
/// polynomial, `Δ^n_h x^n = n! h^n`, and mixed steps give `n! Π h_r`
/// (cross-checked against the literal recursion for `n ≤ 4`).
fn annihilation(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let degrees: Vec<usize> = (0..=6).collect();
    let results = per_order(config, "annihilation", &degrees, |n, rng| {
        let coefficients: Vec<BigRational> = (0..=n).map(|_| random_rational(rng, 1 << 10)).collect();
        let p = DensePolynomial::new(coefficients.clone());
        let monomial = DensePolynomial::new((0..=n).map(|k| if k == n { int(1) } else { int(0) }).collect());
        let x = random_rational(rng, 1 << 10);
        let h = random_rational(rng, 1 << 10);
        let steps: Vec<BigRational> = (0..n.max(1)).map(|_| random_rational(rng, 1 << 10)).collect();
        let input = || {
            json!({ "degree": n, "coefficients": encode_all(&coefficients), "x": x.encode(), "h": h.encode(), "steps": encode_all(&steps) })
        };
        let mut checks = Vec::new();
        let eval = |r: Result<BigRational>| r.expect("polynomials are total");

        let top = eval(equal_step_difference(&p, &h, n + 1, &x));
        checks.push(Check::new(top.is_zero(), || json!({ "input": input(), "check": "annihilation", "value": top.encode() })));

        let lead = eval(equal_step_difference(&monomial, &h, n, &x));
        let expected = factorial(n) * num_traits::Pow::pow(&h, n as u32);
        checks.push(Check::new(lead == expected, || {
            json!({ "input": input(), "check": "leading-term", "lhs": lead.encode(), "rhs": expected.encode() })
        }));

        if n >= 1 {
            let st = StepVector::new(steps.clone()).expect("n >= 1");
            let mixed = eval(mixed_difference(&monomial, &st, &x));
            let expected = steps.iter().fold(factorial(n), |acc, s| acc * s);
            checks.push(Check::new(mixed == expected, || {
                json!({ "input": input(), "check": "mixed-leading-term", "lhs": mixed.encode(), "rhs": expected.encode() })
            }));
            if n <= 4 {
                let brute = eval(mixed_difference_recursive(&monomial, &steps, &x));
                checks.push(Check::new(brute == mixed, || {
                    json!({ "input": input(), "check": "recursion", "lhs": mixed.encode(), "rhs": brute.encode() })
                }));
            }
        }
        checks
    });
    report.absorb(results.into_iter().flatten().collect());
    Ok(())
}

fn ultrametric(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let primes = config.primes();
    let results = run_trials(config.trials, |t| {
        let mut rng = trial_rng(config.seed, "ultrametric", t);
        let p = pick(&mut rng, &primes);
        let ctx = PAdicContext::with_prime(p).expect("validated prime");
        let vx = rng.gen_range(-6..=6i64);
        let mut vy = rng.gen_range(-6..=6i64);
        if vy == vx {
            vy += 1;
        }
        let x = random_unit(&mut rng, p, 1 << 12) * ctx.power(vx);
        let y = random_unit(&mut rng, p, 1 << 12) * ctx.power(vy);
        let input = json!({ "prime": p, "x": x.encode(), "y": y.encode() });
        let mut checks = Vec::new();
        match ctx.ultrametric_dominance(&x, &y) {
            Ok(r) => checks.push(Check::new(r.holds, || json!({ "input": input.clone(), "report": r }))),
            Err(e) => checks.push(Check::error(input.clone(), &e)),
        }
        let (v_x, v_y) = (ctx.valuation(&x), ctx.valuation(&y));
        let additive = ctx.valuation(&(&x * &y)) == Valuation::Finite(vx + vy);
        checks.push(Check::new(additive && v_x == vx && v_y == vy, || json!({ "input": input.clone(), "check": "additivity" })));
        // equal valuations: only the inequality is claimed
        let z = random_unit(&mut rng, p, 1 << 12) * ctx.power(vx);
        let sum_v = ctx.valuation(&(&x + &z));
        checks.push(Check::new(sum_v >= Valuation::Finite(vx), || {
            json!({ "input": input, "z": z.encode(), "check": "ultrametric-inequality", "valuation": sum_v.to_string() })
        }));
        checks
    });
    report.absorb(results.into_iter().flatten().collect());
    Ok(())
}

fn digits(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let primes = config.primes();
    let results = run_trials(config.trials, |t| {
        let mut rng = trial_rng(config.seed, "digits", t);
        let p = pick(&mut rng, &primes);
        let k = rng.gen_range(1..=12u64) as usize;
        let ctx = PAdicContext::new(p, k).expect("validated prime");
        let x = random_rational(&mut rng, BOUND);
        let view = ctx.digit_expansion(&x);
        let input = json!({ "prime": p, "precision": k, "x": x.encode() });
        let ok = match view.valuation {
            Valuation::Infinity => x.is_zero(),
            Valuation::Finite(m) => {
                let error = ctx.valuation(&(&x - view.partial_sum()));
                view.digits.len() == k
                    && view.digits[0] >= 1
                    && view.digits.iter().all(|&a| a < p)
                    && error >= Valuation::Finite(m + k as i64)
            }
        };
        Check::new(ok, || json!({ "input": input, "view": view.to_string() }))
    });
    report.absorb(results);
    Ok(())
}

/// Number of arbitrary tabulated functions each certificate is applied to.
const IDENTITY_FUNCTIONS: u64 = 3;

/// Applies a certificate to a few arbitrary tabulated functions (target
/// must equal the weighted instance sum) and, for order-1 certificates, to
/// `count` functions vanishing on every instance (target must vanish).
fn soundness_checks(cert: &ExtensionCertificate, base_seed: u64, count: u64, input: &Value) -> Vec<Check> {
    let expanded = match cert.instances.iter().map(|i| i.expand()).collect::<Result<Vec<_>>>() {
        Ok(e) => e,
        Err(e) => return vec![Check::error(input.clone(), &e)],
    };
    let weighted_sum = |f: &dyn Function<BigRational>| -> Result<BigRational> {
        let mut sum = BigRational::zero();
        for (inst, e) in cert.instances.iter().zip(&expanded) {
            sum += &inst.coefficient * e.apply(f)?;
        }
        Ok(sum)
    };
    let mut checks = Vec::new();
    for j in 0..count.min(IDENTITY_FUNCTIONS) {
        let seed = base_seed.wrapping_add(j);
        let f = TabulatedFn::new(seed);
        match cert.target.apply(&f).and_then(|t| Ok((t, weighted_sum(&f)?))) {
            Ok((target, sum)) => checks.push(Check::new(target == sum, || {
                json!({ "input": input, "check": "identity-on-tabulated", "seed": seed, "lhs": target.encode(), "rhs": sum.encode() })
            })),
            Err(e) => checks.push(Check::error(input.clone(), &e)),
        }
    }
    for j in 0..count {
        let seed = base_seed.wrapping_add(j);
        let Some(g) = InstanceVanishingFn::for_order_one(cert, seed) else { break };
        let vanishing = expanded.iter().all(|e| e.apply(&g).is_ok_and(|v| v.is_zero()));
        let target = cert.target.apply(&g);
        let ok = vanishing && target.as_ref().is_ok_and(|v| v.is_zero());
        checks.push(Check::new(ok, || {
            json!({ "input": input, "check": "vanishing-hypothesis", "seed": seed, "instances_vanish": vanishing,
                    "target": target.map(|v| v.encode()).unwrap_or(Value::Null) })
        }));
    }
    checks
}

struct CertOutcome {
    checks: Vec<Check>,
    size: Option<usize>,
}

fn summarize(report: &mut SuiteReport, outcomes: Vec<CertOutcome>, prefix: &str) {
    let sizes: Vec<usize> = outcomes.iter().filter_map(|o| o.size).collect();
    report.absorb(outcomes.into_iter().flat_map(|o| o.checks).collect());
    report.stat(&format!("{prefix}certificates"), sizes.len());
    report.stat(&format!("{prefix}total_instances"), sizes.iter().sum::<usize>());
    report.stat(&format!("{prefix}max_instances"), sizes.iter().copied().max().unwrap_or(0));
    report.stat(&format!("{prefix}sizes"), json!(sizes));
}

fn random_interval(rng: &mut ChaCha8Rng) -> (BigRational, BigRational) {
    let a = rat(rng.gen_range(-32..=32), rng.gen_range(1..=8));
    let width = rat(rng.gen_range(1..=32), 8);
    let b = &a + width;
    (a, b)
}

fn extend_real(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let outcomes = run_trials(config.trials, |t| {
        let mut rng = trial_rng(config.seed, "extend-real", t);
        let x = random_rational(&mut rng, BOUND);
        let h = random_nonzero(&mut rng, 1 << 4);
        let (a, b) = random_interval(&mut rng);
        let soundness_seed = rng.gen();
        let input = json!({ "x": x.encode(), "h": h.encode(), "a": a.encode(), "b": b.encode() });
        let domain = StepDomain::real_interval(a.clone(), b.clone()).expect("a < b");
        let cert = match real_order1_certificate(&x, &h, &domain) {
            Ok(c) => c,
            Err(e) => return CertOutcome { checks: vec![Check::error(input, &e)], size: None },
        };
        let hyp = HypothesisDomain::Mixed(vec![domain.clone()]);
        let verdict = verify_certificate(&cert, &hyp);
        let expected_size = if domain.contains(&h) {
            1
        } else {
            2 * real_chain_length(&h, &a, &b).to_usize().unwrap_or(usize::MAX)
        };
        let mut checks = vec![
            Check::new(verdict.accepted(), || json!({ "input": input, "verdict": verdict.encode() })),
            Check::new(cert.len() == expected_size, || {
                json!({ "input": input, "check": "size", "size": cert.len(), "expected": expected_size })
            }),
            Check::new(cert.target == FormalFunctional::forward(&x, &h), || json!({ "input": input, "check": "target" })),
        ];
        checks.extend(soundness_checks(&cert, soundness_seed, config.soundness_functions, &input));
        CertOutcome { checks, size: Some(cert.len()) }
    });
    summarize(report, outcomes, "");

    // small mixed certificates for the configured higher orders
    let orders = config.orders_within(2, 3);
    let mixed_trials = (config.trials / 10).max(1);
    let outcomes = run_trials(mixed_trials * orders.len() as u64, |i| {
        let s = orders[(i / mixed_trials) as usize];
        let mut rng = trial_rng(config.seed, "extend-real-mixed", i);
        let x = random_rational(&mut rng, BOUND);
        let domains: Vec<StepDomain> = (0..s)
            .map(|_| {
                let (a, b) = random_interval(&mut rng);
                StepDomain::real_interval(a, b).expect("a < b")
            })
            .collect();
        let steps: Vec<BigRational> = domains
            .iter()
            .map(|d| match d {
                StepDomain::RealOpenInterval { a, b } => random_nonzero(&mut rng, 1 << 4) * (b - a) / int(1 << 3),
                _ => unreachable!(),
            })
            .collect();
        let input = json!({ "order": s, "x": x.encode(), "steps": encode_all(&steps),
                            "domains": domains.iter().map(StepDomain::encode).collect::<Vec<_>>() });
        let st = StepVector::new(steps).expect("s >= 2");
        match mixed_extension_certificate(&x, &st, &domains, &config.budgets) {
            Ok(cert) => {
                let verdict = verify_certificate(&cert, &HypothesisDomain::Mixed(domains));
                let mut checks = vec![Check::new(verdict.accepted(), || json!({ "input": input, "verdict": verdict.encode() }))];
                checks.extend(soundness_checks(&cert, i, 3, &input));
                CertOutcome { checks, size: Some(cert.len()) }
            }
            Err(e) => CertOutcome { checks: vec![Check::error(input, &e)], size: None },
        }
    });
    summarize(report, outcomes, "mixed_");
    Ok(())
}

/// A step that lands in the excluded ball `center + p^{−N} ℤ_p` half of the time.
fn random_padic_step(rng: &mut ChaCha8Rng, center: &BigRational, exponent: i64, ctx: &PAdicContext) -> BigRational {
    if rng.gen_bool(0.5) {
        let shift = random_unit(rng, ctx.prime(), 1 << 8) * ctx.power(-exponent + rng.gen_range(0..=3));
        center + shift
    } else {
        random_rational(rng, 1 << 12)
    }
}

fn extend_padic(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let primes = config.primes();
    let mut telescoped = 0u64;
    let mut telescope_skipped = 0u64;
    let outcomes = run_trials(config.trials, |t| {
        let mut rng = trial_rng(config.seed, "extend-padic", t);
        let p = pick(&mut rng, &primes);
        let ctx = PAdicContext::with_prime(p).expect("validated prime");
        let center = if rng.gen_bool(0.5) { BigRational::zero() } else { random_rational(&mut rng, 1 << 10) };
        let exponent = rng.gen_range(-2..=2i64);
        let x = random_rational(&mut rng, BOUND);
        let h = random_padic_step(&mut rng, &center, exponent, &ctx);
        let soundness_seed = rng.gen();
        let input = json!({ "prime": p, "center": center.encode(), "exponent": exponent, "x": x.encode(), "h": h.encode() });
        let domain = StepDomain::ball_complement(center.clone(), exponent, ctx.clone());
        let hyp = HypothesisDomain::Mixed(vec![domain.clone()]);
        let cert = match padic_order1_certificate(&x, &h, &domain) {
            Ok(c) => c,
            Err(e) => return (CertOutcome { checks: vec![Check::error(input, &e)], size: None }, None),
        };
        let verdict = verify_certificate(&cert, &hyp);
        let expected_size = if domain.contains(&h) { 1 } else { 2 };
        let mut checks = vec![
            Check::new(verdict.accepted(), || json!({ "input": input, "verdict": verdict.encode() })),
            Check::new(cert.len() == expected_size, || {
                json!({ "input": input, "check": "size", "size": cert.len(), "expected": expected_size })
            }),
        ];
        checks.extend(soundness_checks(&cert, soundness_seed, config.soundness_functions.min(10), &input));

        // the long Case-1 chain, where it fits the budget
        let telescope = minimal_telescope_exponent(&h, &domain).and_then(|m| {
            telescoping_padic_certificate(&x, &h, &domain, m, &config.budgets).ok().map(|c| (m, c))
        });
        let telescoped = telescope.as_ref().map(|(m, tc)| {
            let v = verify_certificate(tc, &hyp);
            let f = TabulatedFn::new(soundness_seed);
            let agree = tc.target == cert.target
                && tc.target.apply(&f).ok() == cert.target.apply(&f).ok();
            checks.push(Check::new(v.accepted() && agree, || {
                json!({ "input": input, "check": "telescope", "m": m, "verdict": v.encode(), "targets_agree": agree })
            }));
            tc.len()
        });
        (CertOutcome { checks, size: Some(cert.len()) }, telescoped)
    });
    let mut telescope_sizes = Vec::new();
    let outcomes: Vec<CertOutcome> = outcomes
        .into_iter()
        .map(|(o, tel)| {
            match tel {
                Some(n) => {
                    telescoped += 1;
                    telescope_sizes.push(n);
                }
                None => telescope_skipped += 1,
            }
            o
        })
        .collect();
    summarize(report, outcomes, "");
    report.stat("telescoped", telescoped);
    report.stat("telescope_skipped", telescope_skipped);
    report.stat("telescope_max_instances", telescope_sizes.iter().copied().max().unwrap_or(0));

    if config.orders.contains(&2) {
        let mixed_trials = (config.trials / 10).max(1);
        let outcomes = run_trials(mixed_trials, |i| {
            let mut rng = trial_rng(config.seed, "extend-padic-mixed", i);
            let p = pick(&mut rng, &primes);
            let ctx = PAdicContext::with_prime(p).expect("validated prime");
            let domains: Vec<StepDomain> = (0..2)
                .map(|_| {
                    let center = if rng.gen_bool(0.5) { BigRational::zero() } else { random_rational(&mut rng, 1 << 10) };
                    StepDomain::ball_complement(center, rng.gen_range(-2..=2), ctx.clone())
                })
                .collect();
            let steps: Vec<BigRational> = domains
                .iter()
                .map(|d| match d {
                    StepDomain::PAdicBallComplement { center, exponent, .. } => {
                        random_padic_step(&mut rng, center, *exponent, &ctx)
                    }
                    _ => unreachable!(),
                })
                .collect();
            let x = random_rational(&mut rng, BOUND);
            let input = json!({ "prime": p, "x": x.encode(), "steps": encode_all(&steps),
                                "domains": domains.iter().map(StepDomain::encode).collect::<Vec<_>>() });
            let st = StepVector::new(steps).expect("two steps");
            match mixed_extension_certificate(&x, &st, &domains, &config.budgets) {
                Ok(cert) => {
                    let verdict = verify_certificate(&cert, &HypothesisDomain::Mixed(domains));
                    let ok = verdict.accepted() && cert.len() <= 4;
                    let mut checks = vec![Check::new(ok, || json!({ "input": input, "size": cert.len(), "verdict": verdict.encode() }))];
                    checks.extend(soundness_checks(&cert, i, 3, &input));
                    CertOutcome { checks, size: Some(cert.len()) }
                }
                Err(e) => CertOutcome { checks: vec![Check::error(input, &e)], size: None },
            }
        });
        summarize(report, outcomes, "mixed_");
    }
    Ok(())
}

fn equal_step(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let orders = config.orders_within(1, 3);
    let per_side = config.trials.min(50);
    let sides = [Side::Positive, Side::Negative];
    let combos: Vec<(usize, Side)> = orders.iter().flat_map(|&s| sides.iter().map(move |&d| (s, d))).collect();
    let outcomes = run_trials(per_side * combos.len() as u64, |i| {
        let (s, side) = combos[(i / per_side) as usize];
        let mut rng = trial_rng(config.seed, "equal-step", i);
        let delta = rat(rng.gen_range(1..=16), rng.gen_range(1..=8));
        let x = random_rational(&mut rng, BOUND);
        // |h| ≤ δ/2 keeps the chain multipliers at most s + 1
        let steps: Vec<BigRational> = (0..s)
            .map(|_| rat(rng.gen_range(-512..=512), 1024) * &delta)
            .collect();
        let input = json!({ "order": s, "side": side.as_str(), "delta": delta.encode(), "x": x.encode(), "steps": encode_all(&steps) });
        let st = StepVector::new(steps).expect("s >= 1");
        let cert = match equal_step_extension_certificate(&x, &st, &delta, side, &config.budgets) {
            Ok(c) => c,
            Err(e) => return CertOutcome { checks: vec![Check::error(input, &e)], size: None },
        };
        let strictly_inside = cert.instances.iter().all(|inst| {
            let h = &inst.steps[0];
            match side {
                Side::Positive => h.is_positive() && h < &delta,
                Side::Negative => h.is_negative() && h > &-delta.clone(),
            }
        });
        let hyp = equal_step_hypothesis(&delta, s, side).expect("delta > 0");
        let verdict = verify_certificate(&cert, &hyp);
        let mut checks = vec![
            Check::new(strictly_inside, || json!({ "input": input, "check": "steps-strictly-inside" })),
            Check::new(verdict.accepted(), || json!({ "input": input, "verdict": verdict.encode() })),
            Check::new(cert.target == FormalFunctional::mixed(&x, &st), || json!({ "input": input, "check": "target" })),
        ];
        checks.extend(soundness_checks(&cert, i, 2, &input));
        CertOutcome { checks, size: Some(cert.len()) }
    });
    summarize(report, outcomes, "");
    Ok(())
}

fn interpolation(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let primes = config.primes();
    let results = run_trials(config.trials, |t| {
        let mut rng = trial_rng(config.seed, "interpolation", t);
        let p = pick(&mut rng, &primes);
        let ctx = PAdicContext::with_prime(p).expect("validated prime");
        let n = rng.gen_range(0..=5u64) as usize;
        let coefficients: Vec<BigRational> = (0..=n).map(|_| random_rational(&mut rng, 1 << 8)).collect();
        let poly = DensePolynomial::new(coefficients.clone());
        let x0 = random_rational(&mut rng, 1 << 8);
        let h0 = random_nonzero(&mut rng, 1 << 8);
        let input = json!({ "prime": p, "degree": n, "coefficients": encode_all(&coefficients), "x0": x0.encode(), "h0": h0.encode() });
        let mut checks = Vec::new();

        match propagation_check(&poly, &x0, &h0, n, -20..=20) {
            Ok(r) => {
                let exact = r.polynomial == poly;
                checks.push(Check::new(r.agrees() && exact, || json!({ "input": input, "report": r.encode() })));
            }
            Err(e) => checks.push(Check::error(input.clone(), &e)),
        }
        for m in 0..=3 {
            match refinement_consistency(&poly, &x0, &h0, n, m, &ctx) {
                Ok(r) => checks.push(Check::new(r.consistent(), || json!({ "input": input, "m": m, "report": r.encode() }))),
                Err(e) => checks.push(Check::error(json!({ "input": input, "m": m }), &e)),
            }
        }
        let exponent = rng.gen_range(-2..=2i64);
        match local_reconstruct(&poly, &x0, exponent, n, &ctx, 10) {
            Ok(r) => checks.push(Check::new(r.locally_polynomial() && r.violations.is_empty(), || {
                json!({ "input": input, "check": "local", "report": r.encode() })
            })),
            Err(e) => checks.push(Check::error(input.clone(), &e)),
        }

        // negative control: a step one valuation too coarse crosses the ball boundary
        let center = random_rational(&mut rng, 1 << 8);
        let ball = BallIndicator::new(center.clone(), exponent, ctx.clone());
        let control = propagation_check(&ball, &center, &ctx.power(exponent - 1), 0, -5..=5);
        let flagged = matches!(control, Err(Error::VanishingHypothesisViolation { .. }));
        checks.push(Check::new(flagged, || {
            json!({ "input": input, "check": "negative-control", "center": center.encode(), "exponent": exponent })
        }));
        let local = local_reconstruct(&ball, &center, exponent - 1, 0, &ctx, 5);
        let flagged = local.as_ref().is_ok_and(|r| !r.locally_polynomial() && !r.violations.is_empty());
        checks.push(Check::new(flagged, || {
            json!({ "input": input, "check": "negative-control-local", "center": center.encode(), "exponent": exponent })
        }));
        checks
    });
    report.absorb(results.into_iter().flatten().collect());
    Ok(())
}

/// Sample count for the flatness and rational-step vanishing checks.
const COUNTEREXAMPLE_SAMPLES: u64 = 500;

fn counterexamples(config: &CampaignConfig, report: &mut SuiteReport) -> Result<()> {
    let mut checks = Vec::new();
    for p in config.primes() {
        let ctx = PAdicContext::with_prime(p).expect("validated prime");
        let phi = BallIndicator::unit_ball(ctx.clone());
        let jump = crate::difference::forward_difference(&phi, &rat(1, p as i64), &BigRational::zero())?;
        checks.push(Check::new(jump == int(-1), || json!({ "check": "unit-ball-jump", "prime": p, "value": jump.encode() })));
    }
    report.stat("unit_ball_jump", -1);

    let primes = config.primes();
    let flat = run_trials(COUNTEREXAMPLE_SAMPLES, |t| {
        let mut rng = trial_rng(config.seed, "counterexamples-flatness", t);
        let p = pick(&mut rng, &primes);
        let ctx = PAdicContext::with_prime(p).expect("validated prime");
        let center = if t % 2 == 0 { BigRational::zero() } else { random_rational(&mut rng, 1 << 8) };
        let exponent = if t % 2 == 0 { 0 } else { rng.gen_range(-2..=2i64) };
        let ball = BallIndicator::new(center.clone(), exponent, ctx.clone());
        let x = random_rational(&mut rng, 1 << 12);
        let h = random_unit(&mut rng, p, 1 << 8) * ctx.power(exponent + rng.gen_range(0..=3));
        let input = json!({ "prime": p, "center": center.encode(), "exponent": exponent, "x": x.encode(), "h": h.encode() });
        let mut out = vec![match ball_indicator_local_flatness(&ball, &x, &h) {
            Ok(r) => Check::new(r.holds, || json!({ "input": input, "report": r.encode() })),
            Err(e) => Check::error(input.clone(), &e),
        }];
        // one valuation coarser, the indicator jumps at the center
        let coarse = ctx.power(exponent - 1);
        let jump = crate::difference::forward_difference(&ball, &coarse, &center);
        out.push(Check::new(jump.as_ref().is_ok_and(|v| !v.is_zero()), || {
            json!({ "input": input, "check": "jump-at-center" })
        }));
        out
    });
    checks.extend(flat.into_iter().flatten());

    let witness = remark1_witness()?;
    checks.push(Check::new(witness.value == QuadraticElement::from(int(2)), || {
        json!({ "check": "remark1-witness", "witness": witness.encode() })
    }));
    report.stat("remark1_witness", witness.encode());
    let mut witnesses = Vec::new();
    for s in 1..=4 {
        let w = remark1_witness_for_order(s)?;
        checks.push(Check::new(w.is_some(), || json!({ "check": "remark1-witness-order", "order": s })));
        witnesses.push(w.map(|w| w.encode()).unwrap_or(Value::Null));
    }
    report.stat("remark1_witnesses_by_order", witnesses);

    let vanishing = run_trials(COUNTEREXAMPLE_SAMPLES, |t| {
        let mut rng = trial_rng(config.seed, "counterexamples-remark1", t);
        let x = QuadraticElement::<2>::new(random_rational(&mut rng, 1 << 8), random_rational(&mut rng, 1 << 8));
        let steps = [(); 3].map(|_| QuadraticElement::from(random_rational(&mut rng, 1 << 8)));
        let input = json!({ "x": x.encode(), "steps": encode_all(&steps) });
        match remark1_vanishing_check(&steps, &x) {
            Ok(r) => Check::new(r.holds, || json!({ "input": input, "report": r.encode() })),
            Err(e) => Check::error(input, &e),
        }
    });
    checks.extend(vanishing);
    report.absorb(checks);
    Ok(())
}
