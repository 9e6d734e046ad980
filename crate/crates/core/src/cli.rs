//! The `frechet` command line.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or configuration error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::{parse_rational, BigRational, PAdicContext};
use crate::campaign::{run_campaign, run_suite, CampaignConfig};
use crate::difference::StepVector;
use crate::error::{Error, Result};
use crate::extension::{
    equal_step_extension_certificate, equal_step_hypothesis, minimal_telescope_exponent, mixed_extension_certificate,
    telescoping_padic_certificate, verify_certificate, Budgets, ExtensionCertificate, HypothesisDomain, Side,
    StepDomain,
};
use crate::gallery::TestFunction;
use crate::interpolation::{propagation_check, refinement_consistency};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "frechet", version, about = "Exact verification of restricted-step difference equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict the suite to a single order.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Certify Δ_h f(x) (or Δ_{h⋯h}) from steps in an open interval.
    ExtendReal {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        x: BigRational,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        h: BigRational,
        /// Endpoints `a,b` of the open interval.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        interval: (BigRational, BigRational),
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Certify Δ_h f(x) from steps outside a p-adic ball.
    ExtendPadic {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        x: BigRational,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        h: BigRational,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        center: BigRational,
        #[arg(long, allow_hyphen_values = true)]
        exponent: i64,
        /// Use the telescoping chain with auxiliary step p^{-m}.
        #[arg(long)]
        telescope: Option<u32>,
    },
    /// Certify a mixed difference from equal-step differences on one side of 0.
    EqualStep {
        #[arg(long, value_parser = parse_q)]
        delta: BigRational,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_parser = parse_q, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        steps: Vec<BigRational>,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true, default_value = "0")]
        x: BigRational,
    },
    /// Lagrange propagation along x0 + k·h0 and refinement by p^m.
    Interpolate {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        x0: BigRational,
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        h0: BigRational,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_parser = parse_krange, allow_hyphen_values = true)]
        krange: (i64, i64),
        #[arg(long)]
        refine: Option<i64>,
        /// `ball:CENTER,EXPONENT`, `poly:C0,C1,…` or `tabulated:SEED`.
        #[arg(long, default_value = "ball:0,0", allow_hyphen_values = true)]
        function: String,
    },
    /// Run the suites listed in a JSON config.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        prime: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Neg,
    Pos,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Neg => Side::Negative,
            SideArg::Pos => Side::Positive,
        }
    }
}

fn parse_q(s: &str) -> Result<BigRational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',').map(parse_q).collect()
}

fn parse_pair(s: &str) -> Result<(BigRational, BigRational), String> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(format!("expected two comma-separated values, got {s:?}")),
    }
}

fn parse_krange(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [lo, hi] => {
            let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
            let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
            if lo > hi {
                return Err(format!("empty range {lo},{hi}"));
            }
            Ok((lo, hi))
        }
        _ => Err(format!("expected lo,hi, got {s:?}")),
    }
}

/// Parses `ball:CENTER,EXPONENT`, `poly:C0,C1,…` or `tabulated:SEED`.
pub fn parse_function(spec: &str, context: &PAdicContext) -> Result<TestFunction> {
    let bad = || Error::InvalidConfig(format!("unrecognised function {spec:?}"));
    let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "ball" => {
            let (center, exponent) = args.split_once(',').ok_or_else(bad)?;
            let exponent = exponent.trim().parse().map_err(|_| bad())?;
            Ok(TestFunction::ball_indicator(parse_rational(center.trim())?, exponent, context.clone()))
        }
        "poly" => Ok(TestFunction::polynomial(args.split(',').map(|c| parse_rational(c.trim())).collect::<Result<_>>()?)),
        "tabulated" => Ok(TestFunction::tabulated(args.trim().parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

/// Outcome of a subcommand: a JSON document and whether every check passed.
struct Outcome {
    document: Value,
    passed: bool,
    report: Option<PathBuf>,
}

impl Outcome {
    fn stdout(document: Value, passed: bool) -> Self {
        Self { document, passed, report: None }
    }
}

/// Errors that mean "the claim is false" rather than "the input is bad".
fn is_verification_failure(e: &Error) -> bool {
    matches!(e, Error::VanishingHypothesisViolation { .. })
}

/// Parses `args` (including the program name), runs the command, prints or
/// writes the JSON report, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.document).expect("report serializes");
            match &outcome.report {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                }
                None => println!("{text}"),
            }
            if outcome.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let code = if is_verification_failure(&e) { EXIT_FAIL } else { EXIT_USAGE };
            println!("{}", json!({ "passed": false, "error": e.to_string() }));
            eprintln!("error: {e}");
            code
        }
    }
}

fn certificate_document(cert: &ExtensionCertificate, hyp: &HypothesisDomain) -> Outcome {
    let verdict = verify_certificate(cert, hyp);
    Outcome::stdout(
        json!({
            "passed": verdict.accepted(),
            "hypothesis": hyp.encode(),
            "size": cert.len(),
            "certificate": cert.encode(),
            "verdict": verdict.encode(),
        }),
        verdict.accepted(),
    )
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Verify { suite, trials, seed, order, prime } => {
            let mut config = CampaignConfig::default();
            if let Some(t) = trials {
                config.trials = t;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(s) = order {
                config.orders = vec![s];
            }
            config.prime = prime;
            config.suites = vec![suite.clone()];
            let report = run_suite(&suite, &config)?;
            let passed = report.ok();
            Ok(Outcome::stdout(json!({ "config": config, "passed": passed, "suite": report }), passed))
        }
        Command::ExtendReal { x, h, interval: (a, b), order } => {
            let domain = StepDomain::real_interval(a, b)?;
            let domains = vec![domain; order];
            let steps = StepVector::uniform(h, order)?;
            let cert = mixed_extension_certificate(&x, &steps, &domains, &Budgets::default())?;
            Ok(certificate_document(&cert, &HypothesisDomain::Mixed(domains)))
        }
        Command::ExtendPadic { prime, x, h, center, exponent, telescope } => {
            let context = PAdicContext::with_prime(prime)?;
            let domain = StepDomain::ball_complement(center, exponent, context);
            let hyp = HypothesisDomain::Mixed(vec![domain.clone()]);
            let cert = match telescope {
                Some(m) => telescoping_padic_certificate(&x, &h, &domain, m, &Budgets::default())?,
                None => mixed_extension_certificate(&x, &StepVector::uniform(h.clone(), 1)?, std::slice::from_ref(&domain), &Budgets::default())?,
            };
            let mut outcome = certificate_document(&cert, &hyp);
            outcome.document["minimal_telescope_m"] = json!(minimal_telescope_exponent(&h, &domain));
            Ok(outcome)
        }
        Command::EqualStep { delta, order, side, steps, x } => {
            if steps.len() != order {
                return Err(Error::InvalidConfig(format!("--order {order} but {} steps given", steps.len())));
            }
            let side = Side::from(side);
            let steps = StepVector::new(steps)?;
            let cert = equal_step_extension_certificate(&x, &steps, &delta, side, &Budgets::default())?;
            Ok(certificate_document(&cert, &equal_step_hypothesis(&delta, order, side)?))
        }
        Command::Interpolate { prime, x0, h0, degree, krange: (lo, hi), refine, function } => {
            let context = PAdicContext::with_prime(prime)?;
            let f = parse_function(&function, &context)?;
            let propagation = propagation_check(&f, &x0, &h0, degree, lo..=hi)?;
            let mut passed = propagation.agrees();
            let mut document = json!({
                "function": f.encode(),
                "propagation": propagation.encode(),
            });
            if let Some(m) = refine {
                let refinement = refinement_consistency(&f, &x0, &h0, degree, m, &context)?;
                passed &= refinement.consistent();
                document["refinement"] = refinement.encode();
            }
            document["passed"] = json!(passed);
            Ok(Outcome::stdout(document, passed))
        }
        Command::Campaign { config, report, seed, trials, prime } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", config.display())))?;
            let mut config = CampaignConfig::from_json(&text)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(t) = trials {
                config.trials = t;
            }
            if prime.is_some() {
                config.prime = prime;
            }
            let result = run_campaign(&config)?;
            let document = serde_json::to_value(&result).expect("report serializes");
            Ok(Outcome { document, passed: result.passed, report })
        }
    }
}
