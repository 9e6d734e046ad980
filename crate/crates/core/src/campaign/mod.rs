//! Seeded verification campaigns with deterministic JSON reports.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, suite,
//! trial)`, so trials can run in parallel while the report, apart from
//! `timings_ms`, is byte-identical across runs.

mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::PAdicContext;
use crate::error::{Error, Result};
use crate::extension::Budgets;

pub use suites::SUITES;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: u64,
    pub orders: Vec<usize>,
    pub prime: Option<u64>,
    pub suites: Vec<String>,
    pub budgets: Budgets,
    /// Tabulated functions applied to each accepted certificate.
    pub soundness_functions: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            orders: vec![1, 2, 3, 4, 5],
            prime: None,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            budgets: Budgets::default(),
            soundness_functions: 100,
        }
    }
}

impl CampaignConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.orders.is_empty() || self.orders.iter().any(|&s| !(1..=6).contains(&s)) {
            return Err(Error::InvalidConfig(format!("orders {:?} must be a nonempty subset of 1..=6", self.orders)));
        }
        if let Some(p) = self.prime {
            PAdicContext::with_prime(p).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(Error::UnknownSuite(s.clone()));
            }
        }
        Ok(())
    }

    pub(crate) fn primes(&self) -> Vec<u64> {
        match self.prime {
            Some(p) => vec![p],
            None => vec![2, 3, 5, 7],
        }
    }

    pub(crate) fn orders_within(&self, lo: usize, hi: usize) -> Vec<usize> {
        self.orders.iter().copied().filter(|s| (lo..=hi).contains(s)).collect()
    }
}

/// Results of one suite. Failure payloads carry the inputs and both sides
/// of any violated equality, serialized exactly.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<Value>,
    pub stats: BTreeMap<String, Value>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), ..Self::default() }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn absorb(&mut self, checks: Vec<Check>) {
        for c in checks {
            if c.ok {
                self.passed += 1;
            } else {
                self.failed += 1;
                self.failures.push(c.payload);
            }
        }
    }

    fn stat(&mut self, key: &str, value: impl Into<Value>) {
        self.stats.insert(key.to_string(), value.into());
    }
}

/// One pass/fail verdict; the payload is kept only for failures.
pub(crate) struct Check {
    ok: bool,
    payload: Value,
}

impl Check {
    pub(crate) fn new(ok: bool, payload: impl FnOnce() -> Value) -> Self {
        Self { ok, payload: if ok { Value::Null } else { payload() } }
    }

    pub(crate) fn error(context: Value, e: &Error) -> Self {
        Self { ok: false, payload: serde_json::json!({ "input": context, "error": e.to_string() }) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    /// Wall-clock milliseconds per suite; the only nondeterministic field.
    pub timings_ms: BTreeMap<String, u64>,
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with `timings_ms` removed.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timings_ms");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

pub(crate) fn trial_rng(seed: u64, suite: &str, trial: u64) -> ChaCha8Rng {
    // FNV-1a over the suite name keeps streams of different suites apart
    let suite_key = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ suite_key ^ trial.wrapping_mul(0xbf58_476d_1ce4_e5b9),
    )
}

/// Runs `trial` for every index in parallel and returns results in index order.
pub(crate) fn run_trials<T: Send>(count: u64, trial: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..count).into_par_iter().map(trial).collect()
}

pub fn run_suite(name: &str, config: &CampaignConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut report = SuiteReport::new(name);
    suites::dispatch(name, config, &mut report)?;
    Ok(report)
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let mut suites = Vec::with_capacity(config.suites.len());
    let mut timings_ms = BTreeMap::new();
    for name in &config.suites {
        let start = Instant::now();
        suites.push(run_suite(name, config)?);
        timings_ms.insert(name.clone(), start.elapsed().as_millis() as u64);
    }
    let passed = suites.iter().all(SuiteReport::ok);
    Ok(CampaignReport { config: config.clone(), passed, suites, timings_ms })
}
