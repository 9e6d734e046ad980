use serde_json::{json, Value};

use crate::arith::{to_canonical, BigRational, PAdicContext, Valuation};
use crate::error::{Error, Result};

/// Where a single step is allowed to range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepDomain {
    /// The open interval `(a, b)`, endpoints excluded.
    RealOpenInterval { a: BigRational, b: BigRational },
    /// `ℚ_p ∖ (center + p^{−exponent} ℤ_p)`, i.e. `|h − center|_p > p^exponent`.
    PAdicBallComplement { center: BigRational, exponent: i64, context: PAdicContext },
    FullSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Family {
    Any,
    Real,
    PAdic(u64),
}

impl StepDomain {
    pub fn real_interval(a: BigRational, b: BigRational) -> Result<Self> {
        if a >= b {
            return Err(Error::DegenerateInterval { a: to_canonical(&a), b: to_canonical(&b) });
        }
        Ok(StepDomain::RealOpenInterval { a, b })
    }

    pub fn ball_complement(center: BigRational, exponent: i64, context: PAdicContext) -> Self {
        StepDomain::PAdicBallComplement { center, exponent, context }
    }

    pub fn contains(&self, h: &BigRational) -> bool {
        match self {
            StepDomain::RealOpenInterval { a, b } => a < h && h < b,
            StepDomain::PAdicBallComplement { center, exponent, context } => {
                context.valuation(&(h - center)) < Valuation::Finite(-exponent)
            }
            StepDomain::FullSpace => true,
        }
    }

    pub(crate) fn family(&self) -> Family {
        match self {
            StepDomain::RealOpenInterval { .. } => Family::Real,
            StepDomain::PAdicBallComplement { context, .. } => Family::PAdic(context.prime()),
            StepDomain::FullSpace => Family::Any,
        }
    }

    pub fn encode(&self) -> Value {
        match self {
            StepDomain::RealOpenInterval { a, b } => json!({
                "domain": "real-open-interval",
                "a": to_canonical(a),
                "b": to_canonical(b),
            }),
            StepDomain::PAdicBallComplement { center, exponent, context } => json!({
                "domain": "padic-ball-complement",
                "center": to_canonical(center),
                "exponent": exponent,
                "prime": context.prime(),
            }),
            StepDomain::FullSpace => json!({ "domain": "full-space" }),
        }
    }
}

/// The steps for which the difference equation is assumed to hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisDomain {
    /// `Δ_{h_1⋯h_s} f = 0` for `h_k ∈ D_k`.
    Mixed(Vec<StepDomain>),
    /// `Δ_h^s f = 0` for `h` in the interval.
    EqualStep { interval: StepDomain, order: usize },
}

impl HypothesisDomain {
    pub fn order(&self) -> usize {
        match self {
            HypothesisDomain::Mixed(d) => d.len(),
            HypothesisDomain::EqualStep { order, .. } => *order,
        }
    }

    pub fn encode(&self) -> Value {
        match self {
            HypothesisDomain::Mixed(d) => json!({
                "mode": "mixed",
                "domains": d.iter().map(StepDomain::encode).collect::<Vec<_>>(),
            }),
            HypothesisDomain::EqualStep { interval, order } => json!({
                "mode": "equal-step",
                "interval": interval.encode(),
                "order": order,
            }),
        }
    }
}

/// Checks that all domains live in one scalar family.
pub(crate) fn uniform_family(domains: &[StepDomain]) -> Result<Family> {
    let mut family = Family::Any;
    for d in domains {
        match (family, d.family()) {
            (_, Family::Any) => {}
            (Family::Any, f) => family = f,
            (f, g) if f == g => {}
            _ => return Err(Error::MixedScalarFamilies),
        }
    }
    Ok(family)
}
