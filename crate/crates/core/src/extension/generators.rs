//! Certificate generators. Each order-1 recipe rewrites `Δ_h` at a point as
//! a signed sum of `Δ_g` at other points with `g` in the step domain; being
//! an identity of functionals, it applies verbatim to `Δ_h G` for any `G`,
//! which is how the mixed and equal-step generators compose it.

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::certificate::{ExtensionCertificate, Instance, Provenance};
use super::domain::{uniform_family, HypothesisDomain, StepDomain};
use crate::arith::{int, to_canonical, BigRational, PAdicContext, Valuation};
use crate::difference::{epsilon_terms, FormalFunctional, OperatorKind, StepVector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub max_certificate_instances: usize,
    pub max_telescope_length: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { max_certificate_instances: 100_000, max_telescope_length: 4096 }
    }
}

/// `coefficient · Δ_step f(base)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order1Term {
    pub coefficient: BigRational,
    pub base: BigRational,
    pub step: BigRational,
}

impl Order1Term {
    fn new(coefficient: BigRational, base: BigRational, step: BigRational) -> Self {
        Self { coefficient, base, step }
    }
}

/// Chain multiplier `k = ⌊2|h|/(b − a)⌋ + 1`; then `|h|/k < (b − a)/2`.
pub fn real_chain_length(h: &BigRational, a: &BigRational, b: &BigRational) -> BigInt {
    (int(2) * h.abs() / (b - a)).floor().to_integer() + BigInt::one()
}

/// Two telescoping chains `Σ_j Δ_{h₁}[x + j h₁] − Σ_j Δ_{h₂}[x + h + j h₂]`
/// with `h₂ = (a+b)/2 − h/(2k)`, `h₁ = h₂ + h/k`; they meet because
/// `k h₁ = h + k h₂`.
pub fn real_order1_terms(x: &BigRational, h: &BigRational, a: &BigRational, b: &BigRational) -> Result<Vec<Order1Term>> {
    if a >= b {
        return Err(Error::DegenerateInterval { a: to_canonical(a), b: to_canonical(b) });
    }
    if a < h && h < b {
        return Ok(vec![Order1Term::new(BigRational::one(), x.clone(), h.clone())]);
    }
    let k_big = real_chain_length(h, a, b);
    let k = k_big.to_i64().ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: usize::MAX })?;
    let kq = BigRational::from_integer(k_big);
    let mid = (a + b) / int(2);
    let h2 = &mid - h / (int(2) * &kq);
    let h1 = &h2 + h / &kq;
    let mut terms = Vec::with_capacity(2 * k as usize);
    for j in 0..k {
        let jq = int(j);
        terms.push(Order1Term::new(BigRational::one(), x + &jq * &h1, h1.clone()));
    }
    for j in 0..k {
        let jq = int(j);
        terms.push(Order1Term::new(-BigRational::one(), x + h + &jq * &h2, h2.clone()));
    }
    Ok(terms)
}

/// Auxiliary step `u = p^{−M}`, `M = max(N, k₀) + 1` with `|a|_p = p^{k₀}`
/// (`k₀ = N` for `a = 0`). Both `u` and `u + h` then have absolute value
/// `p^M > p^N` relative to `a` whenever `h` is inside the excluded ball.
pub fn padic_auxiliary_step(center: &BigRational, exponent: i64, context: &PAdicContext) -> BigRational {
    let k0 = match context.valuation(center) {
        Valuation::Finite(v) => -v,
        Valuation::Infinity => exponent,
    };
    context.power(-(exponent.max(k0) + 1))
}

/// `Δ_h[x] = Δ_{u+h}[x] − Δ_u[x + h]`.
pub fn padic_order1_terms(
    x: &BigRational,
    h: &BigRational,
    center: &BigRational,
    exponent: i64,
    context: &PAdicContext,
) -> Vec<Order1Term> {
    let domain = StepDomain::ball_complement(center.clone(), exponent, context.clone());
    if domain.contains(h) {
        return vec![Order1Term::new(BigRational::one(), x.clone(), h.clone())];
    }
    let u = padic_auxiliary_step(center, exponent, context);
    vec![
        Order1Term::new(BigRational::one(), x.clone(), &u + h),
        Order1Term::new(-BigRational::one(), x + h, u),
    ]
}

/// `Δ_h[x] = Σ_{j<p^m} Δ_{h/p^m}[x + j h/p^m]`.
pub fn telescoping_terms(
    x: &BigRational,
    h: &BigRational,
    domain: &StepDomain,
    m: u32,
    max_length: usize,
) -> Result<Vec<Order1Term>> {
    let StepDomain::PAdicBallComplement { context, .. } = domain else {
        return Err(Error::UnsupportedDomain("telescoping needs a p-adic ball complement".into()));
    };
    let length = BigInt::from(context.prime()).pow(m);
    let needed = length.to_u128().unwrap_or(u128::MAX);
    if needed > max_length as u128 {
        return Err(Error::BudgetExceeded { needed, budget: max_length });
    }
    let step = h / context.power(m as i64);
    if !domain.contains(&step) {
        return Err(Error::StepStillInsideBall { step: to_canonical(&step) });
    }
    Ok((0..needed as i64)
        .map(|j| Order1Term::new(BigRational::one(), x + int(j) * &step, step.clone()))
        .collect())
}

/// Smallest `m ≥ 0` with `h/p^m` in the ball complement.
pub fn minimal_telescope_exponent(h: &BigRational, domain: &StepDomain) -> Option<u32> {
    let StepDomain::PAdicBallComplement { context, .. } = domain else {
        return None;
    };
    (0..=64u32).find(|&m| domain.contains(&(h / context.power(m as i64))))
}

/// Order-1 decomposition into the given domain.
pub fn order1_terms(x: &BigRational, h: &BigRational, domain: &StepDomain) -> Result<Vec<Order1Term>> {
    match domain {
        StepDomain::RealOpenInterval { a, b } => real_order1_terms(x, h, a, b),
        StepDomain::PAdicBallComplement { center, exponent, context } => {
            Ok(padic_order1_terms(x, h, center, *exponent, context))
        }
        StepDomain::FullSpace => Ok(vec![Order1Term::new(BigRational::one(), x.clone(), h.clone())]),
    }
}

fn order1_count(h: &BigRational, domain: &StepDomain) -> u128 {
    match domain {
        StepDomain::RealOpenInterval { a, b } if !(a < h && h < b) => {
            (real_chain_length(h, a, b) * 2u32).to_u128().unwrap_or(u128::MAX)
        }
        StepDomain::PAdicBallComplement { .. } if !domain.contains(h) => 2,
        _ => 1,
    }
}

fn order1_certificate(x: &BigRational, h: &BigRational, terms: Vec<Order1Term>, provenance: Provenance) -> ExtensionCertificate {
    let instances = terms
        .into_iter()
        .map(|t| Instance { coefficient: t.coefficient, kind: OperatorKind::Mixed, base: t.base, steps: vec![t.step] })
        .collect();
    ExtensionCertificate::new(FormalFunctional::forward(x, h), instances, provenance)
}

pub fn real_order1_certificate(x: &BigRational, h: &BigRational, interval: &StepDomain) -> Result<ExtensionCertificate> {
    let StepDomain::RealOpenInterval { a, b } = interval else {
        return Err(Error::UnsupportedDomain("expected a real open interval".into()));
    };
    let terms = real_order1_terms(x, h, a, b)?;
    let provenance = Provenance::new("real-order1-two-chain")
        .with("x", to_canonical(x))
        .with("h", to_canonical(h))
        .with("a", to_canonical(a))
        .with("b", to_canonical(b))
        .with("k", real_chain_length(h, a, b));
    Ok(order1_certificate(x, h, terms, provenance))
}

pub fn padic_order1_certificate(x: &BigRational, h: &BigRational, domain: &StepDomain) -> Result<ExtensionCertificate> {
    let StepDomain::PAdicBallComplement { center, exponent, context } = domain else {
        return Err(Error::UnsupportedDomain("expected a p-adic ball complement".into()));
    };
    let terms = padic_order1_terms(x, h, center, *exponent, context);
    let provenance = Provenance::new("padic-order1-shift")
        .with("x", to_canonical(x))
        .with("h", to_canonical(h))
        .with("center", to_canonical(center))
        .with("exponent", exponent)
        .with("prime", context.prime())
        .with("u", to_canonical(&padic_auxiliary_step(center, *exponent, context)));
    Ok(order1_certificate(x, h, terms, provenance))
}

pub fn telescoping_padic_certificate(
    x: &BigRational,
    h: &BigRational,
    domain: &StepDomain,
    m: u32,
    budgets: &Budgets,
) -> Result<ExtensionCertificate> {
    let terms = telescoping_terms(x, h, domain, m, budgets.max_telescope_length)?;
    let provenance = Provenance::new("padic-order1-telescope")
        .with("x", to_canonical(x))
        .with("h", to_canonical(h))
        .with("m", m);
    Ok(order1_certificate(x, h, terms, provenance))
}

/// Mixed instances `(base, steps) ↦ coefficient`, first-seen order.
type MixedTerms = IndexMap<(BigRational, Vec<BigRational>), BigRational>;

/// Applies the order-1 recipe of each coordinate in turn; by permutation
/// symmetry coordinate `k` can be moved to the front, decomposed, and moved
/// back while the other steps stay put.
fn compose_mixed(
    x: &BigRational,
    steps: &StepVector<BigRational>,
    domains: &[StepDomain],
    budgets: &Budgets,
) -> Result<MixedTerms> {
    if domains.len() != steps.order() {
        return Err(Error::PreconditionViolation(format!(
            "{} steps but {} hypothesis domains",
            steps.order(),
            domains.len()
        )));
    }
    uniform_family(domains)?;
    let needed = steps
        .steps()
        .iter()
        .zip(domains)
        .fold(1u128, |acc, (h, d)| acc.saturating_mul(order1_count(h, d)));
    if needed > budgets.max_certificate_instances as u128 {
        return Err(Error::BudgetExceeded { needed, budget: budgets.max_certificate_instances });
    }

    let mut current = MixedTerms::new();
    current.insert((x.clone(), steps.steps().to_vec()), BigRational::one());
    for (k, domain) in domains.iter().enumerate() {
        let mut next = MixedTerms::new();
        for ((base, st), c) in current {
            for t in order1_terms(&base, &st[k], domain)? {
                let mut new_steps = st.clone();
                new_steps[k] = t.step;
                *next.entry((t.base, new_steps)).or_insert_with(BigRational::zero) += &c * &t.coefficient;
            }
        }
        next.retain(|_, c| !c.is_zero());
        current = next;
    }
    Ok(current)
}

pub fn mixed_extension_certificate(
    x: &BigRational,
    steps: &StepVector<BigRational>,
    domains: &[StepDomain],
    budgets: &Budgets,
) -> Result<ExtensionCertificate> {
    if let ([h], [d]) = (steps.steps(), domains) {
        return match d {
            StepDomain::RealOpenInterval { .. } => real_order1_certificate(x, h, d),
            StepDomain::PAdicBallComplement { .. } => padic_order1_certificate(x, h, d),
            StepDomain::FullSpace => Ok(order1_certificate(x, h, order1_terms(x, h, d)?, Provenance::new("identity"))),
        };
    }
    let terms = compose_mixed(x, steps, domains, budgets)?;
    let instances = terms
        .into_iter()
        .map(|((base, st), coefficient)| Instance { coefficient, kind: OperatorKind::Mixed, base, steps: st })
        .collect();
    let provenance = Provenance::new("mixed-coordinatewise")
        .with("x", to_canonical(x))
        .with("steps", steps.steps().iter().map(to_canonical).collect::<Vec<_>>().join(","))
        .with("order", steps.order());
    Ok(ExtensionCertificate::new(FormalFunctional::mixed(x, steps), instances, provenance))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[serde(alias = "neg")]
    Negative,
    #[serde(alias = "pos")]
    Positive,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Negative => "neg",
            Side::Positive => "pos",
        }
    }
}

/// The hypothesis `Δ_h^s f = 0` for `h ∈ (0, δ)` or `(−δ, 0)`.
pub fn equal_step_hypothesis(delta: &BigRational, order: usize, side: Side) -> Result<HypothesisDomain> {
    let interval = match side {
        Side::Positive => StepDomain::real_interval(BigRational::zero(), delta.clone())?,
        Side::Negative => StepDomain::real_interval(-delta.clone(), BigRational::zero())?,
    };
    Ok(HypothesisDomain::EqualStep { interval, order })
}

/// Rewrites `Δ_{h_1⋯h_s}` at `x` into equal-step differences with steps in
/// `(0, δ)` (or `(−δ, 0)`):
///
/// 1. a mixed certificate puts every step in `(−δ/s, 0)`;
/// 2. each mixed instance splits into `Σ_{ε≠0} (−1)^{|ε|} Δ^s_{α(ε)}[y + β(ε)]`,
///    where `0 < α(ε) < δ·H_s/s ≤ δ`;
/// 3. for the negative side, `Δ^s_α[z] = (−1)^s Δ^s_{−α}[z + sα]`.
pub fn equal_step_extension_certificate(
    x: &BigRational,
    steps: &StepVector<BigRational>,
    delta: &BigRational,
    side: Side,
    budgets: &Budgets,
) -> Result<ExtensionCertificate> {
    if !delta.is_positive() {
        return Err(Error::DegenerateInterval { a: "0/1".into(), b: to_canonical(delta) });
    }
    let s = steps.order();
    let narrow = StepDomain::real_interval(-(delta / int(s as i64)), BigRational::zero())?;
    let mixed = compose_mixed(x, steps, &vec![narrow; s], budgets)?;
    let per_instance = (1u128 << s) - 1;
    let needed = (mixed.len() as u128).saturating_mul(per_instance);
    if needed > budgets.max_certificate_instances as u128 {
        return Err(Error::BudgetExceeded { needed, budget: budgets.max_certificate_instances });
    }

    let s_q = int(s as i64);
    let reflect_sign = if s.is_odd() { -BigRational::one() } else { BigRational::one() };
    let mut instances = Vec::with_capacity(needed as usize);
    for ((base, st), c) in mixed {
        let st = StepVector::new(st)?;
        for term in epsilon_terms(&st).into_iter().filter(|t| !t.is_trivial()) {
            let coefficient = &c * BigRational::from_integer(term.sign.into());
            let shifted = &base + &term.beta;
            let (coefficient, base, step) = match side {
                Side::Positive => (coefficient, shifted, term.alpha),
                Side::Negative => (coefficient * &reflect_sign, shifted + &s_q * &term.alpha, -term.alpha),
            };
            instances.push(Instance { coefficient, kind: OperatorKind::EqualStep, base, steps: vec![step; s] });
        }
    }
    let provenance = Provenance::new("equal-step-harmonic")
        .with("x", to_canonical(x))
        .with("steps", steps.steps().iter().map(to_canonical).collect::<Vec<_>>().join(","))
        .with("delta", to_canonical(delta))
        .with("side", side.as_str());
    Ok(ExtensionCertificate::new(FormalFunctional::mixed(x, steps), instances, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::extension::verify_certificate;

    fn interval(a: BigRational, b: BigRational) -> StepDomain {
        StepDomain::real_interval(a, b).unwrap()
    }

    fn mixed_hyp(d: &StepDomain, s: usize) -> HypothesisDomain {
        HypothesisDomain::Mixed(vec![d.clone(); s])
    }

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::with_prime(p).unwrap()
    }

    #[test]
    fn real_single_instance_inside() {
        let d = interval(int(1), int(2));
        let c = real_order1_certificate(&int(4), &rat(3, 2), &d).unwrap();
        assert_eq!(c.len(), 1);
        assert!(verify_certificate(&c, &mixed_hyp(&d, 1)).accepted());
    }

    #[test]
    fn real_two_chain_values() {
        let (a, b, h) = (int(1), int(2), int(10));
        assert_eq!(real_chain_length(&h, &a, &b), BigInt::from(21));
        let terms = real_order1_terms(&int(0), &h, &a, &b).unwrap();
        assert_eq!(terms.len(), 42);
        assert_eq!(terms[0].step, rat(73, 42));
        assert_eq!(terms[21].step, rat(53, 42));
        assert_eq!(int(21) * rat(73, 42), int(10) + int(21) * rat(53, 42));

        let d = interval(a, b);
        for h in [int(10), int(-10), int(0), rat(7, 3)] {
            let c = real_order1_certificate(&int(0), &h, &d).unwrap();
            assert!(verify_certificate(&c, &mixed_hyp(&d, 1)).accepted(), "h = {h}");
        }
    }

    #[test]
    fn real_interval_containing_zero() {
        let d = interval(rat(-1, 3), rat(1, 5));
        let c = real_order1_certificate(&rat(2, 9), &int(-17), &d).unwrap();
        assert!(verify_certificate(&c, &mixed_hyp(&d, 1)).accepted());
    }

    #[test]
    fn padic_shift_examples() {
        let d = StepDomain::ball_complement(int(0), 1, ctx(3));
        let c = padic_order1_certificate(&int(0), &rat(1, 3), &d).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.instances[0].steps, vec![rat(4, 9)]);
        assert_eq!((c.instances[1].base.clone(), c.instances[1].steps.clone()), (rat(1, 3), vec![rat(1, 9)]));
        assert!(verify_certificate(&c, &mixed_hyp(&d, 1)).accepted());

        let d = StepDomain::ball_complement(int(9), 0, ctx(3));
        assert_eq!(padic_auxiliary_step(&int(9), 0, &ctx(3)), rat(1, 3));
        let c = padic_order1_certificate(&int(5), &int(2), &d).unwrap();
        assert!(verify_certificate(&c, &mixed_hyp(&d, 1)).accepted());

        let c = padic_order1_certificate(&int(5), &rat(1, 27), &d).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn telescoping_examples() {
        let d = StepDomain::ball_complement(int(0), 0, ctx(2));
        let c = telescoping_padic_certificate(&int(0), &int(1), &d, 1, &Budgets::default()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.instances[1].base, rat(1, 2));
        assert!(verify_certificate(&c, &mixed_hyp(&d, 1)).accepted());

        let c = telescoping_padic_certificate(&int(0), &rat(1, 4), &d, 0, &Budgets::default()).unwrap();
        assert_eq!(c.len(), 1);

        let d3 = StepDomain::ball_complement(int(0), 1, ctx(3));
        assert!(matches!(
            telescoping_padic_certificate(&int(0), &int(1), &d3, 1, &Budgets::default()),
            Err(Error::StepStillInsideBall { .. })
        ));
        let tight = Budgets { max_telescope_length: 8, ..Budgets::default() };
        assert!(matches!(
            telescoping_padic_certificate(&int(0), &int(1), &d3, 2, &tight),
            Err(Error::BudgetExceeded { needed: 9, budget: 8 })
        ));
        assert_eq!(minimal_telescope_exponent(&int(1), &d3), Some(2));
    }

    #[test]
    fn mixed_real() {
        let d = interval(int(1), int(2));
        let st = StepVector::new(vec![int(10), int(10)]).unwrap();
        let c = mixed_extension_certificate(&int(0), &st, &[d.clone(), d.clone()], &Budgets::default()).unwrap();
        assert!(c.len() <= 42 * 42);
        assert!(verify_certificate(&c, &mixed_hyp(&d, 2)).accepted());
    }

    #[test]
    fn mixed_padic() {
        let d = StepDomain::ball_complement(int(0), 1, ctx(3));
        let st = StepVector::new(vec![rat(1, 3), rat(1, 9)]).unwrap();
        let c = mixed_extension_certificate(&int(0), &st, &[d.clone(), d.clone()], &Budgets::default()).unwrap();
        assert!(c.len() <= 4);
        assert!(verify_certificate(&c, &mixed_hyp(&d, 2)).accepted());
    }

    #[test]
    fn mixed_errors() {
        let real = interval(int(1), int(2));
        let padic = StepDomain::ball_complement(int(0), 1, ctx(3));
        let st = StepVector::new(vec![int(10), int(10)]).unwrap();
        assert_eq!(
            mixed_extension_certificate(&int(0), &st, &[real.clone(), padic], &Budgets::default()),
            Err(Error::MixedScalarFamilies)
        );
        let tiny = Budgets { max_certificate_instances: 100, ..Budgets::default() };
        assert!(matches!(
            mixed_extension_certificate(&int(0), &st, &[real.clone(), real], &tiny),
            Err(Error::BudgetExceeded { needed: 1764, .. })
        ));
    }

    #[test]
    fn equal_step_positive_and_negative() {
        let st = StepVector::new(vec![int(5), int(7)]).unwrap();
        for side in [Side::Positive, Side::Negative] {
            let c = equal_step_extension_certificate(&int(0), &st, &int(1), side, &Budgets::default()).unwrap();
            let hyp = equal_step_hypothesis(&int(1), 2, side).unwrap();
            assert!(verify_certificate(&c, &hyp).accepted(), "{side:?}");
        }
    }

    #[test]
    fn equal_step_order_one() {
        let st = StepVector::new(vec![rat(-7, 2)]).unwrap();
        let c = equal_step_extension_certificate(&int(3), &st, &rat(1, 2), Side::Positive, &Budgets::default()).unwrap();
        assert!(verify_certificate(&c, &equal_step_hypothesis(&rat(1, 2), 1, Side::Positive).unwrap()).accepted());
        assert!(equal_step_extension_certificate(&int(3), &st, &int(0), Side::Positive, &Budgets::default()).is_err());
    }
}
