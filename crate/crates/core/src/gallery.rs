//! Evaluable test functions: polynomials, p-adic ball indicators, the
//! rational/irrational piecewise function on ℚ(√d), and seeded tabulated
//! functions with arbitrary values.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{int, is_squarefree_radicand, to_canonical, BigRational, PAdicContext, QuadraticElement, Scalar};
use crate::difference::{
    equal_step_difference, forward_difference, mixed_difference, Function, IdentityReport, StepVector,
};
use crate::error::{Error, Result};
use crate::interpolation::DensePolynomial;

/// Indicator of the ball `center + p^exponent ℤ_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallIndicator {
    pub center: BigRational,
    pub exponent: i64,
    pub context: PAdicContext,
}

impl BallIndicator {
    pub fn new(center: BigRational, exponent: i64, context: PAdicContext) -> Self {
        Self { center, exponent, context }
    }

    /// The indicator of `ℤ_p`.
    pub fn unit_ball(context: PAdicContext) -> Self {
        Self::new(BigRational::zero(), 0, context)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.context.ball_contains(&self.center, self.exponent, x)
    }
}

impl Function<BigRational> for BallIndicator {
    fn eval(&self, x: &BigRational) -> Result<BigRational> {
        Ok(if self.contains(x) { BigRational::one() } else { BigRational::zero() })
    }
}

/// Deterministic pseudo-random function; values are hashed from the seed and
/// the point's canonical key, then memoized.
#[derive(Debug)]
pub struct TabulatedFn {
    seed: u64,
    memo: Mutex<HashMap<String, BigRational>>,
}

impl Clone for TabulatedFn {
    fn clone(&self) -> Self {
        Self::new(self.seed)
    }
}

impl PartialEq for TabulatedFn {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed
    }
}

impl Eq for TabulatedFn {}

impl TabulatedFn {
    pub fn new(seed: u64) -> Self {
        Self { seed, memo: Mutex::new(HashMap::new()) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Value at a canonical point key: numerator in `[−2^31, 2^31)`,
    /// denominator in `[1, 2^32]`.
    pub fn value_for_key(&self, key: &str) -> BigRational {
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(key) {
            return v.clone();
        }
        let v = hashed_value(self.seed, key);
        self.memo.lock().expect("memo poisoned").insert(key.to_string(), v.clone());
        v
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }
}

fn hashed_value(seed: u64, key: &str) -> BigRational {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(key.as_bytes());
    let digest = hasher.finalize();
    let word = |i: usize| u32::from_le_bytes([digest[i], digest[i + 1], digest[i + 2], digest[i + 3]]);
    let numer = word(0) as i32 as i64;
    let denom = word(4) as i64 + 1;
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

impl<S: Scalar> Function<S> for TabulatedFn {
    fn eval(&self, x: &S) -> Result<S> {
        Ok(S::from_rational(self.value_for_key(&x.canonical_key())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestFunction {
    Polynomial(DensePolynomial<BigRational>),
    BallIndicator(BallIndicator),
    /// `x` on ℚ and `x²` off ℚ, on ℚ(√radicand).
    ClassPiecewise { radicand: u64 },
    Tabulated(TabulatedFn),
}

impl TestFunction {
    pub fn polynomial(coefficients: Vec<BigRational>) -> Self {
        TestFunction::Polynomial(DensePolynomial::new(coefficients))
    }

    pub fn ball_indicator(center: BigRational, exponent: i64, context: PAdicContext) -> Self {
        TestFunction::BallIndicator(BallIndicator::new(center, exponent, context))
    }

    pub fn class_piecewise(radicand: u64) -> Result<Self> {
        if !is_squarefree_radicand(radicand) {
            return Err(Error::InvalidRadicand(radicand));
        }
        Ok(TestFunction::ClassPiecewise { radicand })
    }

    pub fn tabulated(seed: u64) -> Self {
        TestFunction::Tabulated(TabulatedFn::new(seed))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            TestFunction::Polynomial(_) => "polynomial",
            TestFunction::BallIndicator(_) => "ball-indicator",
            TestFunction::ClassPiecewise { .. } => "class-piecewise",
            TestFunction::Tabulated(_) => "tabulated",
        }
    }

    /// Tagged record for reports.
    pub fn encode(&self) -> Value {
        match self {
            TestFunction::Polynomial(p) => json!({
                "variant": self.variant_name(),
                "coefficients": p.coefficients().iter().map(to_canonical).collect::<Vec<_>>(),
            }),
            TestFunction::BallIndicator(b) => json!({
                "variant": self.variant_name(),
                "center": to_canonical(&b.center),
                "exponent": b.exponent,
                "prime": b.context.prime(),
            }),
            TestFunction::ClassPiecewise { radicand } => json!({
                "variant": self.variant_name(),
                "radicand": radicand,
            }),
            TestFunction::Tabulated(t) => json!({
                "variant": self.variant_name(),
                "seed": t.seed(),
            }),
        }
    }
}

impl Function<BigRational> for TestFunction {
    fn eval(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            TestFunction::Polynomial(p) => Ok(p.evaluate_lifted(x)),
            TestFunction::BallIndicator(b) => b.eval(x),
            TestFunction::ClassPiecewise { radicand } => Err(Error::DomainMismatch(format!(
                "class-piecewise function lives on Q(sqrt({radicand})), not on Q"
            ))),
            TestFunction::Tabulated(t) => t.eval(x),
        }
    }
}

impl<const D: u64> Function<QuadraticElement<D>> for TestFunction {
    fn eval(&self, x: &QuadraticElement<D>) -> Result<QuadraticElement<D>> {
        match self {
            TestFunction::Polynomial(p) => Ok(p.evaluate_lifted(x)),
            TestFunction::BallIndicator(_) => Err(Error::DomainMismatch(format!(
                "ball indicator needs a p-adic context, got a point of Q(sqrt({D}))"
            ))),
            TestFunction::ClassPiecewise { radicand } if *radicand != D => Err(Error::DomainMismatch(format!(
                "class-piecewise function on Q(sqrt({radicand})) evaluated at a point of Q(sqrt({D}))"
            ))),
            TestFunction::ClassPiecewise { .. } => Ok(class_piecewise(x)),
            TestFunction::Tabulated(t) => t.eval(x),
        }
    }
}

fn class_piecewise<const D: u64>(x: &QuadraticElement<D>) -> QuadraticElement<D> {
    if x.is_rational() {
        x.clone()
    } else {
        x.clone() * x.clone()
    }
}

/// Third mixed difference of the class-piecewise function with rational
/// steps; rational shifts keep every corner in the class of `x`, so it
/// vanishes.
pub fn remark1_vanishing_check<const D: u64>(
    steps: &[QuadraticElement<D>; 3],
    x: &QuadraticElement<D>,
) -> Result<IdentityReport<QuadraticElement<D>>> {
    if let Some(h) = steps.iter().find(|h| !h.is_rational()) {
        return Err(Error::PreconditionViolation(format!("step {h} is irrational")));
    }
    let f = TestFunction::ClassPiecewise { radicand: D };
    let steps = StepVector::new(steps.to_vec())?;
    let lhs = mixed_difference(&f, &steps, x)?;
    Ok(IdentityReport::new("class-piecewise-vanishing", lhs, QuadraticElement::zero()))
}

/// A concrete point where the class-piecewise function fails the
/// equal-step equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Remark1Witness {
    pub x: QuadraticElement,
    pub h: QuadraticElement,
    pub order: usize,
    pub value: QuadraticElement,
}

impl Remark1Witness {
    pub fn encode(&self) -> Value {
        json!({
            "x": self.x.encode(),
            "h": self.h.encode(),
            "order": self.order,
            "value": self.value.encode(),
        })
    }
}

/// `Δ^s_h f(x)` of the class-piecewise function on ℚ(√2), recomputed.
pub fn remark1_value(x: &QuadraticElement, h: &QuadraticElement, order: usize) -> Result<QuadraticElement> {
    equal_step_difference(&TestFunction::ClassPiecewise { radicand: 2 }, h, order, x)
}

/// The shipped instance `x = 2, h = √2, s = 3`; its value is recomputed on
/// every call.
pub fn remark1_witness() -> Result<Remark1Witness> {
    let x = QuadraticElement::from(int(2));
    let h = QuadraticElement::sqrt_radicand();
    let value = remark1_value(&x, &h, 3)?;
    Ok(Remark1Witness { x, h, order: 3, value })
}

/// First integer `x ∈ 0..=16` with `Δ^s_{√2} f(x) ≠ 0`.
pub fn remark1_witness_for_order(order: usize) -> Result<Option<Remark1Witness>> {
    let h = QuadraticElement::sqrt_radicand();
    for n in 0..=16 {
        let x = QuadraticElement::from(int(n));
        let value = remark1_value(&x, &h, order)?;
        if !value.is_zero() {
            return Ok(Some(Remark1Witness { x, h, order, value }));
        }
    }
    Ok(None)
}

/// `Δ_h φ(x) = 0` whenever `v(h) ≥ exponent`: such a step cannot carry a
/// point across the ball boundary.
pub fn ball_indicator_local_flatness(
    f: &BallIndicator,
    x: &BigRational,
    h: &BigRational,
) -> Result<IdentityReport<BigRational>> {
    let v = f.context.valuation(h);
    if v < f.exponent {
        return Err(Error::PreconditionViolation(format!(
            "v_{}({}) = {} is below the ball exponent {}",
            f.context.prime(),
            to_canonical(h),
            v,
            f.exponent
        )));
    }
    let lhs = forward_difference(f, h, x)?;
    Ok(IdentityReport::new("ball-flatness", lhs, BigRational::zero()))
}
