//! Exact finite-difference operators and their point-mass expansions.
//!
//! Everything here is an identity in the function argument, so the checks
//! accept any [`Function`], including adversarial tabulated ones.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{int, BigRational, Scalar};
use crate::error::{Error, Result};

/// Something that can be evaluated exactly at a point of `S`.
pub trait Function<S> {
    fn eval(&self, x: &S) -> Result<S>;
}

impl<S, F> Function<S> for F
where
    F: Fn(&S) -> S,
{
    fn eval(&self, x: &S) -> Result<S> {
        Ok(self(x))
    }
}

/// Ordered steps `(h_1, …, h_s)`, `s ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepVector<S>(Vec<S>);

impl<S: Scalar> StepVector<S> {
    pub fn new(steps: Vec<S>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptySteps);
        }
        Ok(Self(steps))
    }

    pub fn uniform(h: S, order: usize) -> Result<Self> {
        Self::new(vec![h; order])
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn steps(&self) -> &[S] {
        &self.0
    }

    /// Steps reordered as `(h_{σ(1)}, …, h_{σ(s)})`, with `sigma` zero-based.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        check_permutation(sigma, self.order())?;
        Ok(Self(sigma.iter().map(|&i| self.0[i].clone()).collect()))
    }
}

fn check_permutation(sigma: &[usize], s: usize) -> Result<()> {
    let mut seen = vec![false; s];
    if sigma.len() != s {
        return Err(Error::MalformedPermutation(sigma.to_vec()));
    }
    for &i in sigma {
        if i >= s || seen[i] {
            return Err(Error::MalformedPermutation(sigma.to_vec()));
        }
        seen[i] = true;
    }
    Ok(())
}

/// `C(n, k)` as an exact rational.
pub fn binomial(n: usize, k: usize) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

fn sign(odd: bool) -> BigRational {
    if odd {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// A finite signed combination `Σ c_i δ_{x_i}` of point evaluations, kept in
/// canonical form: zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalFunctional<S> {
    terms: BTreeMap<S, BigRational>,
}

impl<S: Scalar> Default for FormalFunctional<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> fmt::Debug for FormalFunctional<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(p, c)| (p.to_string(), c.to_string()))).finish()
    }
}

impl<S: Scalar> FormalFunctional<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point_mass(x: S) -> Self {
        let mut f = Self::zero();
        f.add_term(x, BigRational::one());
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (S, BigRational)>) -> Self {
        let mut f = Self::zero();
        for (x, c) in terms {
            f.add_term(x, c);
        }
        f
    }

    pub fn add_term(&mut self, x: S, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(x);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        for (x, k) in &other.terms {
            self.add_term(x.clone(), k * c);
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&S, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, x: &S) -> BigRational {
        self.terms.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Number of points with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ c_i f(x_i)`.
    pub fn apply<F: Function<S> + ?Sized>(&self, f: &F) -> Result<S> {
        let mut acc = S::zero();
        for (x, c) in &self.terms {
            acc = acc + S::from_rational(c.clone()) * f.eval(x)?;
        }
        Ok(acc)
    }

    /// `Δ_h` at `x`.
    pub fn forward(x: &S, h: &S) -> Self {
        Self::from_terms([(x.clone() + h.clone(), BigRational::one()), (x.clone(), -BigRational::one())])
    }

    /// `Δ_{h_1⋯h_s}` at `x`: the corners `x + Σ_{r∈S} h_r` with sign `(−1)^{s−|S|}`.
    pub fn mixed(x: &S, steps: &StepVector<S>) -> Self {
        let s = steps.order();
        let mut f = Self::zero();
        for mask in 0u64..(1u64 << s) {
            let mut point = x.clone();
            for (r, h) in steps.steps().iter().enumerate() {
                if mask >> r & 1 == 1 {
                    point = point + h.clone();
                }
            }
            f.add_term(point, sign((s - mask.count_ones() as usize) % 2 == 1));
        }
        f
    }

    /// `Δ_h^s` at `x`: `Σ_k C(s,k)(−1)^{s−k} δ_{x+kh}`.
    pub fn equal_step(x: &S, h: &S, s: usize) -> Self {
        let mut f = Self::zero();
        let mut point = x.clone();
        for k in 0..=s {
            f.add_term(point.clone(), binomial(s, k) * sign((s - k) % 2 == 1));
            point = point + h.clone();
        }
        f
    }

    /// Records sorted by canonical point order.
    pub fn encode(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(p, c)| json!({ "point": p.encode(), "coefficient": crate::arith::to_canonical(c) }))
                .collect(),
        )
    }
}

impl<S: Scalar> Add for FormalFunctional<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &BigRational::one());
        self
    }
}

impl<S: Scalar> Sub for FormalFunctional<S> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &-BigRational::one());
        self
    }
}

impl<S: Scalar> Neg for FormalFunctional<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(&-BigRational::one())
    }
}

/// Which difference operator an expansion or certificate instance refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    Mixed,
    EqualStep,
}

impl OperatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorKind::Mixed => "mixed",
            OperatorKind::EqualStep => "equal-step",
        }
    }
}

/// Point-mass form of `Δ_{h_1⋯h_s}` (mixed) or `Δ_h^s` (equal-step, where
/// `steps` must be `s` copies of `h`).
pub fn functional_expansion<S: Scalar>(kind: OperatorKind, steps: &StepVector<S>, x: &S) -> Result<FormalFunctional<S>> {
    match kind {
        OperatorKind::Mixed => Ok(FormalFunctional::mixed(x, steps)),
        OperatorKind::EqualStep => {
            let h = &steps.steps()[0];
            if steps.steps().iter().any(|g| g != h) {
                return Err(Error::PreconditionViolation("equal-step operator with unequal steps".into()));
            }
            Ok(FormalFunctional::equal_step(x, h, steps.order()))
        }
    }
}

pub fn forward_difference<S: Scalar, F: Function<S> + ?Sized>(f: &F, h: &S, x: &S) -> Result<S> {
    Ok(f.eval(&(x.clone() + h.clone()))? - f.eval(x)?)
}

/// Alternating sum over the `2^s` corners, one evaluation per corner.
pub fn mixed_difference<S: Scalar, F: Function<S> + ?Sized>(f: &F, steps: &StepVector<S>, x: &S) -> Result<S> {
    let s = steps.order();
    let mut acc = S::zero();
    for mask in 0u64..(1u64 << s) {
        let mut point = x.clone();
        for (r, h) in steps.steps().iter().enumerate() {
            if mask >> r & 1 == 1 {
                point = point + h.clone();
            }
        }
        let value = f.eval(&point)?;
        if (s - mask.count_ones() as usize) % 2 == 1 {
            acc = acc - value;
        } else {
            acc = acc + value;
        }
    }
    Ok(acc)
}

/// `Δ_{h_1}(Δ_{h_2⋯h_s} f)(x)`, evaluated literally. Exponential in `s`
/// like the corner sum, but re-evaluates shared points.
pub fn mixed_difference_recursive<S: Scalar, F: Function<S> + ?Sized>(f: &F, steps: &[S], x: &S) -> Result<S> {
    match steps.split_first() {
        None => f.eval(x),
        Some((h, rest)) => {
            let ahead = mixed_difference_recursive(f, rest, &(x.clone() + h.clone()))?;
            let here = mixed_difference_recursive(f, rest, x)?;
            Ok(ahead - here)
        }
    }
}

pub fn equal_step_difference<S: Scalar, F: Function<S> + ?Sized>(f: &F, h: &S, s: usize, x: &S) -> Result<S> {
    let mut acc = S::zero();
    let mut point = x.clone();
    for k in 0..=s {
        let c = binomial(s, k) * sign((s - k) % 2 == 1);
        acc = acc + S::from_rational(c) * f.eval(&point)?;
        point = point + h.clone();
    }
    Ok(acc)
}

/// One term of the decomposition of a mixed difference into equal-step
/// differences: `sign · Δ^s_{alpha} f(x + beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonTerm<S> {
    pub epsilon: Vec<bool>,
    pub sign: i8,
    /// `−Σ_r ε_r h_r / r`
    pub alpha: S,
    /// `Σ_r ε_r h_r`
    pub beta: S,
}

impl<S: Scalar> EpsilonTerm<S> {
    pub fn new(epsilon: Vec<bool>, steps: &StepVector<S>) -> Self {
        let mut alpha = S::zero();
        let mut beta = S::zero();
        for (r, (h, &e)) in steps.steps().iter().zip(&epsilon).enumerate() {
            if e {
                alpha = alpha - h.clone() / S::from_integer(r as i64 + 1);
                beta = beta + h.clone();
            }
        }
        let odd = epsilon.iter().filter(|&&e| e).count() % 2 == 1;
        Self { epsilon, sign: if odd { -1 } else { 1 }, alpha, beta }
    }

    pub fn is_trivial(&self) -> bool {
        self.epsilon.iter().all(|&e| !e)
    }
}

/// All `2^s` terms, `ε = 0` first.
pub fn epsilon_terms<S: Scalar>(steps: &StepVector<S>) -> Vec<EpsilonTerm<S>> {
    let s = steps.order();
    (0u64..(1u64 << s))
        .map(|mask| EpsilonTerm::new((0..s).map(|r| mask >> r & 1 == 1).collect(), steps))
        .collect()
}

/// Right-hand side of the equal-step decomposition as a functional. The
/// `ε = 0` term has step zero and cancels to the empty functional.
pub fn czerwik_functional<S: Scalar>(steps: &StepVector<S>, x: &S) -> FormalFunctional<S> {
    let s = steps.order();
    let mut out = FormalFunctional::zero();
    for term in epsilon_terms(steps) {
        let shifted = x.clone() + term.beta.clone();
        out.add_scaled(&FormalFunctional::equal_step(&shifted, &term.alpha, s), &BigRational::from_integer(term.sign.into()));
    }
    out
}

/// Outcome of checking one exact identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport<S> {
    pub identity: &'static str,
    pub lhs: S,
    pub rhs: S,
    pub holds: bool,
}

impl<S: Scalar> IdentityReport<S> {
    pub fn new(identity: &'static str, lhs: S, rhs: S) -> Self {
        let holds = lhs == rhs;
        Self { identity, lhs, rhs, holds }
    }

    pub fn encode(&self) -> Value {
        json!({
            "identity": self.identity,
            "lhs": self.lhs.encode(),
            "rhs": self.rhs.encode(),
            "holds": self.holds,
        })
    }
}

/// `Δ_{h_1⋯h_s} f(x) = Σ_ε (−1)^{|ε|} Δ^s_{α(ε)} f(x + β(ε))`, both sides
/// evaluated from scratch.
pub fn czerwik_identity_check<S: Scalar, F: Function<S> + ?Sized>(
    f: &F,
    steps: &StepVector<S>,
    x: &S,
) -> Result<IdentityReport<S>> {
    let s = steps.order();
    let lhs = mixed_difference(f, steps, x)?;
    let mut rhs = S::zero();
    for term in epsilon_terms(steps).into_iter().filter(|t| !t.is_trivial()) {
        let v = equal_step_difference(f, &term.alpha, s, &(x.clone() + term.beta.clone()))?;
        rhs = if term.sign < 0 { rhs - v } else { rhs + v };
    }
    Ok(IdentityReport::new("czerwik", lhs, rhs))
}

/// `Δ_{h_1⋯h_s} f(x) = Δ_{h_σ(1)⋯h_σ(s)} f(x)`; `sigma` is zero-based.
pub fn permutation_invariance_check<S: Scalar, F: Function<S> + ?Sized>(
    f: &F,
    steps: &StepVector<S>,
    x: &S,
    sigma: &[usize],
) -> Result<IdentityReport<S>> {
    let permuted = steps.permuted(sigma)?;
    // the permuted side goes through the recursion so the two sides share no code
    let lhs = mixed_difference(f, steps, x)?;
    let rhs = mixed_difference_recursive(f, permuted.steps(), x)?;
    Ok(IdentityReport::new("permutation", lhs, rhs))
}

/// `Δ_{−h}^s f(x) = (−1)^s Δ_h^s f(x − s h)`.
pub fn reflection_identity_check<S: Scalar, F: Function<S> + ?Sized>(
    f: &F,
    h: &S,
    s: usize,
    x: &S,
) -> Result<IdentityReport<S>> {
    if s == 0 {
        return Err(Error::EmptySteps);
    }
    let lhs = equal_step_difference(f, &-h.clone(), s, x)?;
    let back = x.clone() - S::from_integer(s as i64) * h.clone();
    let mut rhs = equal_step_difference(f, h, s, &back)?;
    if s % 2 == 1 {
        rhs = -rhs;
    }
    Ok(IdentityReport::new("reflection", lhs, rhs))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    type Q = BigRational;

    fn cube(x: &Q) -> Q {
        x * x * x
    }

    fn square(x: &Q) -> Q {
        x * x
    }

    fn steps(v: &[Q]) -> StepVector<Q> {
        StepVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn forward_difference_values() {
        let five = |_: &Q| int(5);
        assert_eq!(forward_difference(&five, &rat(3, 7), &int(-2)).unwrap(), int(0));
        assert_eq!(forward_difference(&square, &int(3), &int(1)).unwrap(), int(15));
    }

    #[test]
    fn mixed_difference_values() {
        assert_eq!(mixed_difference(&cube, &steps(&[int(1), int(2)]), &int(0)).unwrap(), int(18));
        assert_eq!(mixed_difference(&cube, &steps(&[int(1), int(1), int(1)]), &int(0)).unwrap(), int(6));
        let one = steps(&[rat(2, 5)]);
        assert_eq!(
            mixed_difference(&cube, &one, &int(3)).unwrap(),
            forward_difference(&cube, &rat(2, 5), &int(3)).unwrap()
        );
    }

    #[test]
    fn recursion_matches_corner_sum() {
        let st = steps(&[rat(1, 2), int(-3), rat(7, 4)]);
        assert_eq!(
            mixed_difference(&cube, &st, &rat(1, 9)).unwrap(),
            mixed_difference_recursive(&cube, st.steps(), &rat(1, 9)).unwrap()
        );
    }

    #[test]
    fn equal_step_values() {
        assert_eq!(equal_step_difference(&square, &int(3), 2, &int(11)).unwrap(), int(18));
        assert_eq!(equal_step_difference(&square, &rat(5, 3), 3, &int(-4)).unwrap(), int(0));
    }

    #[test]
    fn expansions() {
        let x = rat(1, 3);
        let h = int(2);
        assert_eq!(
            FormalFunctional::forward(&x, &h),
            FormalFunctional::from_terms([(rat(7, 3), int(1)), (x.clone(), int(-1))])
        );
        assert_eq!(
            FormalFunctional::equal_step(&x, &h, 2),
            FormalFunctional::from_terms([(rat(13, 3), int(1)), (rat(7, 3), int(-2)), (x.clone(), int(1))])
        );
        assert_eq!(FormalFunctional::mixed(&x, &steps(&[h.clone(), h.clone()])), FormalFunctional::equal_step(&x, &h, 2));
        assert!(FormalFunctional::equal_step(&x, &int(0), 4).is_zero());
    }

    #[test]
    fn expansion_rejects_unequal_equal_step() {
        assert!(functional_expansion(OperatorKind::EqualStep, &steps(&[int(1), int(2)]), &int(0)).is_err());
    }

    #[test]
    fn czerwik_order_one_and_three() {
        let r = czerwik_identity_check(&cube, &steps(&[rat(3, 5)]), &int(2)).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, forward_difference(&cube, &rat(3, 5), &int(2)).unwrap());

        let r = czerwik_identity_check(&cube, &steps(&[int(1), int(2), int(5)]), &rat(-7, 3)).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(60), int(60)));
    }

    #[test]
    fn czerwik_functional_matches_mixed() {
        let st = steps(&[rat(1, 2), rat(1, 3), rat(-5, 7)]);
        assert_eq!(czerwik_functional(&st, &int(1)), FormalFunctional::mixed(&int(1), &st));
    }

    #[test]
    fn epsilon_coefficients() {
        let st = steps(&[rat(-1, 4), rat(-1, 4)]);
        let t = EpsilonTerm::new(vec![true, true], &st);
        assert_eq!(t.alpha, rat(3, 8));
        assert_eq!(t.beta, rat(-1, 2));
        assert_eq!(t.sign, 1);
        assert_eq!(epsilon_terms(&st).len(), 4);
        assert!(epsilon_terms(&st)[0].is_trivial());
    }

    #[test]
    fn permutation_checks() {
        let st = steps(&[int(1), rat(1, 2), rat(-2, 3)]);
        for sigma in permutations(3) {
            assert!(permutation_invariance_check(&cube, &st, &int(4), &sigma).unwrap().holds);
        }
        assert_eq!(permutations(4).len(), 24);
        assert!(matches!(
            permutation_invariance_check(&cube, &st, &int(0), &[0, 0, 1]),
            Err(Error::MalformedPermutation(_))
        ));
        assert!(permutation_invariance_check(&cube, &st, &int(0), &[0, 1]).is_err());
    }

    #[test]
    fn reflection_checks() {
        let r = reflection_identity_check(&square, &rat(3, 2), 2, &int(1)).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat(9, 2), rat(9, 2)));
        assert!(reflection_identity_check(&cube, &int(7), 1, &int(2)).unwrap().holds);
        assert!(reflection_identity_check(&cube, &int(7), 0, &int(2)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(6, 0), int(1));
        assert_eq!(binomial(3, 4), int(0));
    }
}
