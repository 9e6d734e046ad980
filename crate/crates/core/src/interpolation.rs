//! Lagrange interpolation and the propagation argument behind the p-adic
//! Fréchet theorem: an interpolant on `n + 1` equally spaced nodes is
//! carried along the whole progression by `Δ^{n+1} f = 0`, and agrees with
//! the interpolant of every `p`-power refinement of the step.
//!
//! Continuity and density cannot be observed on finite samples; every report
//! lists them under `untested_hypotheses` and records exactly which base
//! points the vanishing hypothesis was checked at.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{BigRational, PAdicContext, Scalar};
use crate::difference::{binomial, Function};
use crate::error::{Error, Result};

const UNTESTED: [&str; 2] = [
    "continuity of f (vacuous on finite rational samples)",
    "density of the sampled progression (replaced by finite agreement)",
];

/// Coefficients constant term first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensePolynomial<S> {
    coefficients: Vec<S>,
}

impl<S: Scalar> DensePolynomial<S> {
    pub fn new(mut coefficients: Vec<S>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self { coefficients: Vec::new() }
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn evaluate(&self, x: &S) -> S {
        self.coefficients.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    fn times_linear(&self, root: &S) -> Self {
        // (Σ c_i x^i)(x − root)
        let mut out = vec![S::zero(); self.coefficients.len() + 1];
        for (i, c) in self.coefficients.iter().enumerate() {
            out[i + 1] = out[i + 1].clone() + c.clone();
            out[i] = out[i].clone() - c.clone() * root.clone();
        }
        Self::new(out)
    }

    fn add_scaled(&mut self, other: &Self, c: &S) {
        if self.coefficients.len() < other.coefficients.len() {
            self.coefficients.resize(other.coefficients.len(), S::zero());
        }
        for (i, k) in other.coefficients.iter().enumerate() {
            self.coefficients[i] = self.coefficients[i].clone() + k.clone() * c.clone();
        }
        let trimmed = Self::new(std::mem::take(&mut self.coefficients));
        *self = trimmed;
    }

    pub fn encode(&self) -> Value {
        Value::Array(self.coefficients.iter().map(Scalar::encode).collect())
    }
}

impl DensePolynomial<BigRational> {
    /// Evaluates a rational polynomial at a point of any scalar field.
    pub fn evaluate_lifted<T: Scalar>(&self, x: &T) -> T {
        self.coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + T::from_rational(c.clone()))
    }
}

impl<S: Scalar> Function<S> for DensePolynomial<S> {
    fn eval(&self, x: &S) -> Result<S> {
        Ok(self.evaluate(x))
    }
}

/// Classical Lagrange form `Σ_i y_i Π_{j≠i} (x − x_j)/(x_i − x_j)`.
pub fn lagrange_interpolate<S: Scalar>(nodes: &[S], values: &[S]) -> Result<DensePolynomial<S>> {
    if nodes.len() != values.len() {
        return Err(Error::LengthMismatch { nodes: nodes.len(), values: values.len() });
    }
    let mut seen = BTreeSet::new();
    for x in nodes {
        if !seen.insert(x) {
            return Err(Error::DuplicateNode(x.to_string()));
        }
    }
    let mut result = DensePolynomial::zero();
    for (i, (xi, yi)) in nodes.iter().zip(values).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = DensePolynomial::new(vec![S::one()]);
        let mut denom = S::one();
        for (j, xj) in nodes.iter().enumerate() {
            if i != j {
                basis = basis.times_linear(xj);
                denom = denom * (xi.clone() - xj.clone());
            }
        }
        result.add_scaled(&basis, &(yi.clone() / denom));
    }
    Ok(result)
}

/// A finite sample `x0 + k·h0/p^m` of the refined progressions through `x0`.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub x0: BigRational,
    pub h0: BigRational,
    pub m_range: RangeInclusive<i64>,
    pub k_range: RangeInclusive<i64>,
    pub context: PAdicContext,
}

impl GridSpec {
    pub fn points(&self) -> Vec<BigRational> {
        let mut out = BTreeSet::new();
        for m in self.m_range.clone() {
            let step = &self.h0 / self.context.power(m);
            for k in self.k_range.clone() {
                out.insert(&self.x0 + &step * BigRational::from_integer(k.into()));
            }
        }
        out.into_iter().collect()
    }
}

/// Evaluates `f` along `x0 + k·h` with memoization by `k`.
struct Line<'a, S, F: ?Sized> {
    f: &'a F,
    x0: S,
    h: S,
    values: BTreeMap<i64, S>,
}

impl<'a, S: Scalar, F: Function<S> + ?Sized> Line<'a, S, F> {
    fn new(f: &'a F, x0: S, h: S) -> Self {
        Self { f, x0, h, values: BTreeMap::new() }
    }

    fn point(&self, k: i64) -> S {
        self.x0.clone() + S::from_integer(k) * self.h.clone()
    }

    fn value(&mut self, k: i64) -> Result<S> {
        if let Some(v) = self.values.get(&k) {
            return Ok(v.clone());
        }
        let v = self.f.eval(&self.point(k))?;
        self.values.insert(k, v.clone());
        Ok(v)
    }

    /// `Δ_h^{order} f(x0 + base·h)`.
    fn difference(&mut self, base: i64, order: usize) -> Result<S> {
        let mut acc = S::zero();
        for k in 0..=order {
            let c = binomial(order, k);
            let c = if (order - k) % 2 == 1 { -c } else { c };
            acc = acc + S::from_rational(c) * self.value(base + k as i64)?;
        }
        Ok(acc)
    }

    fn require_vanishing(&mut self, base: i64, order: usize) -> Result<()> {
        let d = self.difference(base, order)?;
        if d.is_zero() {
            Ok(())
        } else {
            Err(Error::VanishingHypothesisViolation { at: self.point(base).to_string(), value: d.to_string() })
        }
    }

    fn interpolant(&mut self, n: usize) -> Result<(Vec<S>, DensePolynomial<S>)> {
        let nodes: Vec<S> = (0..=n as i64).map(|k| self.point(k)).collect();
        let values = (0..=n as i64).map(|k| self.value(k)).collect::<Result<Vec<_>>>()?;
        Ok((nodes.clone(), lagrange_interpolate(&nodes, &values)?))
    }
}

#[derive(Clone, Debug)]
pub struct Discrepancy<S> {
    pub point: S,
    pub value: S,
    pub interpolant: S,
}

#[derive(Clone, Debug)]
pub struct PropagationReport<S> {
    pub nodes: Vec<S>,
    pub polynomial: DensePolynomial<S>,
    /// Base points where `Δ^{n+1} f = 0` was verified, in propagation order.
    pub checked_base_points: Vec<S>,
    pub discrepancies: Vec<Discrepancy<S>>,
    pub untested_hypotheses: Vec<&'static str>,
}

impl<S: Scalar> PropagationReport<S> {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn encode(&self) -> Value {
        json!({
            "nodes": self.nodes.iter().map(Scalar::encode).collect::<Vec<_>>(),
            "coefficients": self.polynomial.encode(),
            "checked_base_points": self.checked_base_points.iter().map(Scalar::encode).collect::<Vec<_>>(),
            "residuals": self.discrepancies.iter().map(|d| json!({
                "point": d.point.encode(),
                "residual": (d.value.clone() - d.interpolant.clone()).encode(),
            })).collect::<Vec<_>>(),
            "violations": Vec::<Value>::new(),
            "untested_hypotheses": self.untested_hypotheses,
        })
    }
}

/// Interpolates `f` on `x0 + k·h0`, `k = 0..=n`, and carries the interpolant
/// along `k_range` one node at a time, forward then backward, checking
/// `Δ_{h0}^{n+1} f = 0` at each base point it relies on.
pub fn propagation_check<S: Scalar, F: Function<S> + ?Sized>(
    f: &F,
    x0: &S,
    h0: &S,
    n: usize,
    k_range: RangeInclusive<i64>,
) -> Result<PropagationReport<S>> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo > 0 || hi < n as i64 {
        return Err(Error::PreconditionViolation(format!("k range {lo}..={hi} must contain 0..={n}")));
    }
    let mut line = Line::new(f, x0.clone(), h0.clone());
    let (nodes, polynomial) = line.interpolant(n)?;
    let order = n + 1;
    let mut checked = Vec::new();

    // node k > n is pinned by the window starting at k − n − 1
    for base in 0..=(hi - order as i64) {
        line.require_vanishing(base, order)?;
        checked.push(line.point(base));
    }
    // node k < 0 is pinned by the window starting at k
    for base in (lo..0).rev() {
        line.require_vanishing(base, order)?;
        checked.push(line.point(base));
    }

    let mut discrepancies = Vec::new();
    for k in k_range {
        let value = line.value(k)?;
        let point = line.point(k);
        let interpolant = polynomial.evaluate(&point);
        if value != interpolant {
            discrepancies.push(Discrepancy { point, value, interpolant });
        }
    }
    Ok(PropagationReport { nodes, polynomial, checked_base_points: checked, discrepancies, untested_hypotheses: UNTESTED.to_vec() })
}

#[derive(Clone, Debug)]
pub struct RefinementReport {
    pub coarse_step: BigRational,
    pub fine_step: BigRational,
    pub coarse: DensePolynomial<BigRational>,
    pub fine: DensePolynomial<BigRational>,
    pub checked_base_points: Vec<BigRational>,
    pub untested_hypotheses: Vec<&'static str>,
}

impl RefinementReport {
    pub fn consistent(&self) -> bool {
        self.coarse == self.fine
    }

    pub fn encode(&self) -> Value {
        json!({
            "coarse_step": self.coarse_step.encode(),
            "fine_step": self.fine_step.encode(),
            "coarse_coefficients": self.coarse.encode(),
            "fine_coefficients": self.fine.encode(),
            "consistent": self.consistent(),
            "checked_base_points": self.checked_base_points.iter().map(Scalar::encode).collect::<Vec<_>>(),
            "untested_hypotheses": self.untested_hypotheses,
        })
    }
}

/// Interpolants of `f` on steps `h0` and `h0/p^m` from `x0` must coincide:
/// both agree with `f` on the infinite intersection of the two progressions.
/// The vanishing hypothesis is checked at bases `0..=2(n+1)` of each line.
pub fn refinement_consistency<F: Function<BigRational> + ?Sized>(
    f: &F,
    x0: &BigRational,
    h0: &BigRational,
    n: usize,
    m: i64,
    context: &PAdicContext,
) -> Result<RefinementReport> {
    let fine_step = h0 / context.power(m);
    let order = n + 1;
    let span = 2 * order as i64;
    let mut checked = Vec::new();
    let mut coarse_line = Line::new(f, x0.clone(), h0.clone());
    let mut fine_line = Line::new(f, x0.clone(), fine_step.clone());
    for line in [&mut coarse_line, &mut fine_line] {
        for base in 0..=span {
            line.require_vanishing(base, order)?;
            checked.push(line.point(base));
        }
    }
    let (_, coarse) = coarse_line.interpolant(n)?;
    let (_, fine) = fine_line.interpolant(n)?;
    Ok(RefinementReport {
        coarse_step: h0.clone(),
        fine_step,
        coarse,
        fine,
        checked_base_points: checked,
        untested_hypotheses: UNTESTED.to_vec(),
    })
}

#[derive(Clone, Debug)]
pub struct LocalReport {
    pub nodes: Vec<BigRational>,
    pub polynomial: DensePolynomial<BigRational>,
    /// `(point, f(point) − p₀(point))` for every sampled point.
    pub residuals: Vec<(BigRational, BigRational)>,
    /// `(base, Δ^{n+1} f(base))` wherever the difference is nonzero.
    pub violations: Vec<(BigRational, BigRational)>,
    pub untested_hypotheses: Vec<&'static str>,
}

impl LocalReport {
    pub fn locally_polynomial(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn encode(&self) -> Value {
        let pairs = |v: &[(BigRational, BigRational)], name: &str| -> Vec<Value> {
            v.iter().map(|(p, r)| json!({ "point": p.encode(), name: r.encode() })).collect()
        };
        json!({
            "nodes": self.nodes.iter().map(Scalar::encode).collect::<Vec<_>>(),
            "coefficients": self.polynomial.encode(),
            "residuals": pairs(&self.residuals, "residual"),
            "violations": pairs(&self.violations, "difference"),
            "locally_polynomial": self.locally_polynomial(),
            "untested_hypotheses": self.untested_hypotheses,
        })
    }
}

/// Interpolates `f` on `a + k·p^N` (`k = 0..=n`) and compares it with `f`
/// at `a + k·p^N` for `|k| ≤ sample_size`. Failures are data, not errors.
pub fn local_reconstruct<F: Function<BigRational> + ?Sized>(
    f: &F,
    a: &BigRational,
    exponent: i64,
    n: usize,
    context: &PAdicContext,
    sample_size: i64,
) -> Result<LocalReport> {
    let mut line = Line::new(f, a.clone(), context.power(exponent));
    let (nodes, polynomial) = line.interpolant(n)?;
    let mut residuals = Vec::new();
    let mut violations = Vec::new();
    for k in -sample_size..=sample_size {
        let d = line.difference(k, n + 1)?;
        if !d.is_zero() {
            violations.push((line.point(k), d));
        }
        let point = line.point(k);
        let residual = line.value(k)? - polynomial.evaluate(&point);
        residuals.push((point, residual));
    }
    Ok(LocalReport { nodes, polynomial, residuals, violations, untested_hypotheses: UNTESTED.to_vec() })
}

/// `Σ_k C(n,k)(−1)^{n−k} p(x + k h)`; zero above the degree.
pub fn polynomial_difference(p: &DensePolynomial<BigRational>, x: &BigRational, h: &BigRational, order: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 0..=order {
        let c = binomial(order, k);
        let c = if (order - k) % 2 == 1 { -c } else { c };
        acc += c * p.evaluate(&(x + h * BigRational::from_integer(k.into())));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, QuadraticElement};
    use crate::gallery::BallIndicator;

    fn ctx3() -> PAdicContext {
        PAdicContext::with_prime(3).unwrap()
    }

    /// Solves the Vandermonde system by Gauss-Jordan elimination.
    fn vandermonde_oracle(nodes: &[BigRational], values: &[BigRational]) -> Vec<BigRational> {
        let n = nodes.len();
        let mut rows: Vec<Vec<BigRational>> = nodes
            .iter()
            .zip(values)
            .map(|(x, y)| {
                let mut row: Vec<BigRational> = (0..n).map(|j| num_traits::Pow::pow(x, j as u32)).collect();
                row.push(y.clone());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !rows[r][col].is_zero()).unwrap();
            rows.swap(col, pivot);
            let inv = rows[col][col].recip();
            for v in rows[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !rows[r][col].is_zero() {
                    let factor = rows[r][col].clone();
                    for c in 0..=n {
                        let sub = &factor * &rows[col][c];
                        rows[r][c] -= sub;
                    }
                }
            }
        }
        rows.into_iter().map(|r| r[n].clone()).collect()
    }

    #[test]
    fn interpolates_small_cases() {
        let nodes = [int(0), int(1), int(2)];
        let values = [int(1), int(2), int(5)];
        let p = lagrange_interpolate(&nodes, &values).unwrap();
        assert_eq!(p.coefficients(), &[int(1), int(0), int(1)]);
        assert_eq!(p.coefficients(), vandermonde_oracle(&nodes, &values).as_slice());

        let c = lagrange_interpolate(&[int(7)], &[int(4)]).unwrap();
        assert_eq!(c.coefficients(), &[int(4)]);
    }

    #[test]
    fn interpolation_errors() {
        assert_eq!(lagrange_interpolate(&[int(1), int(1)], &[int(0), int(2)]), Err(Error::DuplicateNode("1".into())));
        assert!(matches!(lagrange_interpolate(&[int(1)], &[]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn interpolates_over_quadratic_field() {
        type Q2 = QuadraticElement<2>;
        let r = Q2::sqrt_radicand();
        let nodes = [Q2::zero(), r.clone(), Q2::from(int(1))];
        let p = DensePolynomial::new(vec![r.clone(), Q2::from(int(3)), Q2::from(rat(1, 2))]);
        let values: Vec<Q2> = nodes.iter().map(|x| p.evaluate(x)).collect();
        assert_eq!(lagrange_interpolate(&nodes, &values).unwrap(), p);
    }

    #[test]
    fn trims_and_evaluates() {
        let p = DensePolynomial::new(vec![int(1), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(DensePolynomial::<BigRational>::new(vec![int(0)]).degree(), None);
        let q = DensePolynomial::new(vec![int(-1), int(0), int(2)]);
        assert_eq!(q.evaluate(&rat(1, 2)), rat(-1, 2));
    }

    #[test]
    fn propagation_on_polynomial_and_indicator() {
        let p = DensePolynomial::new(vec![rat(1, 3), int(-2), int(0), int(5)]);
        let r = propagation_check(&p, &rat(2, 7), &rat(-3, 5), 3, -6..=9).unwrap();
        assert!(r.agrees());
        assert_eq!(r.polynomial, p);

        let phi = BallIndicator::unit_ball(ctx3());
        let r = propagation_check(&phi, &int(0), &int(1), 0, -5..=5).unwrap();
        assert!(r.agrees());
        assert_eq!(r.polynomial.coefficients(), &[int(1)]);
        assert_eq!(r.checked_base_points.len(), 10);

        match propagation_check(&phi, &int(0), &rat(1, 3), 0, -5..=5) {
            Err(Error::VanishingHypothesisViolation { at, value }) => {
                assert_eq!(at, "0");
                assert_eq!(value, "-1");
            }
            other => panic!("expected violation, got {other:?}"),
        }
        assert!(propagation_check(&p, &int(0), &int(1), 3, 1..=9).is_err());
    }

    #[test]
    fn refinement() {
        let p = DensePolynomial::new(vec![int(4), rat(-1, 2), int(3)]);
        for m in 0..=3 {
            assert!(refinement_consistency(&p, &rat(1, 5), &int(2), 2, m, &ctx3()).unwrap().consistent());
        }
        let phi = BallIndicator::unit_ball(ctx3());
        assert!(matches!(
            refinement_consistency(&phi, &int(0), &int(1), 0, 1, &ctx3()),
            Err(Error::VanishingHypothesisViolation { .. })
        ));
        assert!(refinement_consistency(&phi, &int(0), &int(1), 0, 0, &ctx3()).unwrap().consistent());
    }

    #[test]
    fn local_reconstruction() {
        let phi = BallIndicator::unit_ball(ctx3());
        let r = local_reconstruct(&phi, &int(0), 0, 0, &ctx3(), 10).unwrap();
        assert!(r.locally_polynomial());
        assert!(r.violations.is_empty());

        let r = local_reconstruct(&phi, &int(0), -1, 0, &ctx3(), 10).unwrap();
        assert!(!r.locally_polynomial());
        assert!(!r.violations.is_empty());

        let p = DensePolynomial::new(vec![int(1), int(1), int(1)]);
        assert!(local_reconstruct(&p, &rat(1, 2), 2, 2, &ctx3(), 5).unwrap().locally_polynomial());
    }

    #[test]
    fn grid_points() {
        let g = GridSpec { x0: int(0), h0: int(1), m_range: 0..=1, k_range: 0..=3, context: ctx3() };
        // 0,1,2,3 and 0,1/3,2/3,1
        assert_eq!(g.points().len(), 6);
    }

    #[test]
    fn polynomial_difference_annihilates() {
        let p = DensePolynomial::new(vec![int(1), int(2), int(3)]);
        assert!(polynomial_difference(&p, &rat(1, 7), &rat(5, 3), 3).is_zero());
        assert_eq!(polynomial_difference(&p, &int(0), &int(1), 2), int(6));
    }
}
