use std::collections::BTreeMap;

use indexmap::IndexMap;
use num_traits::Zero;
use serde_json::{json, Value};

use super::domain::HypothesisDomain;
use crate::arith::{to_canonical, BigRational};
use crate::difference::{functional_expansion, FormalFunctional, OperatorKind, StepVector};
use crate::error::Result;

/// `coefficient · Δ f(base)` for a mixed or equal-step operator. Equal-step
/// instances carry `s` copies of their step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub coefficient: BigRational,
    pub kind: OperatorKind,
    pub base: BigRational,
    pub steps: Vec<BigRational>,
}

impl Instance {
    /// Point-mass form of the bare operator (coefficient not applied).
    pub fn expand(&self) -> Result<FormalFunctional<BigRational>> {
        let steps = StepVector::new(self.steps.clone())?;
        functional_expansion(self.kind, &steps, &self.base)
    }

    pub fn encode(&self) -> Value {
        json!({
            "coefficient": to_canonical(&self.coefficient),
            "kind": self.kind.as_str(),
            "x": to_canonical(&self.base),
            "steps": self.steps.iter().map(to_canonical).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub parameters: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(generator: &str) -> Self {
        Self { generator: generator.to_string(), parameters: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

/// A claim that `target` equals `Σ coefficient · instance` as functionals,
/// where every instance lies in some hypothesis domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCertificate {
    pub target: FormalFunctional<BigRational>,
    pub instances: Vec<Instance>,
    pub provenance: Provenance,
}

impl ExtensionCertificate {
    /// Merges instances with identical `(kind, base, steps)` in first-seen
    /// order and drops the ones whose coefficients cancel.
    pub fn new(target: FormalFunctional<BigRational>, instances: Vec<Instance>, provenance: Provenance) -> Self {
        let mut merged: IndexMap<(OperatorKind, BigRational, Vec<BigRational>), BigRational> = IndexMap::new();
        for inst in instances {
            *merged.entry((inst.kind, inst.base, inst.steps)).or_insert_with(BigRational::zero) += inst.coefficient;
        }
        let instances = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((kind, base, steps), coefficient)| Instance { coefficient, kind, base, steps })
            .collect();
        Self { target, instances, provenance }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn encode(&self) -> Value {
        json!({
            "target": self.target.encode(),
            "instances": self.instances.iter().map(Instance::encode).collect::<Vec<_>>(),
            "provenance": {
                "generator": self.provenance.generator,
                "parameters": self.provenance.parameters,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// A step falls outside its hypothesis domain.
    Membership { instance: usize, coordinate: usize, step: BigRational },
    OrderMismatch { instance: usize, expected: usize, found: usize },
    /// An equal-step hypothesis was given a mixed instance.
    KindMismatch { instance: usize },
    Malformed { instance: usize, reason: String },
    /// `target − Σ coefficient · instance`, when nonzero.
    Residual(FormalFunctional<BigRational>),
}

impl Diagnostic {
    pub fn encode(&self) -> Value {
        match self {
            Diagnostic::Membership { instance, coordinate, step } => json!({
                "failure": "membership",
                "instance": instance,
                "coordinate": coordinate,
                "step": to_canonical(step),
            }),
            Diagnostic::OrderMismatch { instance, expected, found } => json!({
                "failure": "order",
                "instance": instance,
                "expected": expected,
                "found": found,
            }),
            Diagnostic::KindMismatch { instance } => json!({ "failure": "kind", "instance": instance }),
            Diagnostic::Malformed { instance, reason } => json!({
                "failure": "malformed",
                "instance": instance,
                "reason": reason,
            }),
            Diagnostic::Residual(r) => json!({ "failure": "residual", "residual": r.encode() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub diagnostic: Option<Diagnostic>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.diagnostic.is_none()
    }

    pub fn encode(&self) -> Value {
        json!({
            "accepted": self.accepted(),
            "diagnostic": self.diagnostic.as_ref().map(Diagnostic::encode),
        })
    }
}

/// Accepts iff every instance lies in the hypothesis domain and the
/// instances re-expand, from scratch, to exactly the target.
pub fn verify_certificate(cert: &ExtensionCertificate, hyp: &HypothesisDomain) -> Verdict {
    let reject = |d| Verdict { diagnostic: Some(d) };
    let order = hyp.order();
    for (i, inst) in cert.instances.iter().enumerate() {
        if inst.steps.len() != order {
            return reject(Diagnostic::OrderMismatch { instance: i, expected: order, found: inst.steps.len() });
        }
        match hyp {
            HypothesisDomain::Mixed(domains) => {
                for (k, (h, d)) in inst.steps.iter().zip(domains).enumerate() {
                    if !d.contains(h) {
                        return reject(Diagnostic::Membership { instance: i, coordinate: k, step: h.clone() });
                    }
                }
            }
            HypothesisDomain::EqualStep { interval, .. } => {
                if inst.kind != OperatorKind::EqualStep {
                    return reject(Diagnostic::KindMismatch { instance: i });
                }
                for (k, h) in inst.steps.iter().enumerate() {
                    if !interval.contains(h) {
                        return reject(Diagnostic::Membership { instance: i, coordinate: k, step: h.clone() });
                    }
                }
            }
        }
    }

    let mut residual = cert.target.clone();
    for (i, inst) in cert.instances.iter().enumerate() {
        match inst.expand() {
            Ok(f) => residual.add_scaled(&f, &-inst.coefficient.clone()),
            Err(e) => return reject(Diagnostic::Malformed { instance: i, reason: e.to_string() }),
        }
    }
    if residual.is_zero() {
        Verdict { diagnostic: None }
    } else {
        reject(Diagnostic::Residual(residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::extension::StepDomain;

    fn order1(coefficient: BigRational, base: BigRational, step: BigRational) -> Instance {
        Instance { coefficient, kind: OperatorKind::Mixed, base, steps: vec![step] }
    }

    fn interval_12() -> HypothesisDomain {
        HypothesisDomain::Mixed(vec![StepDomain::real_interval(int(1), int(2)).unwrap()])
    }

    #[test]
    fn accepts_hand_built_two_chain() {
        // Δ_3[0] = Δ_{3/2}[0] + Δ_{3/2}[3/2]
        let target = FormalFunctional::forward(&int(0), &int(3));
        let cert = ExtensionCertificate::new(
            target,
            vec![order1(int(1), int(0), rat(3, 2)), order1(int(1), rat(3, 2), rat(3, 2))],
            Provenance::new("hand"),
        );
        assert!(verify_certificate(&cert, &interval_12()).accepted());
    }

    #[test]
    fn rejects_endpoint_step() {
        let target = FormalFunctional::forward(&int(0), &int(2));
        let cert = ExtensionCertificate::new(target, vec![order1(int(1), int(0), int(2))], Provenance::new("hand"));
        let v = verify_certificate(&cert, &interval_12());
        assert_eq!(v.diagnostic, Some(Diagnostic::Membership { instance: 0, coordinate: 0, step: int(2) }));
    }

    #[test]
    fn empty_certificate_leaves_target_as_residual() {
        let target = FormalFunctional::forward(&int(0), &int(5));
        let cert = ExtensionCertificate::new(target.clone(), vec![], Provenance::new("hand"));
        assert_eq!(verify_certificate(&cert, &interval_12()).diagnostic, Some(Diagnostic::Residual(target)));
    }

    #[test]
    fn merges_and_cancels() {
        let cert = ExtensionCertificate::new(
            FormalFunctional::zero(),
            vec![
                order1(int(1), int(0), rat(3, 2)),
                order1(int(2), int(1), rat(3, 2)),
                order1(int(-1), int(0), rat(3, 2)),
            ],
            Provenance::new("hand"),
        );
        assert_eq!(cert.len(), 1);
        assert_eq!(cert.instances[0].coefficient, int(2));
    }

    #[test]
    fn equal_step_hypothesis_rejects_mixed_instances() {
        let hyp = HypothesisDomain::EqualStep { interval: StepDomain::real_interval(int(0), int(1)).unwrap(), order: 1 };
        let cert = ExtensionCertificate::new(
            FormalFunctional::forward(&int(0), &rat(1, 2)),
            vec![order1(int(1), int(0), rat(1, 2))],
            Provenance::new("hand"),
        );
        assert_eq!(verify_certificate(&cert, &hyp).diagnostic, Some(Diagnostic::KindMismatch { instance: 0 }));
    }

    #[test]
    fn order_mismatch_is_reported() {
        let cert = ExtensionCertificate::new(
            FormalFunctional::zero(),
            vec![Instance { coefficient: int(1), kind: OperatorKind::Mixed, base: int(0), steps: vec![rat(3, 2); 2] }],
            Provenance::new("hand"),
        );
        assert!(matches!(
            verify_certificate(&cert, &interval_12()).diagnostic,
            Some(Diagnostic::OrderMismatch { expected: 1, found: 2, .. })
        ));
    }
}
