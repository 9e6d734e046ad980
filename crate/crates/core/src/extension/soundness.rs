//! Functions that vanish on every instance of an order-1 certificate, used
//! to confirm that the target difference vanishes too.

use std::collections::HashMap;

use crate::arith::{BigRational, Scalar};
use crate::difference::Function;
use crate::error::Result;
use crate::gallery::TabulatedFn;

use super::certificate::ExtensionCertificate;

/// Tabulated away from the certificate's support; on the support, constant
/// on each class of points linked by an instance `f(y + g) − f(y)`, so
/// every instance evaluates to zero.
#[derive(Debug)]
pub struct InstanceVanishingFn {
    support: HashMap<BigRational, BigRational>,
    fallback: TabulatedFn,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl InstanceVanishingFn {
    /// `None` when the certificate has instances of order above one.
    pub fn for_order_one(cert: &ExtensionCertificate, seed: u64) -> Option<Self> {
        if cert.instances.iter().any(|i| i.steps.len() != 1) {
            return None;
        }
        let mut index: HashMap<BigRational, usize> = HashMap::new();
        let mut points: Vec<BigRational> = Vec::new();
        let mut id = |p: BigRational, points: &mut Vec<BigRational>| -> usize {
            *index.entry(p.clone()).or_insert_with(|| {
                points.push(p);
                points.len() - 1
            })
        };
        let mut edges = Vec::with_capacity(cert.instances.len());
        for inst in &cert.instances {
            let a = id(inst.base.clone(), &mut points);
            let b = id(&inst.base + &inst.steps[0], &mut points);
            edges.push((a, b));
        }
        // target points outside every instance keep tabulated values
        let mut parent: Vec<usize> = (0..points.len()).collect();
        for (a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                // the smaller index is the representative, so values are deterministic
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let fallback = TabulatedFn::new(seed);
        let mut support = HashMap::with_capacity(points.len());
        for i in 0..points.len() {
            let root = find(&mut parent, i);
            let value = fallback.value_for_key(&points[root].canonical_key());
            support.insert(points[i].clone(), value);
        }
        Some(Self { support, fallback })
    }
}

impl Function<BigRational> for InstanceVanishingFn {
    fn eval(&self, x: &BigRational) -> Result<BigRational> {
        match self.support.get(x) {
            Some(v) => Ok(v.clone()),
            None => self.fallback.eval(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, PAdicContext};
    use crate::extension::{padic_order1_certificate, real_order1_certificate, StepDomain};
    use num_traits::Zero;

    #[test]
    fn vanishes_on_instances_and_target() {
        let d = StepDomain::real_interval(int(1), int(2)).unwrap();
        let cert = real_order1_certificate(&int(3), &int(-10), &d).unwrap();
        for seed in 0..5 {
            let f = InstanceVanishingFn::for_order_one(&cert, seed).unwrap();
            for inst in &cert.instances {
                assert!(inst.expand().unwrap().apply(&f).unwrap().is_zero());
            }
            assert!(cert.target.apply(&f).unwrap().is_zero());
        }

        let c3 = PAdicContext::with_prime(3).unwrap();
        let d = StepDomain::ball_complement(int(0), 1, c3);
        let cert = padic_order1_certificate(&int(0), &crate::arith::rat(1, 3), &d).unwrap();
        let f = InstanceVanishingFn::for_order_one(&cert, 11).unwrap();
        assert!(cert.target.apply(&f).unwrap().is_zero());
    }
}
