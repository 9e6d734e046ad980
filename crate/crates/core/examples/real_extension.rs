//! Certifying Δ_h f(x) = 0 for every real h from steps in a short interval.

use frechet::arith::rat;
use frechet::difference::StepVector;
use frechet::extension::{
    mixed_extension_certificate, real_order1_certificate, verify_certificate, Budgets, HypothesisDomain, StepDomain,
};

pub fn main() {
    let interval = StepDomain::real_interval(rat(1, 1), rat(2, 1)).unwrap();
    let hyp = HypothesisDomain::Mixed(vec![interval.clone()]);

    let cert = real_order1_certificate(&rat(0, 1), &rat(-5, 2), &interval).unwrap();
    println!("{} instances", cert.len());
    for inst in &cert.instances {
        println!("  {}", inst.encode());
    }
    let verdict = verify_certificate(&cert, &hyp);
    assert!(verdict.accepted(), "{:?}", verdict.diagnostic);

    // second order, one interval per coordinate
    let domains = vec![interval.clone(), StepDomain::real_interval(rat(-1, 4), rat(1, 4)).unwrap()];
    let steps = StepVector::new(vec![rat(3, 1), rat(7, 8)]).unwrap();
    let cert = mixed_extension_certificate(&rat(1, 3), &steps, &domains, &Budgets::default()).unwrap();
    println!("order 2: {} instances, accepted = {}", cert.len(), verify_certificate(&cert, &HypothesisDomain::Mixed(domains)).accepted());
}
