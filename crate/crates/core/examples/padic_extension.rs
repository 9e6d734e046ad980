//! Certifying Δ_h f(x) from steps outside a p-adic ball, directly and by
//! telescoping.

use frechet::arith::{rat, PAdicContext};
use frechet::extension::{
    minimal_telescope_exponent, padic_order1_certificate, telescoping_padic_certificate, verify_certificate, Budgets,
    HypothesisDomain, StepDomain,
};

pub fn main() {
    let ctx = PAdicContext::with_prime(3).unwrap();
    // steps with |h|_3 > 3, i.e. outside 3^{-1}ℤ_3
    let domain = StepDomain::ball_complement(rat(0, 1), 1, ctx);
    let hyp = HypothesisDomain::Mixed(vec![domain.clone()]);
    let (x, h) = (rat(2, 1), rat(5, 1));

    let cert = padic_order1_certificate(&x, &h, &domain).unwrap();
    println!("{}", serde_json::to_string_pretty(&cert.encode()).unwrap());
    assert_eq!(cert.len(), 2);
    assert!(verify_certificate(&cert, &hyp).accepted());

    let m = minimal_telescope_exponent(&h, &domain).unwrap();
    let long = telescoping_padic_certificate(&x, &h, &domain, m, &Budgets::default()).unwrap();
    println!("telescoping with step 3^-{m}: {} instances, accepted = {}", long.len(), verify_certificate(&long, &hyp).accepted());
}
