//! From Δ^s_h f = 0 for 0 < h < δ to every mixed difference of order s.

use frechet::arith::rat;
use frechet::difference::StepVector;
use frechet::extension::{equal_step_extension_certificate, equal_step_hypothesis, verify_certificate, Budgets, Side};

pub fn main() {
    let delta = rat(1, 2);
    let steps = StepVector::new(vec![rat(3, 1), rat(-1, 5)]).unwrap();
    for side in [Side::Positive, Side::Negative] {
        let cert = equal_step_extension_certificate(&rat(0, 1), &steps, &delta, side, &Budgets::default()).unwrap();
        let hyp = equal_step_hypothesis(&delta, 2, side).unwrap();
        let verdict = verify_certificate(&cert, &hyp);
        println!("{}: {} equal-step instances, accepted = {}", side.as_str(), cert.len(), verdict.accepted());
        assert!(verdict.accepted());
    }
}
