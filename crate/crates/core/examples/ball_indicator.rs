//! The indicator of ℤ_p: locally constant, yet not a polynomial.

use frechet::arith::{rat, BigRational, PAdicContext};
use frechet::difference::forward_difference;
use frechet::gallery::{ball_indicator_local_flatness, BallIndicator};
use num_traits::Zero;

pub fn main() {
    let p = 5;
    let phi = BallIndicator::unit_ball(PAdicContext::with_prime(p).unwrap());

    let jump = forward_difference(&phi, &rat(1, p as i64), &BigRational::zero()).unwrap();
    println!("Δ_(1/{p}) φ(0) = {jump}");
    assert_eq!(jump, rat(-1, 1));

    for (x, h) in [(rat(2, 5), rat(10, 1)), (rat(3, 1), rat(-25, 7))] {
        let r = ball_indicator_local_flatness(&phi, &x, &h).unwrap();
        println!("Δ_{h} φ({x}) = {} (flat: {})", r.lhs, r.holds);
        assert!(r.holds);
    }
}
