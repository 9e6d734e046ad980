//! Valuations, absolute values and digit expansions in ℚ_p.

use frechet::arith::{rat, PAdicContext};

pub fn main() {
    let q3 = PAdicContext::new(3, 6).expect("3 is prime");
    for x in [rat(18, 1), rat(-5, 27), rat(7, 2), rat(0, 1)] {
        println!("x = {x:>6}  v_3 = {:>3}  |x|_3 = {:>4}  digits: {}", q3.valuation(&x).to_string(), q3.abs(&x), q3.digit_expansion(&x));
    }

    // strict inequality |x + y|_p = max(|x|_p, |y|_p) when the valuations differ
    let report = q3.ultrametric_dominance(&rat(9, 1), &rat(1, 3)).expect("valuations differ");
    println!("dominance: {}", serde_json::to_string(&report).unwrap());
    assert!(report.holds);
}
