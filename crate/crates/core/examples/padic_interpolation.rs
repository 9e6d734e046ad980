//! Lagrange propagation and refinement for a polynomial and for the
//! unit-ball indicator, which fails them.

use frechet::arith::{rat, PAdicContext};
use frechet::gallery::BallIndicator;
use frechet::interpolation::{local_reconstruct, propagation_check, refinement_consistency, DensePolynomial};

pub fn main() {
    let ctx = PAdicContext::with_prime(3).unwrap();
    let p = DensePolynomial::new(vec![rat(1, 1), rat(-2, 3), rat(0, 1), rat(5, 2)]);

    let report = propagation_check(&p, &rat(1, 2), &rat(1, 1), 3, -20..=20).unwrap();
    println!("propagation agrees on {} base points: {}", report.checked_base_points.len(), report.agrees());
    assert!(report.agrees() && report.polynomial == p);

    for m in 0..=3 {
        let r = refinement_consistency(&p, &rat(1, 2), &rat(1, 1), 3, m, &ctx).unwrap();
        assert!(r.consistent(), "refinement by 3^{m}");
    }

    let phi = BallIndicator::unit_ball(ctx.clone());
    let local = local_reconstruct(&phi, &rat(0, 1), -1, 0, &ctx, 5).unwrap();
    println!("unit-ball indicator locally constant near 0 on 3^(-1)ℤ_3: {}", local.locally_polynomial());
    println!("{}", serde_json::to_string_pretty(&local.encode()).unwrap());
}
