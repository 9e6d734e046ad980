//! Mixed and equal-step differences, and the identities relating them.

use frechet::arith::{int, rat};
use frechet::difference::{
    czerwik_functional, czerwik_identity_check, equal_step_difference, mixed_difference, permutation_invariance_check,
    reflection_identity_check, FormalFunctional, StepVector,
};
use frechet::gallery::TabulatedFn;

pub fn main() {
    let f = TabulatedFn::new(2024);
    let x = rat(1, 3);
    let steps = StepVector::new(vec![rat(1, 2), rat(-3, 5), int(2)]).unwrap();

    let value = mixed_difference(&f, &steps, &x).unwrap();
    println!("Δ_(1/2, -3/5, 2) f(1/3) = {value}");

    // the mixed difference written as a signed sum of equal-step differences
    let identity = czerwik_identity_check(&f, &steps, &x).unwrap();
    println!("equal-step decomposition holds: {}", identity.holds);
    assert!(identity.holds);
    assert_eq!(czerwik_functional(&steps, &x), FormalFunctional::mixed(&x, &steps));

    let swapped = permutation_invariance_check(&f, &steps, &x, &[2, 0, 1]).unwrap();
    assert!(swapped.holds);

    let reflection = reflection_identity_check(&f, &rat(1, 7), 4, &x).unwrap();
    println!("reflection: {}", reflection.encode());
    assert!(reflection.holds);

    let square = |t: &frechet::arith::BigRational| t * t;
    println!("Δ²_h x² = 2h² at h = 3: {}", equal_step_difference(&square, &int(3), 2, &int(5)).unwrap());
}
