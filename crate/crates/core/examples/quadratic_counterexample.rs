//! A function on ℚ(√2) killed by every rational-step third difference whose
//! equal-step third difference with step √2 is not zero.

use frechet::arith::{rat, QuadraticElement};
use frechet::gallery::{remark1_vanishing_check, remark1_witness, remark1_witness_for_order};

pub fn main() {
    let witness = remark1_witness().unwrap();
    println!("witness: {}", witness.encode());
    assert_eq!(witness.value, QuadraticElement::from(rat(2, 1)));

    let x = QuadraticElement::<2>::new(rat(1, 2), rat(-3, 4));
    let steps = [rat(1, 3), rat(-2, 1), rat(5, 7)].map(QuadraticElement::from);
    let check = remark1_vanishing_check(&steps, &x).unwrap();
    println!("rational steps give {}", check.rhs);
    assert!(check.holds);

    for s in 1..=4 {
        match remark1_witness_for_order(s).unwrap() {
            Some(w) => println!("order {s}: Δ^{s}_√2 at {} = {}", w.x, w.value),
            None => println!("order {s}: no small witness"),
        }
    }
}
