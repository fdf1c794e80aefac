//! Compute ψ-class intersection numbers on multicolored moduli spaces by
//! two independent routes and cross-check them.
//!
//! Run with `cargo run --example intersection_numbers`.

use multipsi::decoration::canonical_exponent_vectors;
use multipsi::hue::enumerate_fixed_points;
use multipsi::psi::{color_merge_check, intersection_number, multinomial, multinomial_oracle};
use multipsi::{ColorProfile, ExponentProfile, Method};

fn main() {
    // ∫ ψ₁²ψ₆²ψ₇³ over M₀,[5,4,1]: five points of one color, four of a
    // second, one of a third. Σk = 7 = n − 3.
    let profile = ColorProfile::new(vec![5, 4, 1]).unwrap();
    let mut k = vec![0usize; 10];
    (k[0], k[5], k[6]) = (2, 2, 3);
    let e = ExponentProfile::new(profile, k).unwrap();

    println!("instance: {e}");
    let by_fixed_points = intersection_number(&e, Method::FixedPoints).unwrap();
    let by_oracle = intersection_number(&e, Method::Oracle).unwrap();
    println!("fixed-point enumeration: {by_fixed_points}");
    println!("inclusion-exclusion oracle: {by_oracle}");
    let both = intersection_number(&e, Method::Both).unwrap();
    println!("cross-checked value: {both}\n");

    println!("the {} fixed-point decorations:", by_fixed_points);
    for (i, d) in enumerate_fixed_points(&e).iter().enumerate() {
        println!("--- fixed point {} ---\n{d}", i + 1);
    }

    // With every color a singleton the space is the classical M₀,ₙ and the
    // integral is the multinomial coefficient (n−3; k₁,…,kₙ).
    println!("\nclassical M₀,₆ recovery:");
    let m06 = ColorProfile::new(vec![1; 6]).unwrap();
    for e in canonical_exponent_vectors(&m06) {
        let value = multinomial_oracle(&e);
        let expected = multinomial(&e.exponents().iter().copied().collect::<Vec<_>>());
        assert_eq!(value, expected);
        println!("  {e}  =  {value}");
    }

    // Colors that carry no exponent can be merged without changing the
    // integral; `color_merge_check` computes both sides and compares.
    let profile = ColorProfile::new(vec![2, 2, 1, 1]).unwrap();
    let mut k = vec![0usize; 6];
    (k[0], k[1]) = (1, 2);
    let e = ExponentProfile::new(profile, k).unwrap();
    println!("\nmerging the exponent-free colors 3 and 4 of {e}:");
    println!("values agree: {}", color_merge_check(&e, 2, 3).unwrap());
}
