//! Two heavy points and n light ones: the space with profile [1, n, 1].
//!
//! Integrals of ψ₀ᵃψ∞ᵇ (exponents only on the heavy points, a + b = n − 1)
//! equal the binomial coefficient C(n−1, a); any exponent on a light point
//! kills the integral. Run with `cargo run --example losev_manin`.

use multipsi::psi::{intersection_number, losev_manin_profile, losev_manin_value};
use multipsi::Method;

fn main() {
    for n in 1..=7usize {
        print!("n = {n}:");
        for a in 0..n {
            let b = n - 1 - a;
            let e = losev_manin_profile(n, a, b, &vec![0; n]).unwrap();
            let value = intersection_number(&e, Method::Both).unwrap();
            assert_eq!(value, losev_manin_value(n, a, b, &vec![0; n]).unwrap());
            print!("  ψ₀^{a}ψ∞^{b} = {value}");
        }
        println!();
    }

    // One unit of exponent moved onto a light point: zero.
    let n = 5;
    let mut light = vec![0usize; n];
    light[0] = 1;
    let e = losev_manin_profile(n, 2, 1, &light).unwrap();
    let value = intersection_number(&e, Method::Both).unwrap();
    println!("\nwith a light ψ factor ({e}): {value}");
}
