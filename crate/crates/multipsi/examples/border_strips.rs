//! The border-strip family: ∫ (ψ₁⋯ψ_r)² over M₀,[r,r,3].
//!
//! The values 1, 5, 61, 1379, 49946, … grow quickly; the r = 5 term takes a
//! while by fixed-point enumeration, so it only runs when asked:
//! `cargo run --release --example border_strips -- --full`.

use multipsi::psi::intersection_number;
use multipsi::{ColorProfile, ExponentProfile, Method};

fn border_strip_instance(r: usize) -> ExponentProfile {
    let profile = ColorProfile::new(vec![r, r, 3]).unwrap();
    let mut k = vec![0usize; 2 * r + 3];
    for point in k.iter_mut().take(r) {
        *point = 2;
    }
    ExponentProfile::new(profile, k).unwrap()
}

fn main() {
    let full = std::env::args().any(|a| a == "--full");
    let top = if full { 5 } else { 4 };
    for r in 1..=top {
        let e = border_strip_instance(r);
        let started = std::time::Instant::now();
        let value = intersection_number(&e, Method::Both).unwrap();
        println!(
            "r = {r}: ∫ (ψ₁⋯ψ_{r})² over M₀,[{r},{r},3] = {value}   ({:.2?})",
            started.elapsed()
        );
    }
    if !full {
        println!("(pass --full for the r = 5 term)");
    }
}
