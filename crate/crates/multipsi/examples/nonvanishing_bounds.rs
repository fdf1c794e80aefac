//! When is the integral positive, and how tightly do the matching bounds
//! pin it down?
//!
//! Run with `cargo run --example nonvanishing_bounds`.

use multipsi::nonvanishing::{
    count_matchings, count_mismatched_colorings, hall_check, nonzero_predicate, AssignmentGraph,
};
use multipsi::psi::intersection_number;
use multipsi::{ColorProfile, ExponentProfile, Method};

fn exponents(sizes: &[usize], pairs: &[(usize, usize)]) -> ExponentProfile {
    let p = ColorProfile::new(sizes.to_vec()).unwrap();
    let mut k = vec![0usize; p.n()];
    for &(point, kv) in pairs {
        k[point - 1] = kv;
    }
    ExponentProfile::new(p, k).unwrap()
}

fn main() {
    // ψ₁ψ₂ψ₃²·ψ₇ψ₈²ψ₉³ψ₁₀⁴·ψ₁₈ψ₁₉ on [6,5,4,2,2]: every exponent-bearing
    // color satisfies its inequality, so the integral is positive.
    let e = exponents(
        &[6, 5, 4, 2, 2],
        &[(1, 1), (2, 1), (3, 2), (7, 1), (8, 2), (9, 3), (10, 4), (18, 1), (19, 1)],
    );
    println!("instance: {e}");
    let report = nonzero_predicate(&e);
    for row in &report.rows {
        println!(
            "  color C{}: k = {} ≤ {}  ({})",
            row.color + 1,
            row.exponent_total,
            row.bound,
            if row.holds { "holds" } else { "fails" }
        );
    }
    println!("positive: {}", report.nonzero);
    println!(
        "Hall check (hue slots / color slots): {} / {}\n",
        hall_check(&AssignmentGraph::hues(&e)).unwrap(),
        hall_check(&AssignmentGraph::colorings(&e)).unwrap()
    );

    // The coloring and matching counts sandwich the integral.
    let e = exponents(&[5, 4, 1], &[(1, 2), (6, 2), (7, 3)]);
    let lower = count_mismatched_colorings(&e).unwrap();
    let value = intersection_number(&e, Method::Both).unwrap();
    let upper = count_matchings(&e).unwrap();
    println!("sandwich on {e}:");
    println!("  {lower} ≤ {value} ≤ {upper}\n");

    // With at most one ψ class per color the two bounds pinch: all three
    // numbers coincide.
    let e = exponents(&[2, 2, 2, 1], &[(1, 2), (3, 1), (5, 1)]);
    let lower = count_mismatched_colorings(&e).unwrap();
    let value = intersection_number(&e, Method::Both).unwrap();
    let upper = count_matchings(&e).unwrap();
    println!("single ψ class per color on {e}:");
    println!("  {lower} = {value} = {upper}");
    assert!(lower == value && value == upper);
}
