//! Run the exhaustive identity sweeps at a moderate size and print their
//! reports — the same machinery behind `multipsi verify`.
//!
//! Run with `cargo run --release --example verification`.

use multipsi::verify::run_standard;

fn main() {
    let mut all_ok = true;
    for report in run_standard(8, 5, 4) {
        println!("{report}");
        all_ok &= report.passed();
    }
    assert!(all_ok, "a verification sweep found violations");
    println!("all sweeps passed");
}
