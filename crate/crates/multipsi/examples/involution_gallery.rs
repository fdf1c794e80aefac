//! A tour of the decorated objects behind the fixed-point count: number
//! chains, permission checks, and the two sign-reversing involutions.
//!
//! Run with `cargo run --example involution_gallery`.

use multipsi::decoration::{decoration_sign, is_mismatched, underline_involution, Decoration};
use multipsi::hue::{
    has_permission, hue_involution_with_case, merge_targets, number_chain,
};
use multipsi::{ColorProfile, ExponentProfile, HuePartition};

fn exponents(sizes: &[usize], pairs: &[(usize, usize)]) -> ExponentProfile {
    let p = ColorProfile::new(sizes.to_vec()).unwrap();
    let mut k = vec![0usize; p.n()];
    for &(point, kv) in pairs {
        k[point - 1] = kv;
    }
    ExponentProfile::new(p, k).unwrap()
}

fn decoration(
    e: &ExponentProfile,
    blocks: &[&[usize]],
    hues: &[(usize, &[usize])],
    underlines: &[usize],
) -> Decoration {
    let partition = HuePartition::new(
        e,
        blocks.iter().map(|b| b.iter().map(|&p| p - 1).collect()).collect(),
    )
    .unwrap();
    let mut hue_of = vec![None; e.n()];
    for &(p, set) in hues {
        let set: Vec<usize> = set.iter().map(|&q| q - 1).collect();
        let idx = partition.blocks().iter().position(|blk| *blk == set).unwrap();
        hue_of[p - 1] = Some(idx);
    }
    let mut underlined = vec![false; e.n()];
    for &p in underlines {
        underlined[p - 1] = true;
    }
    Decoration::new(e.clone(), partition, hue_of, underlined).unwrap()
}

fn main() {
    // ψ₁⋯ψ₆ψ₇²ψ₈³·ψ₁₀³ on [9,4,4], hue partition with one pair {5,6}.
    let e = exponents(
        &[9, 4, 4],
        &[(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 2), (8, 3), (10, 3)],
    );
    let d = decoration(
        &e,
        &[&[1], &[2], &[3], &[4], &[5, 6], &[7], &[8], &[10]],
        &[
            (2, &[5, 6]),
            (3, &[7]),
            (4, &[8]),
            (5, &[1]),
            (6, &[5, 6]),
            (7, &[10]),
            (8, &[7]),
            (9, &[10]),
            (11, &[8]),
            (12, &[3]),
            (13, &[8]),
            (15, &[2]),
            (16, &[10]),
            (17, &[4]),
        ],
        &[6],
    );
    println!("decoration (sign {}, mismatched: {}):", decoration_sign(&d), is_mismatched(&d));
    println!("{d}\n");

    let chains = number_chain(&d, 0);
    println!("number chains of color C1: {chains}");
    println!("hue chains:                {}\n", chains.hue_display(&d));

    // The singleton hue {1} wants to merge with the pair block {5,6};
    // permission is granted, so the involution merges them.
    let t = 0;
    for b in merge_targets(&d, t) {
        let report = has_permission(&d, t, b).unwrap();
        println!(
            "merge of {{1}} into {:?}: granted = {}, situation {}",
            d.hue_partition().blocks()[b].iter().map(|p| p + 1).collect::<Vec<_>>(),
            report.granted,
            report.situation
        );
    }
    let (image, case) = hue_involution_with_case(&d).unwrap();
    println!("hue involution case: {case:?}");
    println!("{image}\n");
    let (back, _) = hue_involution_with_case(&image).unwrap();
    assert_eq!(back, d);
    println!("applying it again returns the original: true\n");

    // The underline involution pairs off decorations that are not
    // mismatched. Swapping the hues of 8 and 9 gives the unboxed number 9 a
    // hue of its own color; the involution toggles an underline there.
    let matched = decoration(
        &e,
        &[&[1], &[2], &[3], &[4], &[5, 6], &[7], &[8], &[10]],
        &[
            (2, &[5, 6]),
            (3, &[7]),
            (4, &[8]),
            (5, &[1]),
            (6, &[5, 6]),
            (7, &[10]),
            (8, &[10]),
            (9, &[7]),
            (11, &[8]),
            (12, &[3]),
            (13, &[8]),
            (15, &[2]),
            (16, &[10]),
            (17, &[4]),
        ],
        &[6],
    );
    assert!(!is_mismatched(&matched));
    let toggled = underline_involution(&matched);
    println!(
        "underline involution on a matched decoration: sign {} → {}",
        decoration_sign(&matched),
        decoration_sign(&toggled)
    );
    assert!(toggled.is_underlined(8), "the underline lands on number 9");
    assert_eq!(underline_involution(&toggled), matched);
}
