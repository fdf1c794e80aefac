//! Fixtures shared by the integration-test binaries: the worked decorations
//! and the golden-file comparisons on them.

#![allow(dead_code)]

use multipsi::decoration::{underline_involution, Decoration, HuePartition};
use multipsi::graph::ColorProfile;
use multipsi::hue::{hue_involution_with_case, InvolutionCase, Situation};
use multipsi::ExponentProfile;

pub fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

pub fn exponents(sizes: &[usize], pairs: &[(usize, usize)]) -> ExponentProfile {
    let p = ColorProfile::new(sizes.to_vec()).unwrap();
    let mut k = vec![0usize; p.n()];
    for &(point, kv) in pairs {
        k[point - 1] = kv;
    }
    ExponentProfile::new(p, k).unwrap()
}

pub fn decoration(
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

/// The five-color sample decoration of ψ₁²ψ₂³ψ₃⁵·ψ₇⁴·ψ₁₈ψ₁₉ on [6,5,4,2,2].
pub fn running_decoration() -> Decoration {
    let e = exponents(
        &[6, 5, 4, 2, 2],
        &[(1, 2), (2, 3), (3, 5), (7, 4), (18, 1), (19, 1)],
    );
    decoration(
        &e,
        &[&[1, 3], &[2], &[7], &[18, 19]],
        &[
            (2, &[7]),
            (3, &[1, 3]),
            (4, &[18, 19]),
            (5, &[1, 3]),
            (6, &[2]),
            (8, &[1, 3]),
            (9, &[7]),
            (10, &[1, 3]),
            (11, &[7]),
            (13, &[2]),
            (14, &[7]),
            (15, &[1, 3]),
            (16, &[2]),
            (17, &[1, 3]),
            (18, &[1, 3]),
            (19, &[18, 19]),
        ],
        &[3, 6, 9, 11, 19],
    )
}

/// ψ₁⋯ψ₆ψ₇²ψ₈³·ψ₁₀³ on [9,4,4] with hue {5,6}, the chain worked example.
pub fn chain_decoration() -> Decoration {
    let e = exponents(
        &[9, 4, 4],
        &[(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 2), (8, 3), (10, 3)],
    );
    decoration(
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
    )
}

/// The modified chain example: 3 takes hue {8} and 13 takes hue {7}.
pub fn modified_chain_decoration() -> Decoration {
    let e = chain_decoration().exponents().clone();
    decoration(
        &e,
        &[&[1], &[2], &[3], &[4], &[5, 6], &[7], &[8], &[10]],
        &[
            (2, &[5, 6]),
            (3, &[8]),
            (4, &[8]),
            (5, &[1]),
            (6, &[5, 6]),
            (7, &[10]),
            (8, &[7]),
            (9, &[10]),
            (11, &[8]),
            (12, &[3]),
            (13, &[7]),
            (15, &[2]),
            (16, &[10]),
            (17, &[4]),
        ],
        &[6],
    )
}

/// ψ₃ψ₄ψ₅²ψ₆²ψ₇²ψ₈³ψ₉³ψ₁₀³ on [2,8,5,5], the Situation NQ figure.
pub fn nq_decoration() -> Decoration {
    let e = exponents(
        &[2, 8, 5, 5],
        &[(3, 1), (4, 1), (5, 2), (6, 2), (7, 2), (8, 3), (9, 3), (10, 3)],
    );
    decoration(
        &e,
        &[&[3], &[4], &[5], &[6], &[7, 8], &[9], &[10]],
        &[
            (2, &[7, 8]),
            (4, &[6]),
            (5, &[9]),
            (6, &[9]),
            (7, &[6]),
            (8, &[7, 8]),
            (9, &[5]),
            (10, &[7, 8]),
            (12, &[5]),
            (13, &[3]),
            (14, &[10]),
            (15, &[4]),
            (16, &[7, 8]),
            (17, &[10]),
            (18, &[10]),
            (19, &[9]),
            (20, &[7, 8]),
        ],
        &[8],
    )
}

/// Serialized form matches the file byte-for-byte and parses back equal.
pub fn assert_matches_file(d: &Decoration, name: &str) {
    let expected = golden(name);
    assert_eq!(format!("{d}\n"), expected, "serialized form drifted from {name}");
    let parsed = Decoration::parse(d.exponents(), &expected).expect("golden file parses");
    assert_eq!(&parsed, d, "parse of {name} lost information");
}

/// All golden-file checks in one pass; returns a short summary.
pub fn golden_suite() -> Result<String, String> {
    let run = std::panic::catch_unwind(|| {
        assert_matches_file(&running_decoration(), "running_decoration.txt");
        assert_matches_file(&chain_decoration(), "hue_chain.txt");
        assert_matches_file(&modified_chain_decoration(), "mod_hue_chain.txt");
        assert_matches_file(&nq_decoration(), "situation_nq_input.txt");

        let d = modified_chain_decoration();
        let (merged, case) = hue_involution_with_case(&d).expect("mismatched input");
        assert_eq!(case, InvolutionCase::Merge(Situation::Q));
        assert_matches_file(&merged, "situation_q_merged.txt");
        let (back, case) = hue_involution_with_case(&merged).expect("mismatched image");
        assert_eq!(case, InvolutionCase::Split(Situation::Q));
        assert_eq!(back, d);

        let d = nq_decoration();
        let (split, case) = hue_involution_with_case(&d).expect("mismatched input");
        assert_eq!(case, InvolutionCase::Split(Situation::NQ));
        assert_matches_file(&split, "situation_nq_split.txt");
        let (back, case) = hue_involution_with_case(&split).expect("mismatched image");
        assert_eq!(case, InvolutionCase::Merge(Situation::NQ));
        assert_eq!(back, d);

        let d = running_decoration();
        let image = underline_involution(&d);
        assert_ne!(image, d);
        assert_eq!(underline_involution(&image), d);
    });
    match run {
        Ok(()) => Ok("6 files round-tripped; merge/split figures reproduced".into()),
        Err(e) => Err(match e.downcast_ref::<String>() {
            Some(s) => s.clone(),
            None => "golden-file comparison panicked".into(),
        }),
    }
}
