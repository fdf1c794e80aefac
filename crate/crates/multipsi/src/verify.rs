//! Exhaustive cross-route verification sweeps.
//!
//! Every identity the crate rests on is checkable by brute force on small
//! instances: involutions must square to the identity and reverse signs,
//! alternating sums must collapse to their fixed-point counts, and
//! independent computation routes must agree. The sweeps here enumerate
//! *complete* families — all color profiles up to a point total, all graphs
//! up to a vertex count — and record every violation. They back the `verify`
//! CLI subcommand and the acceptance suite.

use std::fmt;

use num::BigInt;
use num::Zero;

use crate::decoration::{
    canonical_exponent_vectors, decoration_sign, enumerate_decorations, is_mismatched,
    underline_involution, ExponentProfile,
};
use crate::graph::{ColorProfile, SimpleGraph};
use crate::hue::{count_fixed_points, hue_involution_with_case, is_fixed_point, InvolutionCase};
use crate::nonvanishing::{
    count_matchings, count_mismatched_colorings, hall_check, nonzero_predicate, AssignmentGraph,
};
use crate::osp::{enumerate_osps, merge_split_involution};
use crate::psi::multinomial_oracle;
use crate::strata::{
    aco_to_caterpillar, alternating_strata_sum, caterpillar_to_aco, enumerate_millipedes,
    fast_strata_sum, for_each_stable_tree, left_right_fixed_points, left_right_involution,
    millipede_signed_sum, up_down_involution, Millipede,
};
use crate::Result;

/// Outcome of one sweep: how many checks ran, how many failed, and the first
/// failure in human-readable form.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub name: String,
    pub checks: u64,
    pub violations: u64,
    pub first_failure: Option<String>,
}

impl SweepReport {
    fn new(name: impl Into<String>) -> Self {
        SweepReport { name: name.into(), checks: 0, violations: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checks, {} violations — {}",
            self.name,
            self.checks,
            self.violations,
            if self.passed() { "ok" } else { "FAIL" }
        )?;
        if let Some(detail) = &self.first_failure {
            write!(f, "\n  first failure: {detail}")?;
        }
        Ok(())
    }
}

/// All color profiles (compositions into ≥ 3 positive parts) with point
/// total `n`, in lexicographic order.
pub fn color_profiles_with_total(n: usize) -> Vec<ColorProfile> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    descend(n, &mut parts, &mut out);
    return out;

    fn descend(remaining: usize, parts: &mut Vec<usize>, out: &mut Vec<ColorProfile>) {
        if remaining == 0 {
            if parts.len() >= 3 {
                out.push(ColorProfile::new(parts.clone()).expect("positive parts"));
            }
            return;
        }
        for first in 1..=remaining {
            parts.push(first);
            descend(remaining - first, parts, out);
            parts.pop();
        }
    }
}

/// Visit every canonical exponent vector of every profile with total in
/// `3..=n_max`, in deterministic order.
pub fn for_each_instance(n_max: usize, mut visit: impl FnMut(&ExponentProfile)) {
    for n in 3..=n_max {
        for profile in color_profiles_with_total(n) {
            for e in canonical_exponent_vectors(&profile) {
                visit(&e);
            }
        }
    }
}

fn edge_pairs(v: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            pairs.push((a, b));
        }
    }
    pairs
}

/// The graph with edge set given by `mask` over the lexicographic pair list
/// of `v` vertices.
pub fn graph_from_mask(v: usize, mask: u64) -> SimpleGraph {
    let pairs = edge_pairs(v);
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &e)| e)
        .collect();
    SimpleGraph::new(v, &edges).expect("valid pairs")
}

/// Visit all graphs on `v` vertices in edge-mask order.
pub fn for_each_graph(v: usize, mut visit: impl FnMut(&SimpleGraph)) {
    let e = edge_pairs(v).len();
    for mask in 0u64..(1 << e) {
        visit(&graph_from_mask(v, mask));
    }
}

/// Extend `h` by two dominating vertices; returns (Γ, P, Q).
pub fn with_dominating(h: &SimpleGraph) -> (SimpleGraph, usize, usize) {
    let v = h.vertex_count();
    let (p, q) = (v, v + 1);
    let mut edges = h.edges();
    for x in 0..v {
        edges.push((x, p));
        edges.push((x, q));
    }
    edges.push((p, q));
    (SimpleGraph::new(v + 2, &edges).expect("valid extension"), p, q)
}

/// Sweep the underline involution over every decoration of every instance
/// with total ≤ `n_max`: involution, sign reversal, fixed ⟺ mismatched, and
/// the signed sum over all decorations collapsing to the signed sum over the
/// mismatched ones.
pub fn underline_involution_sweep(n_max: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("underline involution (n ≤ {n_max})"));
    for_each_instance(n_max, |e| {
        let mut signed = 0i64;
        let mut signed_mismatched = 0i64;
        for d in enumerate_decorations(e) {
            signed += decoration_sign(&d);
            let image = underline_involution(&d);
            let fixed = image == d;
            if is_mismatched(&d) {
                signed_mismatched += decoration_sign(&d);
            }
            report.check(underline_involution(&image) == d, || {
                format!("{e}: underline involution fails to square to identity")
            });
            report.check(fixed == is_mismatched(&d), || {
                format!("{e}: underline fixedness disagrees with mismatchedness")
            });
            if !fixed {
                report.check(decoration_sign(&image) == -decoration_sign(&d), || {
                    format!("{e}: underline toggle failed to reverse the sign")
                });
            }
        }
        report.check(signed == signed_mismatched, || {
            format!(
                "{e}: signed sum {signed} over all decorations ≠ signed sum \
                 {signed_mismatched} over mismatched ones"
            )
        });
    });
    report
}

/// Sweep the hue involution over every mismatched decoration of every
/// instance with total ≤ `n_max`: involution, sign reversal, swapped
/// merge/split case tags, fixed ⟺ the fixed-point predicate, and the signed
/// mismatched sum collapsing to the fixed-point count.
pub fn hue_involution_sweep(n_max: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("hue involution (n ≤ {n_max})"));
    for_each_instance(n_max, |e| {
        let mut signed = 0i64;
        for d in enumerate_decorations(e) {
            if !is_mismatched(&d) {
                continue;
            }
            signed += decoration_sign(&d);
            let (image, case) = hue_involution_with_case(&d).expect("mismatched input");
            report.check(is_mismatched(&image), || {
                format!("{e}: hue involution left the mismatched domain")
            });
            let fixed = image == d;
            report.check(fixed == matches!(case, InvolutionCase::Fixed), || {
                format!("{e}: case tag disagrees with fixedness")
            });
            report.check(fixed == is_fixed_point(&d).expect("mismatched"), || {
                format!("{e}: fixed-point predicate disagrees with the involution")
            });
            let (back, back_case) = hue_involution_with_case(&image).expect("mismatched image");
            report.check(back == d, || {
                format!("{e}: hue involution fails to square to identity")
            });
            if !fixed {
                report.check(decoration_sign(&image) == -decoration_sign(&d), || {
                    format!("{e}: hue involution failed to reverse the sign")
                });
                let swapped = match case {
                    InvolutionCase::Split(s) => back_case == InvolutionCase::Merge(s),
                    InvolutionCase::Merge(s) => back_case == InvolutionCase::Split(s),
                    InvolutionCase::Fixed => false,
                };
                report.check(swapped, || {
                    format!("{e}: merge/split case tags do not swap under the involution")
                });
            }
        }
        let fixed = count_fixed_points(e) as i64;
        report.check(signed == fixed, || {
            format!("{e}: signed mismatched sum {signed} ≠ fixed-point count {fixed}")
        });
    });
    report
}

/// Sweep fixed-point counts against the inclusion–exclusion oracle on every
/// instance with total ≤ `n_max`.
pub fn oracle_equivalence_sweep(n_max: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("fixed points vs oracle (n ≤ {n_max})"));
    for_each_instance(n_max, |e| {
        let fixed = BigInt::from(count_fixed_points(e));
        let oracle = multinomial_oracle(e);
        report.check(fixed == oracle, || {
            format!("{e}: fixed points {fixed} ≠ oracle {oracle}")
        });
    });
    report
}

/// Sweep the merge-split involution over all ordered set partitions of
/// ground sets up to `n_max` elements: involution, sign reversal, the unique
/// strictly-decreasing-singleton fixed point, and the alternating sum
/// collapsing to 1.
pub fn merge_split_sweep(n_max: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("merge-split involution (n ≤ {n_max})"));
    for n in 1..=n_max {
        let ground: Vec<usize> = (0..n).collect();
        let mut signed = 0i64;
        for p in enumerate_osps(&ground, |_| true) {
            signed += p.sign();
            let image = merge_split_involution(&p);
            report.check(merge_split_involution(&image) == p, || {
                format!("n={n}: merge-split fails to square to identity at {p}")
            });
            let fixed = image == p;
            let decreasing_singletons = p.blocks().iter().all(|b| b.len() == 1)
                && p.blocks().windows(2).all(|w| w[0][0] > w[1][0]);
            report.check(fixed == decreasing_singletons, || {
                format!("n={n}: fixed points are not the decreasing singletons at {p}")
            });
            if !fixed {
                report.check(image.sign() == -p.sign(), || {
                    format!("n={n}: merge-split failed to reverse the sign at {p}")
                });
            }
        }
        report.check(signed == 1, || {
            format!("n={n}: alternating sum over ordered set partitions is {signed}, not 1")
        });
    }
    report
}

/// Sweep the strata sums over all graphs on `v_max` or fewer non-dominating
/// vertices: the tree-by-tree alternating sum (only up to `per_tree_max`),
/// the subset-convolution sum, the millipede sum, and (−1)^{v−1}·|ACO| must
/// all coincide.
pub fn strata_sum_sweep(v_max: usize, per_tree_max: usize) -> SweepReport {
    let mut report =
        SweepReport::new(format!("strata sums (v ≤ {v_max}, tree-by-tree ≤ {per_tree_max})"));
    for v in 1..=v_max {
        for_each_graph(v, |h| {
            let aco = h.count_acyclic_orientations() as i64;
            let sign = if (v - 1) % 2 == 0 { 1 } else { -1 };
            let fast = fast_strata_sum(h);
            let milli = millipede_signed_sum(h);
            report.check(fast == sign * aco, || {
                format!(
                    "v={v} edges {:?}: convolution sum {fast} ≠ sign·ACO {}",
                    h.edges(),
                    sign * aco
                )
            });
            report.check(milli == fast, || {
                format!("v={v} edges {:?}: millipede sum {milli} ≠ strata sum {fast}", h.edges())
            });
            if v <= per_tree_max {
                let (gamma, p, q) = with_dominating(h);
                let per_tree = alternating_strata_sum(&gamma, p, q).expect("valid instance");
                report.check(per_tree == fast, || {
                    format!(
                        "v={v} edges {:?}: tree-by-tree sum {per_tree} ≠ convolution {fast}",
                        h.edges()
                    )
                });
            }
        });
    }
    report
}

/// Check the up-down and left-right involutions and the
/// orientation–caterpillar bijection on one reduced graph.
fn check_strata_involutions(h: &SimpleGraph, report: &mut SweepReport) -> Result<()> {
    let v = h.vertex_count();
    let (gamma, p, q) = with_dominating(h);
    let mut failure: Option<String> = None;
    for_each_stable_tree(&gamma, p, q, |t| {
        if failure.is_some() {
            return;
        }
        let run = || -> Result<(bool, bool, bool)> {
            let image = up_down_involution(t, &gamma, p, q)?;
            let back = up_down_involution(&image, &gamma, p, q)?;
            let fixed = image == *t;
            let sign_ok = fixed
                || (image.internal_edge_count() % 2) != (t.internal_edge_count() % 2);
            // A fixed tree must be a genuine millipede: leaves directly on
            // the spine *and* every spine block independent in Γ.
            let is_millipede = t
                .as_millipede()
                .is_some_and(|m| m.blocks().iter().all(|b| h.is_independent(b).unwrap_or(false)));
            Ok((back == *t, sign_ok, fixed == is_millipede))
        };
        match run() {
            Ok((involutive, sign_ok, fixed_ok)) => {
                if !(involutive && sign_ok && fixed_ok) {
                    failure = Some(format!(
                        "v={v} edges {:?}: up-down involution broke (involutive={involutive}, \
                         sign={sign_ok}, fixed={fixed_ok})",
                        h.edges()
                    ));
                }
            }
            Err(e) => failure = Some(format!("v={v}: up-down involution errored: {e}")),
        }
    })?;
    report.check(failure.is_none(), || failure.clone().unwrap());

    let aco = h.count_acyclic_orientations();
    let fixed_points = left_right_fixed_points(h);
    report.check(fixed_points.len() as u64 == aco, || {
        format!(
            "v={v} edges {:?}: {} left-right fixed points against {aco} acyclic orientations",
            h.edges(),
            fixed_points.len()
        )
    });
    let fixed_set: std::collections::BTreeSet<Vec<Vec<usize>>> =
        fixed_points.iter().map(|m| m.blocks().to_vec()).collect();
    for m in enumerate_millipedes(h) {
        let image = left_right_involution(&m, h);
        report.check(left_right_involution(&image, h) == m, || {
            format!("v={v} edges {:?}: left-right fails to square to identity", h.edges())
        });
        let fixed = image == m;
        report.check(fixed == fixed_set.contains(&m.blocks().to_vec()), || {
            format!("v={v} edges {:?}: left-right fixed set mismatch", h.edges())
        });
        if !fixed {
            report.check(
                image.blocks().len() % 2 != m.blocks().len() % 2,
                || format!("v={v} edges {:?}: left-right kept the sign", h.edges()),
            );
        }
    }
    for o in h.acyclic_orientations() {
        let m: Millipede = aco_to_caterpillar(&o)?;
        let back = caterpillar_to_aco(&m, h)?;
        report.check(back == o, || {
            format!("v={v} edges {:?}: orientation → caterpillar → orientation moved", h.edges())
        });
        report.check(fixed_set.contains(&m.blocks().to_vec()), || {
            format!("v={v} edges {:?}: caterpillar of an orientation is not fixed", h.edges())
        });
    }
    for m in &fixed_points {
        let o = caterpillar_to_aco(m, h)?;
        let back = aco_to_caterpillar(&o)?;
        report.check(back == *m, || {
            format!("v={v} edges {:?}: caterpillar → orientation → caterpillar moved", h.edges())
        });
    }
    Ok(())
}

/// Sweep the strata involutions and the orientation bijection exhaustively
/// over all graphs on up to `v_max` non-dominating vertices.
pub fn strata_involution_sweep(v_max: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("strata involutions (v ≤ {v_max})"));
    for v in 1..=v_max {
        let mut err: Option<String> = None;
        for_each_graph(v, |h| {
            if err.is_some() {
                return;
            }
            if let Err(e) = check_strata_involutions(h, &mut report) {
                err = Some(e.to_string());
            }
        });
        report.check(err.is_none(), || format!("v={v}: sweep errored: {}", err.clone().unwrap()));
    }
    report
}

/// Deterministically sample `count` graphs on `v` vertices (linear
/// congruential walk over edge masks) and run the full strata checks,
/// including tree-by-tree sums, on each.
pub fn strata_sample_sweep(v: usize, count: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("strata involutions (sampled, v = {v})"));
    let bits = edge_pairs(v).len();
    let modulus = 1u64 << bits;
    let mut state = 0x2545f4914f6cdd1du64 % modulus;
    for _ in 0..count {
        // LCG with odd multiplier; period covers the mask space.
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407)
            % modulus;
        let h = graph_from_mask(v, state);
        if let Err(e) = check_strata_involutions(&h, &mut report) {
            report.check(false, || format!("sampled graph errored: {e}"));
        }
        let (gamma, p, q) = with_dominating(&h);
        let per_tree = alternating_strata_sum(&gamma, p, q).expect("valid instance");
        report.check(per_tree == fast_strata_sum(&h), || {
            format!("sampled v={v} edges {:?}: tree-by-tree ≠ convolution", h.edges())
        });
    }
    report
}

/// Sweep positivity on every instance with total ≤ `n_max`: the per-color
/// inequality predicate, the Hall test on both assignment-graph variants,
/// positivity of the coloring count, and positivity of the intersection
/// number must all coincide, and the coloring/matching counts must sandwich
/// the value (with equality when every color carries at most one ψ class).
pub fn nonvanishing_sweep(n_max: usize) -> SweepReport {
    let mut report = SweepReport::new(format!("positivity and bounds (n ≤ {n_max})"));
    for_each_instance(n_max, |e| {
        let value = BigInt::from(count_fixed_points(e));
        let lower = count_mismatched_colorings(e).expect("within permanent budget");
        let upper = count_matchings(e).expect("within permanent budget");
        let predicate = nonzero_predicate(e).nonzero;
        report.check(lower <= value && value <= upper, || {
            format!("{e}: bounds {lower} ≤ {value} ≤ {upper} fail")
        });
        report.check(predicate == (value > BigInt::zero()), || {
            format!("{e}: predicate {predicate} but value {value}")
        });
        report.check((lower > BigInt::zero()) == (value > BigInt::zero()), || {
            format!("{e}: coloring count {lower} disagrees with positivity of {value}")
        });
        let hall_hues = hall_check(&AssignmentGraph::hues(e)).expect("consistent routes");
        let hall_colorings = hall_check(&AssignmentGraph::colorings(e)).expect("consistent routes");
        report.check(hall_hues == predicate && hall_colorings == predicate, || {
            format!("{e}: Hall checks ({hall_hues}, {hall_colorings}) disagree with predicate")
        });
        if (0..e.profile().m()).all(|j| e.psi_count(j) <= 1) {
            report.check(lower == upper && lower == value, || {
                format!("{e}: single-ψ bounds should collapse, got {lower}, {value}, {upper}")
            });
        }
    });
    report
}

/// The standard battery at library-test scale. `n_max` governs the
/// decoration-side sweeps, `v_max` the graph-side ones.
pub fn run_standard(n_max: usize, v_max: usize, per_tree_max: usize) -> Vec<SweepReport> {
    vec![
        merge_split_sweep(n_max.min(8)),
        underline_involution_sweep(n_max),
        hue_involution_sweep(n_max),
        oracle_equivalence_sweep(n_max),
        nonvanishing_sweep(n_max),
        strata_sum_sweep(v_max, per_tree_max),
        strata_involution_sweep(per_tree_max),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_enumeration_counts() {
        // Compositions of n into ≥ 3 parts: 2^{n−1} − 1 − (n−1).
        assert_eq!(color_profiles_with_total(3).len(), 1);
        assert_eq!(color_profiles_with_total(4).len(), 4);
        assert_eq!(color_profiles_with_total(5).len(), 11);
        assert_eq!(color_profiles_with_total(6).len(), 26);
    }

    #[test]
    fn graph_enumeration_counts() {
        let mut seen = 0usize;
        for_each_graph(3, |_| seen += 1);
        assert_eq!(seen, 8);
        let (gamma, p, q) = with_dominating(&graph_from_mask(3, 0));
        assert_eq!(gamma.vertex_count(), 5);
        assert_eq!(gamma.dominating_vertices(), vec![p, q]);
    }

    #[test]
    fn small_sweeps_pass() {
        for report in [
            merge_split_sweep(5),
            underline_involution_sweep(6),
            hue_involution_sweep(6),
            oracle_equivalence_sweep(6),
            nonvanishing_sweep(6),
            strata_sum_sweep(4, 3),
            strata_involution_sweep(3),
        ] {
            assert!(report.passed(), "{report}");
            assert!(report.checks > 0, "{report}");
        }
    }

    #[test]
    fn sampled_six_vertex_strata_pass() {
        let report = strata_sample_sweep(5, 3);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn reports_catch_violations() {
        let mut report = SweepReport::new("demo");
        report.check(true, || unreachable!());
        report.check(false, || "expected".into());
        assert!(!report.passed());
        assert_eq!(report.checks, 2);
        assert!(report.to_string().contains("expected"));
    }
}
