//! Positivity of the intersection numbers: the per-color inequality
//! criterion, Hall-matching machinery, and the matching/coloring bounds.
//!
//! The integral is positive exactly when every color that carries exponent
//! satisfies k_{C⁽ʲ⁾} ≤ ℓ_j + n − 3 − r_j. Underneath sits a bipartite
//! assignment graph: non-crossed-out numbers on the left, hue or color
//! slots (with multiplicity) on the right, boxed numbers adjacent to
//! everything and unboxed numbers to every color but their own. Counting
//! its matchings with same-hue slots collapsed bounds the integral from
//! above; collapsing whole colors bounds it from below.

use num::{BigInt, One, Zero};

use crate::decoration::ExponentProfile;
use crate::{invalid, Error, Result};

/// One right-hand slot group of an assignment graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlotGroup {
    /// Display label: a boxed point (`"7"`) or a color (`"C2"`).
    pub label: String,
    pub color: usize,
    pub multiplicity: usize,
}

/// The bipartite assignment graph: left vertices are the non-crossed-out
/// points; right slots come in groups with multiplicity; a left point is
/// adjacent to a group iff it is boxed or of a different color.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AssignmentGraph {
    left: Vec<usize>,
    left_color: Vec<usize>,
    left_boxed: Vec<bool>,
    groups: Vec<SlotGroup>,
}

impl AssignmentGraph {
    /// Raw constructor; enforces |left| = total slot multiplicity.
    pub fn new(
        left: Vec<usize>,
        left_color: Vec<usize>,
        left_boxed: Vec<bool>,
        groups: Vec<SlotGroup>,
    ) -> Result<Self> {
        if left.len() != left_color.len() || left.len() != left_boxed.len() {
            return Err(invalid("left-vertex tables must have equal length"));
        }
        let slots: usize = groups.iter().map(|g| g.multiplicity).sum();
        if slots != left.len() {
            return Err(invalid(format!(
                "{} left vertices against {} right slots",
                left.len(),
                slots
            )));
        }
        Ok(AssignmentGraph { left, left_color, left_boxed, groups })
    }

    /// The hue variant: one group per boxed point i with k_i slots.
    pub fn hues(e: &ExponentProfile) -> Self {
        let groups = e
            .boxed_points()
            .into_iter()
            .map(|p| SlotGroup {
                label: (p + 1).to_string(),
                color: e.profile().color_of(p),
                multiplicity: e.exponent(p),
            })
            .collect();
        Self::from_profile(e, groups)
    }

    /// The coloring variant: one group per color j with k_{C⁽ʲ⁾} slots.
    pub fn colorings(e: &ExponentProfile) -> Self {
        let groups = (0..e.profile().m())
            .filter(|&j| e.color_exponent_total(j) > 0)
            .map(|j| SlotGroup {
                label: format!("C{}", j + 1),
                color: j,
                multiplicity: e.color_exponent_total(j),
            })
            .collect();
        Self::from_profile(e, groups)
    }

    fn from_profile(e: &ExponentProfile, groups: Vec<SlotGroup>) -> Self {
        let left: Vec<usize> = (0..e.n()).filter(|&p| !e.is_crossed(p)).collect();
        let left_color = left.iter().map(|&p| e.profile().color_of(p)).collect();
        let left_boxed = left.iter().map(|&p| e.is_boxed(p)).collect();
        AssignmentGraph { left, left_color, left_boxed, groups }
            .validated()
            .expect("profiles satisfy Σk = n − 3")
    }

    fn validated(self) -> Result<Self> {
        Self::new(self.left, self.left_color, self.left_boxed, self.groups)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn groups(&self) -> &[SlotGroup] {
        &self.groups
    }

    /// Whether left vertex `i` may be assigned to group `g`.
    pub fn allowed(&self, i: usize, g: usize) -> bool {
        self.left_boxed[i] || self.left_color[i] != self.groups[g].color
    }
}

/// One row of the positivity report: the inequality of one exponent-bearing
/// color.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InequalityRow {
    pub color: usize,
    /// k_{C⁽ʲ⁾}.
    pub exponent_total: usize,
    /// ℓ_j + n − 3 − r_j (may be negative).
    pub bound: i64,
    pub holds: bool,
}

/// The positivity verdict with the inequality behind each exponent-bearing
/// color.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NonzeroReport {
    pub nonzero: bool,
    pub rows: Vec<InequalityRow>,
}

/// The integral is positive iff k_{C⁽ʲ⁾} ≤ ℓ_j + n − 3 − r_j for every
/// color with k_{C⁽ʲ⁾} ≠ 0.
pub fn nonzero_predicate(e: &ExponentProfile) -> NonzeroReport {
    let n = e.n() as i64;
    let mut rows = Vec::new();
    for j in 0..e.profile().m() {
        let k = e.color_exponent_total(j);
        if k == 0 {
            continue;
        }
        let bound = e.psi_count(j) as i64 + n - 3 - e.profile().sizes()[j] as i64;
        rows.push(InequalityRow { color: j, exponent_total: k, bound, holds: k as i64 <= bound });
    }
    NonzeroReport { nonzero: rows.iter().all(|r| r.holds), rows }
}

/// Whether the assignment graph has a perfect matching. Two independent
/// routes must agree: augmenting paths on the expanded slots, and the
/// closed-form neighborhood test (single-color right sets are the only
/// binding ones, because any two-color set sees the whole left side).
pub fn hall_check(g: &AssignmentGraph) -> Result<bool> {
    let by_matching = max_matching(g) == g.left.len();
    let mut by_inequality = true;
    let colors: std::collections::BTreeSet<usize> =
        g.groups.iter().filter(|gr| gr.multiplicity > 0).map(|gr| gr.color).collect();
    for c in colors {
        let slots: usize =
            g.groups.iter().filter(|gr| gr.color == c).map(|gr| gr.multiplicity).sum();
        let neighbors = (0..g.left.len())
            .filter(|&i| g.left_boxed[i] || g.left_color[i] != c)
            .count();
        if slots > neighbors {
            by_inequality = false;
        }
    }
    if by_matching != by_inequality {
        return Err(Error::Inconsistency(format!(
            "matching search says {by_matching} but the neighborhood inequalities \
             say {by_inequality}"
        )));
    }
    Ok(by_matching)
}

/// Maximum bipartite matching via augmenting paths over expanded slots.
fn max_matching(g: &AssignmentGraph) -> usize {
    let mut slot_group = Vec::new();
    for (gi, group) in g.groups.iter().enumerate() {
        slot_group.extend(std::iter::repeat(gi).take(group.multiplicity));
    }
    let n_left = g.left.len();
    let n_right = slot_group.len();
    let mut match_left: Vec<Option<usize>> = vec![None; n_left];
    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    for start in 0..n_left {
        let mut visited = vec![false; n_right];
        augment(g, &slot_group, start, &mut visited, &mut match_left, &mut match_right);
    }
    match_left.iter().filter(|m| m.is_some()).count()
}

fn augment(
    g: &AssignmentGraph,
    slot_group: &[usize],
    i: usize,
    visited: &mut [bool],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    for s in 0..slot_group.len() {
        if visited[s] || !g.allowed(i, slot_group[s]) {
            continue;
        }
        visited[s] = true;
        let free = match match_right[s] {
            None => true,
            Some(j) => augment(g, slot_group, j, visited, match_left, match_right),
        };
        if free {
            match_right[s] = Some(i);
            match_left[i] = Some(s);
            return true;
        }
    }
    false
}

/// The number of perfect matchings with slots of the same group
/// indistinguishable: permanent of the expanded biadjacency matrix divided
/// by the multiplicity factorials. Exact; limited to 20 slots.
fn grouped_matching_count(g: &AssignmentGraph) -> Result<BigInt> {
    let n = g.left.len();
    if n > 20 {
        return Err(invalid(
            "matching counts are offered up to 20 slots; use hall_check beyond that",
        ));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    // Ryser with Gray-code updates: perm = (−1)^n Σ_S (−1)^{|S|} Π_i r_i(S).
    let mut cols = Vec::new();
    for (gi, group) in g.groups.iter().enumerate() {
        cols.extend(std::iter::repeat(gi).take(group.multiplicity));
    }
    let mut row_sums = vec![0i128; n];
    let mut total: i128 = 0;
    let mut prev_gray = 0u64;
    for iter in 1u64..(1 << n) {
        let gray = iter ^ (iter >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        let added = gray & changed != 0;
        for i in 0..n {
            if g.allowed(i, cols[col]) {
                row_sums[i] += if added { 1 } else { -1 };
            }
        }
        let sign_bits = gray.count_ones();
        prev_gray = gray;
        let mut product: i128 = 1;
        for &r in &row_sums {
            product = product.saturating_mul(r);
            if product == 0 {
                break;
            }
        }
        if (n as u32 - sign_bits) % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    let mut value = BigInt::from(total);
    for group in &g.groups {
        let mut fact = BigInt::one();
        for v in 1..=group.multiplicity {
            fact *= BigInt::from(v);
        }
        let (q, r) = num::Integer::div_rem(&value, &fact);
        debug_assert!(r.is_zero(), "grouped permanent must divide evenly");
        value = q;
    }
    Ok(value)
}

/// Lower bound for the integral: assignments of colors to the non-crossed
/// points using color j exactly k_{C⁽ʲ⁾} times, no unboxed point taking its
/// own color.
pub fn count_mismatched_colorings(e: &ExponentProfile) -> Result<BigInt> {
    grouped_matching_count(&AssignmentGraph::colorings(e))
}

/// Upper bound for the integral: matchings of the hue graph, slots of one
/// hue indistinguishable — equivalently, all-singleton mismatched
/// decorations.
pub fn count_matchings(e: &ExponentProfile) -> Result<BigInt> {
    grouped_matching_count(&AssignmentGraph::hues(e))
}
