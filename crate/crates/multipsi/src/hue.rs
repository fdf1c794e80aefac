//! Chain decompositions, permission-to-merge, the hue involution, and
//! fixed-point enumeration.
//!
//! On mismatched decorations the signed sum collapses further: a second
//! sign-reversing involution merges a singleton hue into a larger block (or
//! splits one off), guided by two chain decompositions reminiscent of cycle
//! notation for permutations. Its fixed points are all-singleton mismatched
//! decorations in which no hue has permission to merge, every one of sign
//! +1, so the intersection number is literally the number of fixed points.

use crate::decoration::{
    assign_hues, is_mismatched, Decoration, ExponentProfile, HuePartition,
};
use crate::{invalid, Error, Result};

/// The number chain decomposition of one color, with the parallel hue
/// chains (as block indices into the decoration's hue partition).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainDecomposition {
    chains: Vec<Vec<usize>>,
    hues: Vec<Vec<usize>>,
}

impl ChainDecomposition {
    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    /// Hue chains parallel to [`Self::chains`], as hue-block indices.
    pub fn hue_chains(&self) -> &[Vec<usize>] {
        &self.hues
    }

    /// The flattened number order (chain order).
    pub fn sequence(&self) -> Vec<usize> {
        self.chains.iter().flatten().copied().collect()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.chains.iter().any(|c| c.contains(&point))
    }

    /// The first number of the chain containing `point`.
    pub fn chain_start_of(&self, point: usize) -> Option<usize> {
        self.chains.iter().find(|c| c.contains(&point)).map(|c| c[0])
    }

    /// The number immediately preceding `point` inside its chain; `None`
    /// when `point` starts its chain or does not appear.
    pub fn predecessor_of(&self, point: usize) -> Option<usize> {
        for chain in &self.chains {
            if let Some(i) = chain.iter().position(|&p| p == point) {
                return if i == 0 { None } else { Some(chain[i - 1]) };
            }
        }
        None
    }

    /// `({5,6},{1}),({8},{7}),({8})` — the hue chains spelled out as blocks.
    pub fn hue_display(&self, d: &Decoration) -> String {
        let chain_text: Vec<String> = self
            .hues
            .iter()
            .map(|chain| {
                let blocks: Vec<String> = chain
                    .iter()
                    .map(|&b| {
                        let parts: Vec<String> =
                            d.block(b).iter().map(|&p| (p + 1).to_string()).collect();
                        format!("{{{}}}", parts.join(","))
                    })
                    .collect();
                format!("({})", blocks.join(","))
            })
            .collect();
        chain_text.join(",")
    }
}

impl std::fmt::Display for ChainDecomposition {
    /// `(2,5),(3),(4,8)` with 1-indexed numbers.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let chain_text: Vec<String> = self
            .chains
            .iter()
            .map(|chain| {
                let nums: Vec<String> = chain.iter().map(|&p| (p + 1).to_string()).collect();
                format!("({})", nums.join(","))
            })
            .collect();
        write!(f, "{}", chain_text.join(","))
    }
}

/// The number chain decomposition of `color`: start at the minimum of the
/// eligible set I (boxed, not crossed out, not underlined, hue matching the
/// color), repeatedly step to the minimum of the current hue when that
/// number is still unused, and otherwise close the chain and reopen at the
/// smallest unused number.
pub fn number_chain(d: &Decoration, color: usize) -> ChainDecomposition {
    let e = d.exponents();
    let mut remaining: std::collections::BTreeSet<usize> = e
        .profile()
        .class_range(color)
        .filter(|&p| {
            e.is_boxed(p)
                && !e.is_crossed(p)
                && !d.is_underlined(p)
                && d.hue_color(p) == Some(color)
        })
        .collect();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let Some(first) = remaining.pop_first() else {
        return ChainDecomposition { chains, hues: Vec::new() };
    };
    let mut chain = vec![first];
    loop {
        let last = *chain.last().expect("chain is nonempty");
        let b = d.hue_block(last).expect("chain members carry hues")[0];
        if remaining.remove(&b) {
            chain.push(b);
            continue;
        }
        chains.push(std::mem::take(&mut chain));
        match remaining.pop_first() {
            Some(next) => chain.push(next),
            None => break,
        }
    }
    let hues = chains
        .iter()
        .map(|c| {
            c.iter()
                .map(|&p| d.hue_index(p).expect("chain members carry hues"))
                .collect()
        })
        .collect();
    ChainDecomposition { chains, hues }
}

/// Orders `s`: first its elements inside the color class, in number chain
/// order, then the remaining elements ascending. Every element must carry a
/// hue of the given color, and the in-class elements must appear in the
/// chains.
pub fn permission_list(d: &Decoration, s: &[usize], color: usize) -> Result<Vec<usize>> {
    for &p in s {
        if d.hue_color(p) != Some(color) {
            return Err(invalid(format!(
                "point {} does not carry a hue of color {}",
                p + 1,
                color + 1
            )));
        }
    }
    let range = d.exponents().profile().class_range(color);
    let chain = number_chain(d, color);
    let mut ordered: Vec<usize> =
        chain.sequence().into_iter().filter(|p| s.contains(p)).collect();
    let in_class = s.iter().filter(|&&p| range.contains(&p)).count();
    if ordered.len() != in_class {
        return Err(invalid(
            "a point of the hue's own color is absent from the chain decomposition",
        ));
    }
    let mut rest: Vec<usize> = s.iter().copied().filter(|p| !range.contains(p)).collect();
    rest.sort_unstable();
    ordered.extend(rest);
    Ok(ordered)
}

/// Whether the witness `q` of permission condition (ii) exists.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Situation {
    Q,
    NQ,
}

impl std::fmt::Display for Situation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Situation::Q => write!(f, "Q"),
            Situation::NQ => write!(f, "NQ"),
        }
    }
}

/// Outcome of a permission-to-merge test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PermissionReport {
    pub granted: bool,
    pub situation: Situation,
    /// The number preceding r in its chain (Situation Q only).
    pub witness: Option<usize>,
}

/// Block indices that the singleton hue `{t}` wants to merge with: blocks
/// B of t's color with r = min(B) > t whose minimum carries hue `{t}`.
pub fn merge_targets(d: &Decoration, t: usize) -> Vec<usize> {
    let blocks = d.hue_partition().blocks();
    let Some(t_idx) = blocks.iter().position(|blk| blk.as_slice() == [t]) else {
        return Vec::new();
    };
    let color = d.exponents().profile().color_of(t);
    blocks
        .iter()
        .enumerate()
        .filter(|(b, target)| {
            *b != t_idx
                && d.exponents().profile().color_of(target[0]) == color
                && target[0] > t
                && d.hue_index(target[0]) == Some(t_idx)
        })
        .map(|(b, _)| b)
        .collect()
}

/// Tests whether the singleton hue `{t}` has permission to merge with block
/// `b` (an index into the hue partition): (i) r = min(b) is the first number
/// of hue {t} in the number chain decomposition, and (ii) in the permission
/// list of the other non-underlined numbers with either hue, all b-hues
/// precede all {t}-hues. Errors unless {t} wants to merge with b.
pub fn has_permission(d: &Decoration, t: usize, b: usize) -> Result<PermissionReport> {
    if !is_mismatched(d) {
        return Err(invalid("permission is defined on mismatched decorations"));
    }
    let blocks = d.hue_partition().blocks();
    if b >= blocks.len() {
        return Err(invalid("no such hue block"));
    }
    let t_idx = blocks
        .iter()
        .position(|blk| blk.as_slice() == [t])
        .ok_or_else(|| invalid(format!("{{{}}} is not a singleton hue", t + 1)))?;
    let color = d.exponents().profile().color_of(t);
    let r = blocks[b][0];
    if d.exponents().profile().color_of(r) != color {
        return Err(invalid("the merging hues must have the same color"));
    }
    if r <= t {
        return Err(invalid(format!(
            "the target block's minimum {} does not exceed {}",
            r + 1,
            t + 1
        )));
    }
    if d.hue_index(r) != Some(t_idx) {
        return Err(invalid(format!(
            "{{{}}} does not want to merge with this block: {} carries another hue",
            t + 1,
            r + 1
        )));
    }
    let chain = number_chain(d, color);
    if !chain.contains(r) {
        return Err(invalid("the target block's minimum is absent from the chains"));
    }
    let condition_one = chain
        .sequence()
        .into_iter()
        .find(|&p| d.hue_index(p) == Some(t_idx))
        == Some(r);
    let witness = chain.predecessor_of(r);
    let situation = if witness.is_some() { Situation::Q } else { Situation::NQ };
    let s: Vec<usize> = (0..d.exponents().n())
        .filter(|&p| {
            !d.is_underlined(p)
                && (d.hue_index(p) == Some(t_idx) || d.hue_index(p) == Some(b))
                && p != r
                && Some(p) != witness
        })
        .collect();
    let mut condition_two = true;
    let mut seen_t = false;
    for p in permission_list(d, &s, color)? {
        if d.hue_index(p) == Some(t_idx) {
            seen_t = true;
        } else if seen_t {
            condition_two = false;
            break;
        }
    }
    Ok(PermissionReport { granted: condition_one && condition_two, situation, witness })
}

/// Which branch of the hue involution applied.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InvolutionCase {
    Split(Situation),
    Merge(Situation),
    Fixed,
}

/// The hue involution: split the non-singleton hue with the smallest
/// minimum m, or merge the smallest singleton hue {t} with permission into
/// its block, whichever of m, t is smaller; fixed when neither exists.
/// Requires a mismatched decoration.
pub fn hue_involution(d: &Decoration) -> Result<Decoration> {
    Ok(hue_involution_with_case(d)?.0)
}

/// As [`hue_involution`], also reporting which case fired and, for
/// split/merge, the Situation tag.
pub fn hue_involution_with_case(d: &Decoration) -> Result<(Decoration, InvolutionCase)> {
    if !is_mismatched(d) {
        return Err(invalid("the hue involution is defined on mismatched decorations"));
    }
    // Blocks are ordered by minimum, so the first non-singleton block has
    // the smallest m.
    let split_candidate = d
        .hue_partition()
        .blocks()
        .iter()
        .enumerate()
        .find(|(_, blk)| blk.len() >= 2)
        .map(|(i, blk)| (i, blk[0]));
    let merge_candidate = smallest_granted_merge(d)?;
    match (split_candidate, merge_candidate) {
        (None, None) => Ok((d.clone(), InvolutionCase::Fixed)),
        (Some((b, _)), None) => split(d, b),
        (None, Some((t, b, report))) => merge(d, t, b, report),
        (Some((sb, m)), Some((t, mb, report))) => {
            if m < t {
                split(d, sb)
            } else {
                merge(d, t, mb, report)
            }
        }
    }
}

/// The smallest singleton hue {t} with permission to merge, together with
/// its (unique) target block and the permission report.
fn smallest_granted_merge(d: &Decoration) -> Result<Option<(usize, usize, PermissionReport)>> {
    for blk in d.hue_partition().blocks() {
        if blk.len() != 1 {
            continue;
        }
        let t = blk[0];
        let mut granted: Vec<(usize, PermissionReport)> = Vec::new();
        for b in merge_targets(d, t) {
            let report = has_permission(d, t, b)?;
            if report.granted {
                granted.push((b, report));
            }
        }
        if granted.len() > 1 {
            return Err(Error::Inconsistency(format!(
                "singleton hue {{{}}} has permission to merge with two blocks",
                t + 1
            )));
        }
        if let Some((b, report)) = granted.pop() {
            return Ok(Some((t, b, report)));
        }
    }
    Ok(None)
}

fn split(d: &Decoration, b_idx: usize) -> Result<(Decoration, InvolutionCase)> {
    let e = d.exponents();
    let n = e.n();
    let bset = d.block(b_idx).to_vec();
    let m = bset[0];
    let bprime: Vec<usize> = bset[1..].to_vec();
    let r = bprime[0];
    let color = e.profile().color_of(m);
    let chain = number_chain(d, color);
    // q exists when a chain starting below r contains a number of hue B; it
    // is then the first hue-B number in chain order.
    let q = chain
        .sequence()
        .into_iter()
        .find(|&p| d.hue_index(p) == Some(b_idx))
        .filter(|&p| chain.chain_start_of(p).expect("p came from the chains") < r);
    let situation = if q.is_some() { Situation::Q } else { Situation::NQ };

    let mut hue_sets: Vec<Option<Vec<usize>>> =
        (0..n).map(|p| d.hue_block(p).map(|blk| blk.to_vec())).collect();
    let mut underlined: Vec<bool> = (0..n).map(|p| d.is_underlined(p)).collect();
    let mset = vec![m];
    // Step 1: r takes hue {m} and loses its underline.
    hue_sets[r] = Some(mset.clone());
    underlined[r] = false;
    // Step 2: the rest of B′ keeps its underlines, relabeled B′.
    for &p in &bprime[1..] {
        hue_sets[p] = Some(bprime.clone());
    }
    // Step 3.
    if let Some(qp) = q {
        hue_sets[qp] = Some(bprime.clone());
    }
    // Step 4: the remaining hue-B numbers become B′ in permission order
    // until B′ reaches its quota k_{B′}, then {m}.
    let s: Vec<usize> = (0..n)
        .filter(|&p| {
            d.hue_index(p) == Some(b_idx)
                && p != r
                && !bprime[1..].contains(&p)
                && Some(p) != q
        })
        .collect();
    let ordered = permission_list(d, &s, color)?;
    let already = (bset.len() - 2) + usize::from(q.is_some());
    let quota = e.exponent_total(&bprime) - already;
    debug_assert_eq!(ordered.len() - quota, e.exponent(m) - 1);
    for (i, &p) in ordered.iter().enumerate() {
        hue_sets[p] = Some(if i < quota { bprime.clone() } else { mset.clone() });
    }

    let mut new_blocks: Vec<Vec<usize>> = d
        .hue_partition()
        .blocks()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != b_idx)
        .map(|(_, blk)| blk.clone())
        .collect();
    new_blocks.push(mset);
    new_blocks.push(bprime);
    Ok((assemble(d, new_blocks, hue_sets, underlined)?, InvolutionCase::Split(situation)))
}

fn merge(
    d: &Decoration,
    t: usize,
    b_idx: usize,
    report: PermissionReport,
) -> Result<(Decoration, InvolutionCase)> {
    let n = d.exponents().n();
    let blocks = d.hue_partition().blocks();
    let t_idx = blocks
        .iter()
        .position(|blk| blk.as_slice() == [t])
        .expect("merge candidate is a singleton hue");
    let target = blocks[b_idx].clone();
    let r = target[0];
    let mut merged = vec![t];
    merged.extend(target.iter().copied());
    let mut hue_sets: Vec<Option<Vec<usize>>> =
        (0..n).map(|p| d.hue_block(p).map(|blk| blk.to_vec())).collect();
    let mut underlined: Vec<bool> = (0..n).map(|p| d.is_underlined(p)).collect();
    for p in 0..n {
        if d.hue_index(p) == Some(t_idx) || d.hue_index(p) == Some(b_idx) {
            hue_sets[p] = Some(merged.clone());
        }
    }
    underlined[r] = true;
    let mut new_blocks: Vec<Vec<usize>> = blocks
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != t_idx && *i != b_idx)
        .map(|(_, blk)| blk.clone())
        .collect();
    new_blocks.push(merged);
    Ok((assemble(d, new_blocks, hue_sets, underlined)?, InvolutionCase::Merge(report.situation)))
}

/// Rebuilds a full decoration from per-point hue sets, re-validating every
/// axiom.
fn assemble(
    d: &Decoration,
    new_blocks: Vec<Vec<usize>>,
    hue_sets: Vec<Option<Vec<usize>>>,
    underlined: Vec<bool>,
) -> Result<Decoration> {
    let e = d.exponents().clone();
    let partition = HuePartition::new(&e, new_blocks)?;
    let mut hue_of = vec![None; e.n()];
    for (p, entry) in hue_sets.iter().enumerate() {
        if let Some(set) = entry {
            let mut set = set.clone();
            set.sort_unstable();
            let idx = partition
                .blocks()
                .iter()
                .position(|blk| *blk == set)
                .ok_or_else(|| invalid("a hue refers to a set that is not a block"))?;
            hue_of[p] = Some(idx);
        }
    }
    Decoration::new(e, partition, hue_of, underlined)
}

/// True iff the mismatched decoration is fixed by the hue involution: all
/// hues singleton and no singleton has permission to merge.
pub fn is_fixed_point(d: &Decoration) -> Result<bool> {
    if !is_mismatched(d) {
        return Err(invalid("fixed points are mismatched decorations"));
    }
    if d.hue_partition().blocks().iter().any(|blk| blk.len() > 1) {
        return Ok(false);
    }
    debug_assert_eq!(d.underline_count(), 0);
    Ok(smallest_granted_merge(d)?.is_none())
}

/// Visits every fixed-point decoration of the profile exactly once, in a
/// fixed deterministic order. The number of visits is the intersection
/// number.
pub fn for_each_fixed_point(e: &ExponentProfile, mut visit: impl FnMut(&Decoration)) {
    let partition = HuePartition::singletons(e);
    assign_hues(e, &partition, true, &mut |hue_of, forced| {
        let d = Decoration::from_parts_unchecked(
            e.clone(),
            partition.clone(),
            hue_of.to_vec(),
            forced.to_vec(),
        );
        let fixed = smallest_granted_merge(&d)
            .expect("singleton mismatched decorations never hit the uniqueness guard")
            .is_none();
        if fixed {
            visit(&d);
        }
    });
}

/// All fixed points, collected.
pub fn enumerate_fixed_points(e: &ExponentProfile) -> Vec<Decoration> {
    let mut out = Vec::new();
    for_each_fixed_point(e, |d| out.push(d.clone()));
    out
}

/// The fixed-point count (= the intersection number, as a raw count).
pub fn count_fixed_points(e: &ExponentProfile) -> u64 {
    let mut count = 0u64;
    for_each_fixed_point(e, |_| count += 1);
    count
}
