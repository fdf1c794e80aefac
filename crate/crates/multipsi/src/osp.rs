//! Ordered set partitions, their sign, and the merge-split involution.
//!
//! This is the baseline sign-reversing involution that the strata and
//! decoration involutions generalize: Σ over all ordered set partitions of
//! (−1)^{n−ℓ} collapses to the unique fixed point ({n},…,{1}), and restricting
//! blocks to independent sets of a graph turns the same sum into the graph's
//! acyclic-orientation count.

use crate::{invalid, Result};

/// An ordered list of disjoint nonempty blocks; the ground set is their union.
/// Blocks are stored sorted ascending, so a block's minimum is its first element.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct OrderedSetPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedSetPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for block in &blocks {
            if block.is_empty() {
                return Err(invalid("empty block in ordered set partition"));
            }
            for &x in block {
                if !seen.insert(x) {
                    return Err(invalid(format!("element {x} appears in two blocks")));
                }
            }
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        Ok(OrderedSetPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// (−1)^{n − ℓ} where n is the ground size and ℓ the number of blocks.
    pub fn sign(&self) -> i64 {
        let n: usize = self.blocks.iter().map(Vec::len).sum();
        if (n - self.blocks.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl std::fmt::Display for OrderedSetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// The merge-split involution: scan for the leftmost block that is either
/// non-singleton or a singleton sitting immediately after a smaller singleton.
/// With c the block's minimum and m the value of the preceding (necessarily
/// singleton) block, split off {c} when c < m or there is no m; otherwise
/// merge m into the block. Fixed points are exactly the partitions into
/// singletons in strictly decreasing order.
pub fn merge_split_involution(p: &OrderedSetPartition) -> OrderedSetPartition {
    let blocks = p.blocks();
    for i in 0..blocks.len() {
        let c = blocks[i][0];
        let prev_singleton = (i > 0 && blocks[i - 1].len() == 1).then(|| blocks[i - 1][0]);
        let eligible = blocks[i].len() > 1 || prev_singleton.is_some_and(|m| m < c);
        if !eligible {
            continue;
        }
        let mut out = blocks.to_vec();
        match prev_singleton {
            Some(m) if m < c => {
                // Merge m into the block.
                out[i].insert(0, m);
                out.remove(i - 1);
            }
            _ => {
                // Split {c} off the front of the block.
                let rest = out[i].split_off(1);
                out.insert(i + 1, rest);
            }
        }
        return OrderedSetPartition::new(out).expect("involution preserves validity");
    }
    p.clone()
}

/// All ordered set partitions of `ground` whose every block satisfies
/// `block_filter`, ordered by number of blocks and then lexicographically by
/// block contents.
pub fn enumerate_osps(
    ground: &[usize],
    block_filter: impl Fn(&[usize]) -> bool,
) -> Vec<OrderedSetPartition> {
    let mut out = Vec::new();
    for_each_osp(ground, &block_filter, &mut |p| out.push(p.clone()));
    out.sort_by(|a, b| {
        (a.block_count(), &a.blocks).cmp(&(b.block_count(), &b.blocks))
    });
    out
}

/// Visitor form of [`enumerate_osps`]; visit order is unspecified but
/// deterministic.
pub fn for_each_osp(
    ground: &[usize],
    block_filter: &impl Fn(&[usize]) -> bool,
    visit: &mut impl FnMut(&OrderedSetPartition),
) {
    let mut sorted = ground.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut prefix: Vec<Vec<usize>> = Vec::new();
    recurse(&sorted, block_filter, &mut prefix, visit);

    fn recurse(
        remaining: &[usize],
        filter: &impl Fn(&[usize]) -> bool,
        prefix: &mut Vec<Vec<usize>>,
        visit: &mut impl FnMut(&OrderedSetPartition),
    ) {
        if remaining.is_empty() {
            if !prefix.is_empty() {
                let p = OrderedSetPartition { blocks: prefix.clone() };
                visit(&p);
            }
            return;
        }
        // Choose the next block as any nonempty subset of the remaining
        // elements, enumerated by bitmask.
        let k = remaining.len();
        debug_assert!(k < 32);
        for mask in 1u32..1 << k {
            let block: Vec<usize> = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| remaining[i])
                .collect();
            if !filter(&block) {
                continue;
            }
            let rest: Vec<usize> = (0..k)
                .filter(|&i| mask & (1 << i) == 0)
                .map(|i| remaining[i])
                .collect();
            prefix.push(block);
            recurse(&rest, filter, prefix, visit);
            prefix.pop();
        }
    }
}
