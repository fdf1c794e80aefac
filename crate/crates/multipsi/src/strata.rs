//! Boundary strata of graphically stable spaces: Γ-stable dual trees, the
//! alternating strata sum, the up-down and left-right involutions, and the
//! bijection between surviving fixed points and acyclic orientations.
//!
//! A dual tree is drawn as the path of internal vertices from the leaf P to
//! the leaf Q with branches hanging off the path. Stability for a collision
//! graph Γ with dominating vertices P, Q reduces to a local condition: the
//! leaf set of every branch node must contain a Γ-edge (cuts along the spine
//! are always fine because P and Q dominate). Millipedes — trees whose
//! branches are all single leaves with each spine vertex's leaves independent
//! — survive the up-down involution, and the left-right involution then pairs
//! millipedes down to caterpillars counted by acyclic orientations.

use std::collections::HashMap;
use std::rc::Rc;

use crate::graph::{Orientation, SimpleGraph};
use crate::osp::{enumerate_osps, OrderedSetPartition};
use crate::{invalid, Result};

/// One branch hanging off a spine vertex: either a single leaf or an internal
/// node with at least two child branches.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Branch {
    Leaf(usize),
    Node(Vec<Branch>),
}

impl Branch {
    pub fn min_leaf(&self) -> usize {
        match self {
            Branch::Leaf(x) => *x,
            Branch::Node(children) => {
                children.iter().map(Branch::min_leaf).min().expect("nodes are nonempty")
            }
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Branch::Leaf(x) => out.push(*x),
            Branch::Node(children) => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_unstable();
        out
    }

    fn node_count(&self) -> usize {
        match self {
            Branch::Leaf(_) => 0,
            Branch::Node(children) => 1 + children.iter().map(Branch::node_count).sum::<usize>(),
        }
    }

    fn canonicalize(&mut self) -> Result<()> {
        if let Branch::Node(children) = self {
            if children.len() < 2 {
                return Err(invalid("branch node with fewer than two children"));
            }
            for c in children.iter_mut() {
                c.canonicalize()?;
            }
            children.sort_by_key(Branch::min_leaf);
        }
        Ok(())
    }

    /// True iff every node in this branch (including itself) carries a
    /// Γ-edge among its leaves.
    fn nodes_carry_edges(&self, gamma: &SimpleGraph) -> bool {
        match self {
            Branch::Leaf(_) => true,
            Branch::Node(children) => {
                let mask = self.leaves().iter().fold(0u64, |m, &v| m | 1 << v);
                !gamma.is_independent_mask(mask)
                    && children.iter().all(|c| c.nodes_carry_edges(gamma))
            }
        }
    }

    fn fmt_into(&self, out: &mut String) {
        match self {
            Branch::Leaf(x) => out.push_str(&(x + 1).to_string()),
            Branch::Node(children) => {
                out.push('(');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    c.fmt_into(out);
                }
                out.push(')');
            }
        }
    }
}

/// A dual tree in spine form: `spine[i]` holds the branches at the i-th
/// internal vertex of the P→Q path (P attaches at the first spine vertex, Q
/// at the last). Branches are kept sorted by minimum leaf, recursively, so
/// structural equality coincides with equality of strata.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct DualTree {
    spine: Vec<Vec<Branch>>,
}

/// A leaf label in the flattened graph view of a tree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Leaf {
    P,
    Q,
    Vertex(usize),
}

impl DualTree {
    /// Validates and canonicalizes a spine: every spine vertex needs at least
    /// one branch (its two path-or-endpoint edges contribute only degree 2),
    /// nodes need at least two children, and leaves must be distinct.
    pub fn new(spine: Vec<Vec<Branch>>) -> Result<Self> {
        if spine.is_empty() {
            return Err(invalid("empty spine"));
        }
        let mut spine = spine;
        for branches in &mut spine {
            if branches.is_empty() {
                return Err(invalid("spine vertex with no branches has degree < 3"));
            }
            for b in branches.iter_mut() {
                b.canonicalize()?;
            }
            branches.sort_by_key(Branch::min_leaf);
        }
        let tree = DualTree { spine };
        let leaves = tree.leaves();
        if leaves.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate leaf label"));
        }
        Ok(tree)
    }

    pub fn spine(&self) -> &[Vec<Branch>] {
        &self.spine
    }

    /// Number of internal edges i(T): spine edges plus one per branch node.
    pub fn internal_edge_count(&self) -> usize {
        self.spine.len() - 1
            + self
                .spine
                .iter()
                .flatten()
                .map(Branch::node_count)
                .sum::<usize>()
    }

    /// All leaves other than P and Q, sorted.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for b in self.spine.iter().flatten() {
            b.collect_leaves(&mut out);
        }
        out.sort_unstable();
        out
    }

    /// Leaf sets L_i hanging off each spine vertex, in path order.
    pub fn spine_leaf_sets(&self) -> Vec<Vec<usize>> {
        self.spine
            .iter()
            .map(|branches| {
                let mut out = Vec::new();
                branches.iter().for_each(|b| b.collect_leaves(&mut out));
                out.sort_unstable();
                out
            })
            .collect()
    }

    /// Γ-stability with respect to `gamma` and the dominating leaves `p`, `q`:
    /// the leaves must be exactly the other vertices of `gamma`, and each
    /// branch node's leaf set must contain a Γ-edge.
    pub fn is_stable(&self, gamma: &SimpleGraph, p: usize, q: usize) -> Result<bool> {
        check_dominating(gamma, p, q)?;
        let expected: Vec<usize> =
            (0..gamma.vertex_count()).filter(|&v| v != p && v != q).collect();
        if self.leaves() != expected {
            return Ok(false);
        }
        Ok(self
            .spine
            .iter()
            .flatten()
            .all(|b| b.nodes_carry_edges(gamma)))
    }

    /// The millipede view, if every branch is a bare leaf.
    pub fn as_millipede(&self) -> Option<Millipede> {
        let mut blocks = Vec::with_capacity(self.spine.len());
        for branches in &self.spine {
            let mut block = Vec::with_capacity(branches.len());
            for b in branches {
                match b {
                    Branch::Leaf(x) => block.push(*x),
                    Branch::Node(_) => return None,
                }
            }
            blocks.push(block);
        }
        Some(Millipede { blocks })
    }

    pub fn from_millipede(m: &Millipede) -> DualTree {
        DualTree {
            spine: m
                .blocks
                .iter()
                .map(|block| block.iter().map(|&x| Branch::Leaf(x)).collect())
                .collect(),
        }
    }

    /// Flattened graph view: internal vertices are indexed with the spine
    /// first, then branch nodes in traversal order; returns the internal edge
    /// list and the attachment vertex of every leaf (P, Q, and the rest).
    pub fn graph_form(&self) -> (Vec<(usize, usize)>, Vec<(Leaf, usize)>) {
        let mut edges = Vec::new();
        let mut attach = Vec::new();
        let spine_len = self.spine.len();
        attach.push((Leaf::P, 0));
        attach.push((Leaf::Q, spine_len - 1));
        for i in 1..spine_len {
            edges.push((i - 1, i));
        }
        let mut next = spine_len;
        for (i, branches) in self.spine.iter().enumerate() {
            for b in branches {
                descend(b, i, &mut next, &mut edges, &mut attach);
            }
        }
        return (edges, attach);

        fn descend(
            b: &Branch,
            parent: usize,
            next: &mut usize,
            edges: &mut Vec<(usize, usize)>,
            attach: &mut Vec<(Leaf, usize)>,
        ) {
            match b {
                Branch::Leaf(x) => attach.push((Leaf::Vertex(*x), parent)),
                Branch::Node(children) => {
                    let me = *next;
                    *next += 1;
                    edges.push((parent, me));
                    for c in children {
                        descend(c, me, next, edges, attach);
                    }
                }
            }
        }
    }
}

impl std::fmt::Display for DualTree {
    /// Nested parenthesized leaf lists along the spine, 1-indexed to match
    /// the CLI graph format: `P | 2 (4 6) | 3 | 1 5 | Q`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::from("P");
        for branches in &self.spine {
            out.push_str(" |");
            for b in branches {
                out.push(' ');
                b.fmt_into(&mut out);
            }
        }
        out.push_str(" | Q");
        f.write_str(&out)
    }
}

/// A millipede: an ordered set partition of the vertices of Γ∖{P,Q} into
/// independent blocks, i.e. a dual tree all of whose branches are single
/// leaves.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Millipede {
    blocks: Vec<Vec<usize>>,
}

impl Millipede {
    /// Validates blocks against the reduced graph `h` (the collision graph
    /// with the two dominating vertices already removed): blocks must be
    /// nonempty, disjoint, and independent in `h`.
    pub fn new(blocks: Vec<Vec<usize>>, h: &SimpleGraph) -> Result<Self> {
        let osp = OrderedSetPartition::new(blocks)?;
        for block in osp.blocks() {
            if !h.is_independent(block)? {
                return Err(invalid(format!("block {block:?} is not independent")));
            }
        }
        Ok(Millipede { blocks: osp.blocks().to_vec() })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn as_osp(&self) -> OrderedSetPartition {
        OrderedSetPartition::new(self.blocks.clone()).expect("millipede blocks form an OSP")
    }

    pub fn is_all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

impl std::fmt::Display for Millipede {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        DualTree::from_millipede(self).fmt(f)
    }
}

/// Validates that `p` and `q` are distinct dominating vertices of `gamma`.
pub fn check_dominating(gamma: &SimpleGraph, p: usize, q: usize) -> Result<()> {
    if p == q || p >= gamma.vertex_count() || q >= gamma.vertex_count() {
        return Err(invalid("p and q must be distinct vertices of the graph"));
    }
    let dom = gamma.dominating_vertices();
    for v in [p, q] {
        if !dom.contains(&v) {
            return Err(invalid(format!("vertex {v} is not dominating")));
        }
    }
    Ok(())
}

/// Memoized tables of branch structures per leaf mask, local to one
/// enumeration pass.
struct BranchTables<'g> {
    gamma: &'g SimpleGraph,
    /// All single-branch structures on a mask.
    structures: HashMap<u64, Rc<Vec<Branch>>>,
    /// Branch forests with at least two parts on a mask.
    multi: HashMap<u64, Rc<Vec<Vec<Branch>>>>,
    /// All branch forests (one or more parts) on a mask.
    forests: HashMap<u64, Rc<Vec<Vec<Branch>>>>,
}

impl<'g> BranchTables<'g> {
    fn new(gamma: &'g SimpleGraph) -> Self {
        BranchTables {
            gamma,
            structures: HashMap::new(),
            multi: HashMap::new(),
            forests: HashMap::new(),
        }
    }

    fn structures_for(&mut self, mask: u64) -> Rc<Vec<Branch>> {
        if let Some(s) = self.structures.get(&mask) {
            return Rc::clone(s);
        }
        let out = if mask.count_ones() == 1 {
            vec![Branch::Leaf(mask.trailing_zeros() as usize)]
        } else if self.gamma.is_independent_mask(mask) {
            // A node here would cut off a leaf set with no Γ-edge.
            Vec::new()
        } else {
            self.multi_for(mask)
                .iter()
                .map(|forest| Branch::Node(forest.clone()))
                .collect()
        };
        let rc = Rc::new(out);
        self.structures.insert(mask, Rc::clone(&rc));
        rc
    }

    /// Forests whose first part is a proper subset of `mask`, i.e. with two
    /// or more parts. The first part contains the lowest leaf, so parts come
    /// out ordered by minimum, which is the canonical order.
    fn multi_for(&mut self, mask: u64) -> Rc<Vec<Vec<Branch>>> {
        if let Some(f) = self.multi.get(&mask) {
            return Rc::clone(f);
        }
        let mut out = Vec::new();
        if mask.count_ones() >= 2 {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                sub = (sub - 1) & rest;
                let part = low | sub;
                let heads = self.structures_for(part);
                if !heads.is_empty() {
                    let tails = self.forests_for(mask ^ part);
                    for head in heads.iter() {
                        for tail in tails.iter() {
                            let mut forest = Vec::with_capacity(1 + tail.len());
                            forest.push(head.clone());
                            forest.extend(tail.iter().cloned());
                            out.push(forest);
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
            }
        }
        let rc = Rc::new(out);
        self.multi.insert(mask, Rc::clone(&rc));
        rc
    }

    fn forests_for(&mut self, mask: u64) -> Rc<Vec<Vec<Branch>>> {
        if let Some(f) = self.forests.get(&mask) {
            return Rc::clone(f);
        }
        let mut out: Vec<Vec<Branch>> = if mask == 0 {
            vec![Vec::new()]
        } else {
            self.structures_for(mask).iter().map(|s| vec![s.clone()]).collect()
        };
        if mask != 0 {
            out.extend(self.multi_for(mask).iter().cloned());
        }
        let rc = Rc::new(out);
        self.forests.insert(mask, Rc::clone(&rc));
        rc
    }
}

/// Visits every Γ-stable dual tree exactly once. Vertex labels inside the
/// trees are the labels of `gamma` itself (with `p` and `q` absent).
pub fn for_each_stable_tree(
    gamma: &SimpleGraph,
    p: usize,
    q: usize,
    mut visit: impl FnMut(&DualTree),
) -> Result<()> {
    check_dominating(gamma, p, q)?;
    if gamma.vertex_count() < 3 {
        return Err(invalid("need at least one vertex besides p and q"));
    }
    let full: u64 = (0..gamma.vertex_count())
        .filter(|&v| v != p && v != q)
        .fold(0, |m, v| m | 1 << v);
    let mut tables = BranchTables::new(gamma);
    let mut spine: Vec<Vec<Branch>> = Vec::new();
    recurse(full, &mut tables, &mut spine, &mut visit);
    return Ok(());

    fn recurse(
        remaining: u64,
        tables: &mut BranchTables,
        spine: &mut Vec<Vec<Branch>>,
        visit: &mut impl FnMut(&DualTree),
    ) {
        if remaining == 0 {
            if !spine.is_empty() {
                visit(&DualTree { spine: spine.clone() });
            }
            return;
        }
        // The next spine block is any nonempty subset of the remaining
        // leaves; branches at a vertex are unconstrained beyond their own
        // node condition, because P and Q dominate.
        let mut sub = remaining;
        loop {
            let forests = tables.forests_for(sub);
            for forest in forests.iter() {
                spine.push(forest.clone());
                recurse(remaining ^ sub, tables, spine, visit);
                spine.pop();
            }
            sub = (sub - 1) & remaining;
            if sub == 0 {
                break;
            }
        }
    }
}

/// All Γ-stable dual trees on the leaf set V(gamma), each exactly once.
pub fn enumerate_stable_trees(gamma: &SimpleGraph, p: usize, q: usize) -> Result<Vec<DualTree>> {
    let mut out = Vec::new();
    for_each_stable_tree(gamma, p, q, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Σ over Γ-stable trees of (−1)^{i(T)}. The absolute value equals the
/// acyclic-orientation count of Γ∖{P,Q} and the sign is (−1)^{n−1} for n
/// non-dominating vertices; both facts are enforced by the test suites rather
/// than assumed here.
pub fn alternating_strata_sum(gamma: &SimpleGraph, p: usize, q: usize) -> Result<i64> {
    let mut sum = 0i64;
    for_each_stable_tree(gamma, p, q, |t| {
        sum += if t.internal_edge_count() % 2 == 0 { 1 } else { -1 };
    })?;
    Ok(sum)
}

/// The same alternating sum computed by subset convolution over the reduced
/// graph `h = Γ∖{P,Q}` instead of tree-by-tree enumeration, in O(3ⁿ).
///
/// Writing b(S) for the signed count of single branches on leaf set S
/// (weight (−1)^{#nodes}) and f(S) for signed branch forests, the
/// recurrences mirror the enumeration exactly: a branch on |S| ≥ 2 leaves is
/// a node over a forest with ≥ 2 parts and exists only when S contains an
/// edge, and the spine contributes (−1)^{#blocks−1} through
/// u(R) = Σ_B −f(B)·u(R∖B).
pub fn fast_strata_sum(h: &SimpleGraph) -> i64 {
    signed_spine_sum(h, |tables, mask| tables.signed_forests(mask))
}

/// Σ over millipedes of `h` of (−1)^{#blocks−1}, by the same subset
/// convolution with forests replaced by independent blocks. A sign-reversing
/// involution argument makes this equal [`fast_strata_sum`]; the test suites
/// compare the two across whole graph families.
pub fn millipede_signed_sum(h: &SimpleGraph) -> i64 {
    signed_spine_sum(h, |tables, mask| {
        if tables.graph.is_independent_mask(mask) {
            1
        } else {
            0
        }
    })
}

struct SignedTables<'g> {
    graph: &'g SimpleGraph,
    branches: HashMap<u64, i64>,
    forests: HashMap<u64, i64>,
}

impl<'g> SignedTables<'g> {
    fn signed_branches(&mut self, mask: u64) -> i64 {
        if let Some(&b) = self.branches.get(&mask) {
            return b;
        }
        let b = if mask.count_ones() == 1 {
            1
        } else if self.graph.is_independent_mask(mask) {
            0
        } else {
            // A node costs one internal edge and stands over a forest whose
            // first part is a proper subset containing the lowest leaf.
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut total = 0i64;
            let mut sub = rest;
            loop {
                sub = (sub - 1) & rest;
                let part = low | sub;
                let head = self.signed_branches(part);
                if head != 0 {
                    total += head * self.signed_forests(mask ^ part);
                }
                if sub == 0 {
                    break;
                }
            }
            -total
        };
        self.branches.insert(mask, b);
        b
    }

    fn signed_forests(&mut self, mask: u64) -> i64 {
        if mask == 0 {
            return 1;
        }
        if let Some(&f) = self.forests.get(&mask) {
            return f;
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut total = 0i64;
        let mut sub = rest;
        loop {
            let part = low | sub;
            let head = self.signed_branches(part);
            if head != 0 {
                total += head * self.signed_forests(mask ^ part);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        self.forests.insert(mask, total);
        total
    }
}

fn signed_spine_sum(
    h: &SimpleGraph,
    mut block_weight: impl FnMut(&mut SignedTables, u64) -> i64,
) -> i64 {
    let n = h.vertex_count();
    if n == 0 {
        return 0;
    }
    let full = (1u64 << n) - 1;
    let mut tables =
        SignedTables { graph: h, branches: HashMap::new(), forests: HashMap::new() };
    // u(R) = Σ over ordered spine partitions of R of Π weight(block) ×
    // (−1)^{#blocks}; the tree sum is −u(full) because a spine of b blocks
    // has b − 1 spine edges.
    let mut u = vec![0i64; (full + 1) as usize];
    u[0] = 1;
    for r in 1..=full {
        let mut total = 0i64;
        let mut sub = r;
        loop {
            let w = block_weight(&mut tables, sub);
            if w != 0 {
                total -= w * u[(r ^ sub) as usize];
            }
            sub = (sub - 1) & r;
            if sub == 0 {
                break;
            }
        }
        u[r as usize] = total;
    }
    -u[full as usize]
}

/// The up-down involution: at the first spine vertex (from P) whose hanging
/// leaf set contains a Γ-edge, either contract the single branch node into
/// the spine or bundle the several branches under a new node. Millipedes are
/// the fixed points.
pub fn up_down_involution(
    t: &DualTree,
    gamma: &SimpleGraph,
    p: usize,
    q: usize,
) -> Result<DualTree> {
    if !t.is_stable(gamma, p, q)? {
        return Err(invalid("tree is not Γ-stable"));
    }
    let leaf_sets = t.spine_leaf_sets();
    let target = leaf_sets.iter().position(|ls| {
        let mask = ls.iter().fold(0u64, |m, &v| m | 1 << v);
        !gamma.is_independent_mask(mask)
    });
    let Some(i) = target else {
        return Ok(t.clone());
    };
    let mut spine = t.spine.clone();
    if spine[i].len() == 1 {
        // A lone leaf has no edge inside, so the lone branch is a node:
        // contract its edge, promoting the children to the spine vertex.
        let Branch::Node(children) = spine[i].pop().expect("nonempty") else {
            unreachable!("single leaf branch cannot contain a Γ-edge");
        };
        spine[i] = children;
    } else {
        // Bundle all branches under one new node.
        let children = std::mem::take(&mut spine[i]);
        spine[i] = vec![Branch::Node(children)];
    }
    DualTree::new(spine)
}

/// All millipedes of the reduced graph `h` (ordered set partitions of its
/// vertex set into independent blocks), in OSP enumeration order.
pub fn enumerate_millipedes(h: &SimpleGraph) -> Vec<Millipede> {
    let ground: Vec<usize> = (0..h.vertex_count()).collect();
    enumerate_osps(&ground, |b| h.is_independent(b).unwrap_or(false))
        .into_iter()
        .map(|p| Millipede { blocks: p.blocks().to_vec() })
        .collect()
}

/// The disconnected region of a leaf `c`: leaves of the maximal run of blocks
/// immediately left of c's block whose every leaf is non-adjacent to c in
/// `h`. Returns the region and its minimum (`None` encodes ∞ for an empty
/// region; ∞ compares greater than every leaf).
pub fn disconnected_region(
    m: &Millipede,
    h: &SimpleGraph,
    c: usize,
) -> Result<(Vec<usize>, Option<usize>)> {
    let i = m
        .blocks
        .iter()
        .position(|b| b.contains(&c))
        .ok_or_else(|| invalid(format!("leaf {c} does not appear in the millipede")))?;
    let mut region = Vec::new();
    for j in (0..i).rev() {
        if m.blocks[j].iter().all(|&x| !h.has_edge(x, c)) {
            region.extend_from_slice(&m.blocks[j]);
        } else {
            break;
        }
    }
    region.sort_unstable();
    let min = region.first().copied();
    Ok((region, min))
}

fn is_bad_vertex(m: &Millipede, h: &SimpleGraph, i: usize) -> bool {
    if m.blocks[i].len() > 1 {
        return true;
    }
    let c = m.blocks[i][0];
    let (_, mc) = disconnected_region(m, h, c).expect("leaf is present");
    mc.is_some_and(|x| x < c)
}

/// The left-right involution on millipedes: at the leftmost bad vertex,
/// either merge the preceding singleton in (when every leaf c there has
/// m_c < c) or split off the smallest leaf whose disconnected region fails
/// that, placing it on a new vertex immediately to the left. Fixed points are
/// the all-singleton millipedes with m_c > c throughout.
pub fn left_right_involution(m: &Millipede, h: &SimpleGraph) -> Millipede {
    let Some(v) = (0..m.blocks.len()).find(|&i| is_bad_vertex(m, h, i)) else {
        return m.clone();
    };
    let leaves = &m.blocks[v];
    let regions: Vec<Option<usize>> = leaves
        .iter()
        .map(|&c| disconnected_region(m, h, c).expect("leaf is present").1)
        .collect();
    let mut blocks = m.blocks.clone();
    if leaves
        .iter()
        .zip(&regions)
        .all(|(&c, mc)| mc.is_some_and(|x| x < c))
    {
        // Merge: every leaf wants to move left; the vertex before the
        // leftmost bad one is a singleton (it was not bad itself).
        debug_assert!(v > 0 && blocks[v - 1].len() == 1);
        let c0 = blocks.remove(v - 1)[0];
        blocks[v - 1].push(c0);
        blocks[v - 1].sort_unstable();
    } else {
        // Split: detach the smallest leaf with m_c > c (∞ counts as >).
        let split_at = leaves
            .iter()
            .zip(&regions)
            .position(|(&c, mc)| mc.map_or(true, |x| x > c))
            .expect("split case has such a leaf");
        let c = blocks[v].remove(split_at);
        blocks.insert(v, vec![c]);
    }
    Millipede { blocks }
}

/// All-singleton millipedes fixed by the left-right involution (m_c > c for
/// every leaf), enumerated over permutations of V(h) in lexicographic order.
pub fn left_right_fixed_points(h: &SimpleGraph) -> Vec<Millipede> {
    let n = h.vertex_count();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    descend(h, n, &mut perm, &mut used, &mut out);
    return out;

    fn descend(
        h: &SimpleGraph,
        n: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Millipede>,
    ) {
        if perm.len() == n {
            let m = Millipede { blocks: perm.iter().map(|&c| vec![c]).collect() };
            if (0..n).all(|i| !is_bad_vertex(&m, h, i)) {
                out.push(m);
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                descend(h, n, perm, used, out);
                perm.pop();
                used[v] = false;
            }
        }
    }
}

/// Reads a caterpillar off an acyclic orientation: repeatedly list the
/// largest source among the remaining vertices, left to right from P.
pub fn aco_to_caterpillar(o: &Orientation) -> Result<Millipede> {
    if !o.is_acyclic() {
        return Err(invalid("orientation has a directed cycle"));
    }
    let n = o.graph().vertex_count();
    let mut alive = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut blocks = Vec::with_capacity(n);
    while alive != 0 {
        let sources = o.sources_within(alive);
        debug_assert!(sources != 0, "acyclic orientation always has a source");
        let largest = 63 - sources.leading_zeros() as usize;
        blocks.push(vec![largest]);
        alive &= !(1 << largest);
    }
    Ok(Millipede { blocks })
}

/// Orients every edge of `h` from its earlier to its later endpoint along the
/// caterpillar; inverse of [`aco_to_caterpillar`] on left-right fixed points.
pub fn caterpillar_to_aco(m: &Millipede, h: &SimpleGraph) -> Result<Orientation> {
    let n = h.vertex_count();
    if !m.is_all_singletons()
        || m.blocks.len() != n
        || m.blocks.iter().any(|b| b[0] >= n)
    {
        return Err(invalid("not an all-singleton millipede over V(h)"));
    }
    if (0..m.blocks.len()).any(|i| is_bad_vertex(m, h, i)) {
        return Err(invalid("millipede is not a left-right fixed point"));
    }
    let mut position = vec![0usize; n];
    for (i, block) in m.blocks.iter().enumerate() {
        position[block[0]] = i;
    }
    let directed: Vec<(usize, usize)> = h
        .edges()
        .iter()
        .map(|&(u, v)| if position[u] < position[v] { (u, v) } else { (v, u) })
        .collect();
    Orientation::new(h.clone(), &directed)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Γ = reduced graph `h` plus two dominating vertices appended at the
    /// end, so leaf labels of trees coincide with vertex labels of `h`.
    fn with_dominating(h: &SimpleGraph) -> (SimpleGraph, usize, usize) {
        let n = h.vertex_count();
        let mut edges = h.edges();
        for v in 0..n {
            edges.push((v, n));
            edges.push((v, n + 1));
        }
        edges.push((n, n + 1));
        (SimpleGraph::new(n + 2, &edges).unwrap(), n, n + 1)
    }

    #[test]
    fn enumerate_small_spaces() {
        // K4 = single edge plus P,Q: the M₀,₄ strata.
        let (k4, p, q) = with_dominating(&SimpleGraph::new(2, &[(0, 1)]).unwrap());
        let trees = enumerate_stable_trees(&k4, p, q).unwrap();
        assert_eq!(trees.len(), 4);
        assert_eq!(trees.iter().filter(|t| t.internal_edge_count() == 0).count(), 1);
        assert_eq!(trees.iter().filter(|t| t.internal_edge_count() == 1).count(), 3);

        // K3: a single point of a moduli space.
        let (k3, p, q) = with_dominating(&SimpleGraph::edgeless(1));
        assert_eq!(enumerate_stable_trees(&k3, p, q).unwrap().len(), 1);

        // Two non-adjacent extra vertices: star plus the two millipedes.
        let (g, p, q) = with_dominating(&SimpleGraph::edgeless(2));
        let trees = enumerate_stable_trees(&g, p, q).unwrap();
        assert_eq!(trees.len(), 3);
        let millipedes: Vec<_> = trees.iter().filter_map(DualTree::as_millipede).collect();
        assert_eq!(millipedes.len(), 3);

        // Vertex 0 of g is not adjacent to vertex 1, hence not dominating.
        assert!(enumerate_stable_trees(&g, 0, q).is_err());
    }

    #[test]
    fn alternating_sums() {
        let (k4, p, q) = with_dominating(&SimpleGraph::new(2, &[(0, 1)]).unwrap());
        assert_eq!(alternating_strata_sum(&k4, p, q).unwrap(), -2);
        let (k3, p, q) = with_dominating(&SimpleGraph::edgeless(1));
        assert_eq!(alternating_strata_sum(&k3, p, q).unwrap(), 1);
        for k in 1..=5 {
            let (lm, p, q) = with_dominating(&SimpleGraph::edgeless(k));
            let sum = alternating_strata_sum(&lm, p, q).unwrap();
            assert_eq!(sum.unsigned_abs(), 1, "Losev–Manin sum is ±1");
            assert_eq!(sum, if k % 2 == 1 { 1 } else { -1 });
        }
    }

    /// The two-level branch and its one-level partner, as drawn: spine
    /// (2 (4 6)) | 3 | 1 5 in 1-indexed labels. The drawn tree needs an edge
    /// between leaves 4 and 6 to be stable, so the triangle {1,2,4} + edge
    /// {3,5} graph is augmented with {4,6}.
    #[test]
    fn up_down_worked_pair() {
        let h = SimpleGraph::new(
            6,
            &[(0, 1), (0, 3), (1, 3), (2, 4), (3, 5)],
        )
        .unwrap();
        let (gamma, p, q) = with_dominating(&h);
        let two_level = DualTree::new(vec![
            vec![Branch::Node(vec![
                Branch::Leaf(1),
                Branch::Node(vec![Branch::Leaf(3), Branch::Leaf(5)]),
            ])],
            vec![Branch::Leaf(2)],
            vec![Branch::Leaf(0), Branch::Leaf(4)],
        ])
        .unwrap();
        let one_level = DualTree::new(vec![
            vec![
                Branch::Leaf(1),
                Branch::Node(vec![Branch::Leaf(3), Branch::Leaf(5)]),
            ],
            vec![Branch::Leaf(2)],
            vec![Branch::Leaf(0), Branch::Leaf(4)],
        ])
        .unwrap();
        assert!(two_level.is_stable(&gamma, p, q).unwrap());
        assert!(one_level.is_stable(&gamma, p, q).unwrap());
        assert_eq!(two_level.to_string(), "P | (2 (4 6)) | 3 | 1 5 | Q");
        assert_eq!(up_down_involution(&two_level, &gamma, p, q).unwrap(), one_level);
        assert_eq!(up_down_involution(&one_level, &gamma, p, q).unwrap(), two_level);
        assert_eq!(two_level.internal_edge_count(), 4);
        assert_eq!(one_level.internal_edge_count(), 3);

        // Unstable input errors out: drop the {4,6} edge again.
        let (gamma0, p0, q0) =
            with_dominating(&SimpleGraph::new(6, &[(0, 1), (0, 3), (1, 3), (2, 4)]).unwrap());
        assert!(up_down_involution(&two_level, &gamma0, p0, q0).is_err());
    }

    #[test]
    fn up_down_fixes_millipedes_and_pairs_k4_star() {
        let h = SimpleGraph::new(2, &[(0, 1)]).unwrap();
        let (gamma, p, q) = with_dominating(&h);
        let millipede = DualTree::from_millipede(
            &Millipede::new(vec![vec![0], vec![1]], &h).unwrap(),
        );
        assert_eq!(up_down_involution(&millipede, &gamma, p, q).unwrap(), millipede);

        let star = DualTree::new(vec![vec![Branch::Leaf(0), Branch::Leaf(1)]]).unwrap();
        let bundled =
            DualTree::new(vec![vec![Branch::Node(vec![Branch::Leaf(0), Branch::Leaf(1)])]])
                .unwrap();
        assert_eq!(up_down_involution(&star, &gamma, p, q).unwrap(), bundled);
        assert_eq!(up_down_involution(&bundled, &gamma, p, q).unwrap(), star);
    }

    /// For every reduced graph on ≤ 4 vertices: the up-down map is a
    /// sign-reversing involution whose fixed points are exactly the
    /// millipedes.
    #[test]
    fn up_down_is_sign_reversing_involution() {
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let h = SimpleGraph::new(n, &edges).unwrap();
                let (gamma, p, q) = with_dominating(&h);
                let trees = enumerate_stable_trees(&gamma, p, q).unwrap();
                let mut fixed = 0usize;
                for t in &trees {
                    let image = up_down_involution(t, &gamma, p, q).unwrap();
                    assert!(trees.contains(&image), "image must be stable");
                    assert_eq!(&up_down_involution(&image, &gamma, p, q).unwrap(), t);
                    let independent_millipede = t
                        .as_millipede()
                        .is_some_and(|m| Millipede::new(m.blocks().to_vec(), &h).is_ok());
                    assert_eq!(&image == t, independent_millipede);
                    if &image == t {
                        fixed += 1;
                    } else {
                        assert_eq!(
                            (t.internal_edge_count() + image.internal_edge_count()) % 2,
                            1,
                            "paired trees differ by one internal edge mod 2"
                        );
                    }
                }
                assert_eq!(fixed, enumerate_millipedes(&h).len());
            }
        }
    }

    /// Γ∖{P,Q} of the worked left-right example: triangle {1,2,4}, edge
    /// {3,5}, isolated 6 (1-indexed labels; internal labels shift down by 1).
    fn left_right_graph() -> SimpleGraph {
        SimpleGraph::new(6, &[(0, 1), (0, 3), (1, 3), (2, 4)]).unwrap()
    }

    fn millipede(h: &SimpleGraph, blocks: &[&[usize]]) -> Millipede {
        Millipede::new(blocks.iter().map(|b| b.to_vec()).collect(), h).unwrap()
    }

    #[test]
    fn disconnected_region_worked_values() {
        let h = left_right_graph();
        // ({2},{4},{5},{1,3,6}) in paper labels.
        let m = millipede(&h, &[&[1], &[3], &[4], &[0, 2, 5]]);
        assert_eq!(disconnected_region(&m, &h, 4).unwrap(), (vec![1, 3], Some(1)));
        assert_eq!(disconnected_region(&m, &h, 5).unwrap(), (vec![1, 3, 4], Some(1)));
        assert_eq!(disconnected_region(&m, &h, 1).unwrap(), (vec![], None));
        assert!(disconnected_region(&m, &h, 7).is_err());

        // Edgeless graph: the region is everything strictly to the left.
        let e = SimpleGraph::edgeless(4);
        let m = millipede(&e, &[&[2], &[0, 3], &[1]]);
        assert_eq!(disconnected_region(&m, &e, 1).unwrap(), (vec![0, 2, 3], Some(0)));
    }

    #[test]
    fn left_right_worked_examples() {
        let h = left_right_graph();
        // ({2},{4},{5},{1,3,6}) merges 5 into {4}.
        let before = millipede(&h, &[&[1], &[3], &[4], &[0, 2, 5]]);
        let after = millipede(&h, &[&[1], &[3, 4], &[0, 2, 5]]);
        assert_eq!(left_right_involution(&before, &h), after);
        assert_eq!(left_right_involution(&after, &h), before);

        // ({5},{1},{2},{3,4,6}) splits out the 4.
        let before = millipede(&h, &[&[4], &[0], &[1], &[2, 3, 5]]);
        let after = millipede(&h, &[&[4], &[0], &[1], &[3], &[2, 5]]);
        assert_eq!(left_right_involution(&before, &h), after);
        assert_eq!(left_right_involution(&after, &h), before);
    }

    /// On an edgeless graph the left-right involution degenerates to the
    /// merge-split involution on ordered set partitions.
    #[test]
    fn left_right_recovers_merge_split_when_edgeless() {
        use crate::osp::{for_each_osp, merge_split_involution};
        let h = SimpleGraph::edgeless(5);
        let ground: Vec<usize> = (0..5).collect();
        for_each_osp(&ground, &|_| true, &mut |p| {
            let m = Millipede { blocks: p.blocks().to_vec() };
            let image = left_right_involution(&m, &h);
            let expected = merge_split_involution(p);
            assert_eq!(image.blocks(), expected.blocks());
        });
    }

    #[test]
    fn fixed_point_streams() {
        let edgeless = SimpleGraph::edgeless(3);
        let fps = left_right_fixed_points(&edgeless);
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].blocks(), &[vec![2], vec![1], vec![0]]);

        let single_edge = SimpleGraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(left_right_fixed_points(&single_edge).len(), 2);

        let triangle = SimpleGraph::complete(3).unwrap();
        assert_eq!(left_right_fixed_points(&triangle).len(), 6);
    }

    #[test]
    fn bijection_small_cases() {
        // Edgeless: the empty orientation maps to ({n},…,{1}).
        let e = SimpleGraph::edgeless(3);
        let o = e.acyclic_orientations().pop().unwrap();
        let m = aco_to_caterpillar(&o).unwrap();
        assert_eq!(m.blocks(), &[vec![2], vec![1], vec![0]]);
        assert_eq!(caterpillar_to_aco(&m, &e).unwrap(), o);

        // Single edge, both orientations.
        let g = SimpleGraph::new(2, &[(0, 1)]).unwrap();
        for o in g.acyclic_orientations() {
            let m = aco_to_caterpillar(&o).unwrap();
            assert_eq!(caterpillar_to_aco(&m, &g).unwrap(), o);
        }

        // Errors: cyclic orientation, non-fixed-point millipede.
        let k3 = SimpleGraph::complete(3).unwrap();
        let cyclic = Orientation::new(k3.clone(), &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(aco_to_caterpillar(&cyclic).is_err());
        let not_fixed = millipede(&SimpleGraph::edgeless(2), &[&[0], &[1]]);
        assert!(caterpillar_to_aco(&not_fixed, &SimpleGraph::edgeless(2)).is_err());
    }

    /// Round-trips and counts for every graph on ≤ 4 vertices; the ≤ 6 sweep
    /// runs in the acceptance suite.
    #[test]
    fn bijection_round_trips_exhaustive() {
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let h = SimpleGraph::new(n, &edges).unwrap();
                let fps = left_right_fixed_points(&h);
                let acos = h.acyclic_orientations();
                assert_eq!(fps.len() as u64, h.count_acyclic_orientations());
                assert_eq!(fps.len(), acos.len());
                for o in &acos {
                    let m = aco_to_caterpillar(o).unwrap();
                    assert!(fps.contains(&m));
                    assert_eq!(&caterpillar_to_aco(&m, &h).unwrap(), o);
                }
                for m in &fps {
                    let o = caterpillar_to_aco(m, &h).unwrap();
                    assert_eq!(&aco_to_caterpillar(&o).unwrap(), m);
                }
            }
        }
    }

    /// Strata sums match ±ACO with sign (−1)^{n−1} for every reduced graph
    /// on ≤ 4 vertices.
    #[test]
    fn strata_sum_matches_acyclic_orientations() {
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let h = SimpleGraph::new(n, &edges).unwrap();
                let (gamma, p, q) = with_dominating(&h);
                let sum = alternating_strata_sum(&gamma, p, q).unwrap();
                assert_eq!(sum.unsigned_abs(), h.count_acyclic_orientations());
                let expected_sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(sum.signum(), expected_sign);
                // The two fast routes reproduce the enumerated sum.
                assert_eq!(fast_strata_sum(&h), sum);
                assert_eq!(millipede_signed_sum(&h), sum);
            }
        }
    }

    #[test]
    fn millipede_enumeration_respects_independence() {
        let h = SimpleGraph::new(3, &[(0, 1)]).unwrap();
        let ms = enumerate_millipedes(&h);
        // Of the 13 OSPs of a 3-set, exactly 3 have a block containing both
        // 0 and 1: the one-block OSP and the two orderings of {0,1} | {2}.
        assert_eq!(ms.len(), 10);
        assert!(ms.iter().all(|m| m
            .blocks()
            .iter()
            .all(|b| h.is_independent(b).unwrap())));
        assert!(Millipede::new(vec![vec![0, 1]], &h).is_err());
    }

    #[test]
    fn graph_form_degrees() {
        let t = DualTree::new(vec![
            vec![Branch::Node(vec![
                Branch::Leaf(1),
                Branch::Node(vec![Branch::Leaf(3), Branch::Leaf(5)]),
            ])],
            vec![Branch::Leaf(2)],
            vec![Branch::Leaf(0), Branch::Leaf(4)],
        ])
        .unwrap();
        let (edges, attach) = t.graph_form();
        assert_eq!(edges.len(), t.internal_edge_count());
        let vertex_total = edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(attach.iter().map(|&(_, v)| v))
            .max()
            .unwrap()
            + 1;
        let mut degree = vec![0usize; vertex_total];
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        for &(_, v) in &attach {
            degree[v] += 1;
        }
        assert!(degree.iter().all(|&d| d >= 3), "internal degrees {degree:?}");
    }
}
