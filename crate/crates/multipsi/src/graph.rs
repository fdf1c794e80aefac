//! Simple graphs, independence, domination, orientations, and exact
//! acyclic-orientation counting.
//!
//! Graphs here play the role of collision rules: vertices are marked points,
//! and an edge means the two points may *not* collide. The key quantity is
//! the number of acyclic orientations of the graph obtained by deleting two
//! dominating vertices; it is computed by two independent routes (exhaustive
//! orientation enumeration and deletion–contraction) that are required to
//! agree.

use crate::{invalid, Result};

/// Edge budget under which [`SimpleGraph::count_acyclic_orientations`]
/// additionally runs the exhaustive 2^|E| brute-force count and checks it
/// against the deletion–contraction value.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 20;

/// An undirected simple graph on vertices `0..vertex_count`, capped at 64
/// vertices so adjacency fits in one machine word per vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    /// Builds a graph from an edge list. Loops are rejected; duplicate edges
    /// collapse (edges form a set).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(invalid(format!("graph too large: {n} vertices (max 64)")));
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(invalid(format!("loop at vertex {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(SimpleGraph { n, adj })
    }

    /// The edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Self {
        SimpleGraph::new(n, &[]).expect("edgeless graph is always valid")
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        SimpleGraph::new(n, &edges)
    }

    /// Complete multipartite graph of a color profile: vertices are grouped
    /// into consecutive classes of the profile's sizes, and two vertices are
    /// adjacent exactly when they lie in different classes.
    pub fn complete_multipartite(profile: &ColorProfile) -> Self {
        let n = profile.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if profile.color_of(u) != profile.color_of(v) {
                    edges.push((u, v));
                }
            }
        }
        SimpleGraph::new(n, &edges).expect("profile sizes already validated")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as ordered pairs (u < v), sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut m = self.adj[u] >> (u + 1) << (u + 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                out.push((u, v));
                m &= m - 1;
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    /// True iff no edge of the graph has both endpoints in `s`.
    pub fn is_independent(&self, s: &[usize]) -> Result<bool> {
        let mut mask = 0u64;
        for &v in s {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} out of range")));
            }
            mask |= 1 << v;
        }
        Ok(self.is_independent_mask(mask))
    }

    pub(crate) fn is_independent_mask(&self, mask: u64) -> bool {
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            if self.adj[v] & mask != 0 {
                return false;
            }
            m &= m - 1;
        }
        true
    }

    /// Vertices adjacent to every other vertex.
    pub fn dominating_vertices(&self) -> Vec<usize> {
        let all = if self.n == 64 { !0u64 } else { (1u64 << self.n) - 1 };
        (0..self.n)
            .filter(|&v| self.adj[v] == all & !(1 << v))
            .collect()
    }

    /// Induced subgraph on the complement of `s`, vertices relabeled
    /// contiguously. The returned map sends each new label to its old one.
    pub fn delete_vertices(&self, s: &[usize]) -> Result<(SimpleGraph, Vec<usize>)> {
        let mut del = 0u64;
        for &v in s {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} out of range")));
            }
            del |= 1 << v;
        }
        let kept: Vec<usize> = (0..self.n).filter(|&v| del & (1 << v) == 0).collect();
        let mut edges = Vec::new();
        for (iu, &u) in kept.iter().enumerate() {
            for (iv, &v) in kept.iter().enumerate().skip(iu + 1) {
                if self.has_edge(u, v) {
                    edges.push((iu, iv));
                }
            }
        }
        Ok((SimpleGraph::new(kept.len(), &edges)?, kept))
    }

    /// Exact number of acyclic orientations, by deletion–contraction; when
    /// the graph has at most [`BRUTE_FORCE_EDGE_LIMIT`] edges the exhaustive
    /// count over all 2^|E| orientations runs as well and the two values are
    /// required to agree.
    pub fn count_acyclic_orientations(&self) -> u64 {
        self.count_acyclic_orientations_with_limit(BRUTE_FORCE_EDGE_LIMIT)
    }

    /// As [`count_acyclic_orientations`](Self::count_acyclic_orientations),
    /// with an explicit brute-force edge budget.
    pub fn count_acyclic_orientations_with_limit(&self, brute_limit: usize) -> u64 {
        let dc = self.aco_by_deletion_contraction();
        if self.edge_count() <= brute_limit {
            let brute = self.aco_by_brute_force();
            assert_eq!(
                dc, brute,
                "deletion-contraction and brute-force acyclic-orientation counts disagree"
            );
        }
        dc
    }

    /// Brute-force acyclic-orientation count: every orientation of every edge
    /// is generated and checked for directed cycles.
    pub fn aco_by_brute_force(&self) -> u64 {
        let edges = self.edges();
        assert!(edges.len() < 63, "brute force over 2^|E| orientations is hopeless here");
        let mut count = 0u64;
        for mask in 0u64..1 << edges.len() {
            let mut out_masks = vec![0u64; self.n];
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    out_masks[u] |= 1 << v;
                } else {
                    out_masks[v] |= 1 << u;
                }
            }
            if orientation_is_acyclic(self.n, &out_masks) {
                count += 1;
            }
        }
        count
    }

    /// Deletion–contraction acyclic-orientation count:
    /// a(G) = a(G − e) + a(G / e), with parallel edges merged after
    /// contraction so the graph stays simple; a(edgeless) = 1.
    pub fn aco_by_deletion_contraction(&self) -> u64 {
        let Some(&(u, v)) = self.edges().first() else {
            return 1;
        };
        let mut deleted = self.clone();
        deleted.adj[u] &= !(1 << v);
        deleted.adj[v] &= !(1 << u);
        let contracted = self.contract_edge(u, v);
        deleted.aco_by_deletion_contraction() + contracted.aco_by_deletion_contraction()
    }

    /// Contracts edge (u,v) into a single vertex, dropping the loop and
    /// merging parallel edges; vertices above v shift down by one.
    fn contract_edge(&self, u: usize, v: usize) -> SimpleGraph {
        debug_assert!(self.has_edge(u, v));
        let squeeze = |w: usize| if w > v { w - 1 } else { w };
        let mut edges = Vec::new();
        for (a, b) in self.edges() {
            if (a, b) == (u.min(v), u.max(v)) {
                continue;
            }
            let a = if a == v { u } else { a };
            let b = if b == v { u } else { b };
            if a != b {
                edges.push((squeeze(a), squeeze(b)));
            }
        }
        SimpleGraph::new(self.n - 1, &edges).expect("contraction preserves validity")
    }

    /// All 2^|E| orientations of the graph.
    pub fn orientations(&self) -> impl Iterator<Item = Orientation> + '_ {
        let edges = self.edges();
        let count = 1u64 << edges.len();
        (0..count).map(move |mask| Orientation {
            graph: self.clone(),
            edges: edges.clone(),
            forward: mask,
        })
    }

    /// All acyclic orientations, in the deterministic order of
    /// [`orientations`](Self::orientations).
    pub fn acyclic_orientations(&self) -> Vec<Orientation> {
        self.orientations().filter(|o| o.is_acyclic()).collect()
    }

    /// Parses the text format: first line `n=<count>`, then one `u v` line
    /// per edge, all 1-indexed.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| invalid("empty graph file"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| invalid(format!("expected `n=<count>` header, got `{header}`")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(invalid(format!("expected `u v` edge line, got `{line}`")));
            };
            let parse = |s: &str| -> Result<usize> {
                let x: usize = s.parse().map_err(|_| invalid(format!("bad vertex `{s}`")))?;
                if x == 0 || x > n {
                    return Err(invalid(format!("vertex {x} out of range 1..={n}")));
                }
                Ok(x - 1)
            };
            edges.push((parse(u)?, parse(v)?));
        }
        SimpleGraph::new(n, &edges)
    }

    /// Writes the text format accepted by [`from_text`](Self::from_text).
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

fn orientation_is_acyclic(n: usize, out_masks: &[u64]) -> bool {
    // Peel vertices with no incoming edges until none remain or all are gone.
    let mut alive = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut remaining = n;
    loop {
        let mut progressed = false;
        let mut m = alive;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let has_incoming = {
                let mut others = alive & !(1 << v);
                let mut found = false;
                while others != 0 {
                    let w = others.trailing_zeros() as usize;
                    others &= others - 1;
                    if out_masks[w] & (1 << v) != 0 {
                        found = true;
                        break;
                    }
                }
                found
            };
            if !has_incoming {
                alive &= !(1 << v);
                remaining -= 1;
                progressed = true;
            }
        }
        if remaining == 0 {
            return true;
        }
        if !progressed {
            return false;
        }
    }
}

/// An orientation of every edge of a [`SimpleGraph`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orientation {
    graph: SimpleGraph,
    edges: Vec<(usize, usize)>,
    /// Bit i set ⇒ edges[i] = (u,v) is directed u → v, else v → u.
    forward: u64,
}

impl Orientation {
    /// Builds an orientation from directed pairs, which must cover each edge
    /// of the graph exactly once.
    pub fn new(graph: SimpleGraph, directed: &[(usize, usize)]) -> Result<Self> {
        let edges = graph.edges();
        if directed.len() != edges.len() {
            return Err(invalid(format!(
                "{} directed pairs for {} edges",
                directed.len(),
                edges.len()
            )));
        }
        let mut forward = 0u64;
        let mut seen = vec![false; edges.len()];
        for &(a, b) in directed {
            let key = (a.min(b), a.max(b));
            let i = edges
                .binary_search(&key)
                .map_err(|_| invalid(format!("({a},{b}) is not an edge")))?;
            if seen[i] {
                return Err(invalid(format!("edge ({a},{b}) oriented twice")));
            }
            seen[i] = true;
            if (a, b) == key {
                forward |= 1 << i;
            }
        }
        Ok(Orientation { graph, edges, forward })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    /// Directed edges as (source, target) pairs.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| {
                if self.forward & (1 << i) != 0 {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect()
    }

    fn out_masks(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.graph.n];
        for (s, t) in self.directed_edges() {
            out[s] |= 1 << t;
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        orientation_is_acyclic(self.graph.n, &self.out_masks())
    }

    /// Sources (no incoming edge) among the still-`alive` vertex mask.
    pub(crate) fn sources_within(&self, alive: u64) -> u64 {
        let mut incoming = 0u64;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let (s, t) = if self.forward & (1 << i) != 0 { (u, v) } else { (v, u) };
            if alive & (1 << s) != 0 && alive & (1 << t) != 0 {
                incoming |= 1 << t;
            }
        }
        alive & !incoming
    }
}

/// A color profile `[r₁,…,r_m]`: marked points `0..n` split into consecutive
/// color classes of the given sizes.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct ColorProfile {
    sizes: Vec<usize>,
}

impl ColorProfile {
    /// At least three colors are required: the collision graph must be
    /// non-bipartite and the decoration calculus crosses out one point in
    /// each of the first three colors.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 3 {
            return Err(invalid(format!("need at least 3 colors, got {}", sizes.len())));
        }
        if sizes.iter().any(|&r| r == 0) {
            return Err(invalid("color class sizes must be positive"));
        }
        Ok(ColorProfile { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of marked points n = Σ rⱼ.
    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Number of colors m.
    pub fn m(&self) -> usize {
        self.sizes.len()
    }

    pub fn color_of(&self, point: usize) -> usize {
        debug_assert!(point < self.n());
        let mut acc = 0;
        for (j, &r) in self.sizes.iter().enumerate() {
            acc += r;
            if point < acc {
                return j;
            }
        }
        unreachable!("point out of range")
    }

    /// Half-open range of points of color `j`.
    pub fn class_range(&self, j: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..j].iter().sum();
        start..start + self.sizes[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(n: usize) -> SimpleGraph {
        SimpleGraph::complete(n).unwrap()
    }

    #[test]
    fn independence_basics() {
        let k3 = k(3);
        assert!(!k3.is_independent(&[0, 1]).unwrap());
        assert!(k3.is_independent(&[]).unwrap());
        let g = SimpleGraph::complete_multipartite(&ColorProfile::new(vec![2, 2, 1]).unwrap());
        assert!(g.is_independent(&[0, 1]).unwrap());
        assert!(k3.is_independent(&[0, 5]).is_err());
    }

    #[test]
    fn domination_basics() {
        assert_eq!(k(4).dominating_vertices(), vec![0, 1, 2, 3]);
        assert_eq!(SimpleGraph::edgeless(3).dominating_vertices(), Vec::<usize>::new());
        let star = SimpleGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.dominating_vertices(), vec![0]);
    }

    #[test]
    fn multipartite_construction() {
        let k3 = SimpleGraph::complete_multipartite(&ColorProfile::new(vec![1, 1, 1]).unwrap());
        assert_eq!(k3, k(3));
        assert!(ColorProfile::new(vec![2, 1]).is_err());
        let g = SimpleGraph::complete_multipartite(&ColorProfile::new(vec![2, 2, 1]).unwrap());
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn aco_small_values() {
        assert_eq!(SimpleGraph::edgeless(4).count_acyclic_orientations(), 1);
        assert_eq!(SimpleGraph::new(2, &[(0, 1)]).unwrap().count_acyclic_orientations(), 2);
        assert_eq!(k(3).count_acyclic_orientations(), 6);
        assert_eq!(k(4).count_acyclic_orientations(), 24);
    }

    #[test]
    fn deletion_basics() {
        let (g, map) = k(4).delete_vertices(&[2, 3]).unwrap();
        assert_eq!(g, SimpleGraph::new(2, &[(0, 1)]).unwrap());
        assert_eq!(map, vec![0, 1]);
        let (same, map) = k(4).delete_vertices(&[]).unwrap();
        assert_eq!(same, k(4));
        assert_eq!(map, vec![0, 1, 2, 3]);
        let g = SimpleGraph::complete_multipartite(&ColorProfile::new(vec![2, 2, 1]).unwrap());
        let (c4, _) = g.delete_vertices(&[4]).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4.count_acyclic_orientations(), 14); // 2^4 − 2 cyclic
    }

    #[test]
    fn text_round_trip() {
        let g = SimpleGraph::new(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "n=4\n1 2\n1 4\n2 3\n");
        assert_eq!(SimpleGraph::from_text(&text).unwrap(), g);
        assert!(SimpleGraph::from_text("n=2\n1 3\n").is_err());
        assert!(SimpleGraph::from_text("m=2\n").is_err());
    }

    /// Every graph on ≤ 5 vertices: the two acyclic-orientation routes agree.
    /// (The 6-vertex sweep lives in the acceptance suite.)
    #[test]
    fn aco_routes_agree_exhaustively() {
        for n in 0..=5usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = SimpleGraph::new(n, &edges).unwrap();
                assert_eq!(g.aco_by_brute_force(), g.aco_by_deletion_contraction());
            }
        }
    }

    #[test]
    fn aco_ignores_isolated_vertices() {
        for n in 2..=5usize {
            let g = k(n);
            let mut edges = g.edges();
            edges.sort();
            let padded = SimpleGraph::new(n + 2, &edges).unwrap();
            assert_eq!(
                g.count_acyclic_orientations(),
                padded.count_acyclic_orientations()
            );
        }
    }

    #[test]
    fn orientation_construction_and_acyclicity() {
        let g = k(3);
        let o = Orientation::new(g.clone(), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(o.is_acyclic());
        let cyc = Orientation::new(g.clone(), &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!cyc.is_acyclic());
        assert!(Orientation::new(g.clone(), &[(0, 1), (1, 2)]).is_err());
        assert!(Orientation::new(g, &[(0, 1), (1, 2), (2, 1)]).is_err());
    }

    proptest! {
        /// Independence is monotone under taking subsets.
        #[test]
        fn independence_monotone(edge_mask in 0u32..1 << 15, subset in 0u64..64) {
            let pairs: Vec<(usize, usize)> =
                (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| edge_mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = SimpleGraph::new(6, &edges).unwrap();
            let full: Vec<usize> = (0..6).filter(|&v| subset & (1 << v) != 0).collect();
            if g.is_independent(&full).unwrap() {
                for drop in 0..full.len() {
                    let mut sub = full.clone();
                    sub.remove(drop);
                    prop_assert!(g.is_independent(&sub).unwrap());
                }
            }
        }
    }
}
