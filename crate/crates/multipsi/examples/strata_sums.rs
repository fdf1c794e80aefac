//! Alternating sums over boundary strata of graphically stable spaces.
//!
//! For a graph Γ with two dominating vertices P and Q, the sum of
//! (−1)^{codimension} over the strata indexed by Γ-stable dual trees
//! collapses to ±(number of acyclic orientations of Γ∖{P,Q}); the sign is
//! (−1)^{v−1} for v remaining vertices. Run with
//! `cargo run --example strata_sums`.

use multipsi::strata::{
    alternating_strata_sum, caterpillar_to_aco, enumerate_stable_trees, fast_strata_sum,
    left_right_fixed_points, millipede_signed_sum,
};
use multipsi::SimpleGraph;

/// Γ = `h` plus two fresh dominating vertices appended at the end.
fn with_dominating(h: &SimpleGraph) -> (SimpleGraph, usize, usize) {
    let v = h.vertex_count();
    let mut edges = h.edges();
    for x in 0..v {
        edges.push((x, v));
        edges.push((x, v + 1));
    }
    edges.push((v, v + 1));
    (SimpleGraph::new(v + 2, &edges).unwrap(), v, v + 1)
}

fn demonstrate(name: &str, h: &SimpleGraph) {
    let (gamma, p, q) = with_dominating(h);
    let v = h.vertex_count();
    let trees = enumerate_stable_trees(&gamma, p, q).unwrap();
    let per_tree = alternating_strata_sum(&gamma, p, q).unwrap();
    let fast = fast_strata_sum(h);
    let milli = millipede_signed_sum(h);
    let aco = h.count_acyclic_orientations();
    println!("reduced graph {name} (v = {v}, {} edges):", h.edge_count());
    println!("  Γ-stable dual trees: {}", trees.len());
    println!("  tree-by-tree alternating sum: {per_tree}");
    println!("  subset-convolution sum:       {fast}");
    println!("  millipede alternating sum:    {milli}");
    println!("  acyclic orientations:         {aco} (sign (−1)^(v−1) = {})", if v % 2 == 1 { 1 } else { -1 });
    assert_eq!(per_tree, fast);
    assert_eq!(per_tree, milli);
    assert_eq!(per_tree.unsigned_abs(), aco);
    println!();
}

fn main() {
    demonstrate("K₂ (from K₄ with P, Q dominating)", &SimpleGraph::complete(2).unwrap());
    demonstrate("path on 3 vertices", &SimpleGraph::new(3, &[(0, 1), (1, 2)]).unwrap());
    demonstrate("5-cycle", &SimpleGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap());

    // The fixed points of the left-right involution are the all-singleton
    // millipedes, and they biject with acyclic orientations.
    let h = SimpleGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
    println!("left-right fixed points of the 3-path, with their orientations:");
    for m in left_right_fixed_points(&h) {
        let o = caterpillar_to_aco(&m, &h).unwrap();
        println!("  {m}  ↦  {:?}", o.directed_edges());
    }
}
