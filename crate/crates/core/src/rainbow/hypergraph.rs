//! The conflict hypergraph of a coloured bipartite graph and random greedy matchings in it.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::graph::{check_proper_linear, ColouredBipartiteGraph, RainbowMatching};
use crate::error::{QueensError, Result};

/// Vertex ids: A-vertices first, then B-vertices, then colours.
/// Hyperedge `e` comes from graph edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub num_vertices: usize,
    pub uniformity: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Every pair of vertices lies in at most one hyperedge.
    pub fn is_linear(&self) -> bool {
        let mut pairs = HashSet::new();
        self.edges.iter().all(|f| {
            (0..f.len()).all(|i| ((i + 1)..f.len()).all(|j| pairs.insert((f[i].min(f[j]), f[i].max(f[j])))))
        })
    }
}

pub fn conflict_hypergraph(g: &ColouredBipartiteGraph) -> Result<Hypergraph> {
    if !check_proper_linear(g) {
        return Err(QueensError::Precondition(
            "conflict hypergraph needs a proper linear colouring".into(),
        ));
    }
    let (na, nb) = (g.a_len(), g.b_len());
    let edges = (0..g.num_edges())
        .map(|e| {
            let (a, b) = g.ends(e);
            let mut f = vec![a, na + b];
            f.extend(g.colours(e).iter().map(|&c| na + nb + c as usize));
            f
        })
        .collect();
    Ok(Hypergraph {
        num_vertices: na + nb + g.num_colours(),
        uniformity: g.t() + 2,
        edges,
    })
}

#[derive(Clone, Debug)]
pub struct NibbleResult {
    pub matching: RainbowMatching,
    /// matched fraction of the smaller part; 1 for an edgeless graph
    pub coverage: f64,
    pub restarts_used: usize,
}

/// Random greedy matching in the conflict hypergraph: hyperedges in a uniformly
/// random order, each taken if it is disjoint from everything taken so far.
/// Keeps the best of up to `restarts` runs, stopping once `target_coverage` is met.
pub fn nibble_matching<R: Rng>(
    g: &ColouredBipartiteGraph,
    target_coverage: f64,
    restarts: usize,
    rng: &mut R,
) -> Result<NibbleResult> {
    let h = conflict_hypergraph(g)?;
    let side = g.a_len().min(g.b_len());
    if g.num_edges() == 0 || side == 0 {
        return Ok(NibbleResult {
            matching: RainbowMatching::for_graph(g),
            coverage: 1.0,
            restarts_used: 0,
        });
    }
    let mut order: Vec<usize> = (0..h.edges.len()).collect();
    let mut used = vec![false; h.num_vertices];
    let mut best: Option<RainbowMatching> = None;
    let mut runs = 0;
    for _ in 0..restarts.max(1) {
        runs += 1;
        order.shuffle(rng);
        used.iter_mut().for_each(|u| *u = false);
        let mut m = RainbowMatching::for_graph(g);
        for &e in &order {
            let f = &h.edges[e];
            if f.iter().any(|&v| used[v]) {
                continue;
            }
            f.iter().for_each(|&v| used[v] = true);
            let (a, b) = g.ends(e);
            m.add(a, b, g.colours(e))?;
        }
        debug_assert!(m.check_invariants());
        if best.as_ref().is_none_or(|b| m.len() > b.len()) {
            best = Some(m);
        }
        if best.as_ref().unwrap().len() as f64 >= target_coverage * side as f64 {
            break;
        }
    }
    let matching = best.expect("at least one run");
    Ok(NibbleResult {
        coverage: matching.len() as f64 / side as f64,
        matching,
        restarts_used: runs,
    })
}
