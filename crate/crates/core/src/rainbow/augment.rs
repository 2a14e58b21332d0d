//! Augmenting sequences: trade `k - 1` matching edges for `k` new ones.
//!
//! A sequence `v1 .. v2k` starts and ends at distinct uncovered vertices,
//! alternates new edges `v(2j-1) v(2j)` with matching edges `v(2j) v(2j+1)`,
//! and its new edges are colour-disjoint from each other, from every edge of
//! the matching and from the blocked colours.

use std::collections::HashMap;

use super::graph::{ColouredBipartiteGraph, RainbowMatching};

/// Colour bookkeeping shared by both searches.
struct Admissible<'a> {
    m: &'a RainbowMatching,
    blocked: &'a [bool],
}

impl Admissible<'_> {
    fn edge_ok(&self, colours: &[u32]) -> bool {
        colours
            .iter()
            .all(|&c| !self.m.is_colour_used(c) && !self.blocked.get(c as usize).copied().unwrap_or(false))
    }
}

fn disjoint(x: &[u32], y: &[u32]) -> bool {
    x.iter().all(|c| !y.contains(c))
}

/// Replaces the matching edges at `drop_a` by `new_edges`, checking the result.
fn apply(m: &RainbowMatching, drop_a: &[usize], new_edges: &[(usize, usize, Vec<u32>)]) -> RainbowMatching {
    let mut out = m.clone();
    for &a in drop_a {
        out.remove_at_a(a).expect("dropped vertex is matched");
    }
    for (a, b, colours) in new_edges {
        out.add(*a, *b, colours).expect("augmenting sequence is admissible");
    }
    assert!(out.check_invariants(), "augmentation broke the rainbow invariants");
    assert_eq!(out.len(), m.len() + 1);
    out
}

struct Node {
    a: usize,
    parent: usize,
    /// new edge from the parent's A-vertex into the B-vertex matched to `a`
    edge: u32,
    depth: usize,
}

const ROOT: usize = usize::MAX;

/// Breadth-first search for an augmenting sequence of at most `depth_bound`
/// vertices, from every uncovered A-vertex at once. `blocked[c]` marks extra
/// colours to avoid. Returns `None` when no sequence is found.
///
/// Vertices are visited once, so sequences that would revisit a vertex along
/// another colour history are not explored.
pub fn augment(
    g: &ColouredBipartiteGraph,
    m: &RainbowMatching,
    blocked: &[bool],
    depth_bound: usize,
) -> Option<RainbowMatching> {
    let rule = Admissible { m, blocked };
    let max_edges = depth_bound / 2;
    if max_edges == 0 {
        return None;
    }
    let mut seen_a = vec![false; g.a_len()];
    let mut seen_b = vec![false; g.b_len()];
    let mut nodes: Vec<Node> = Vec::new();
    for a in m.free_a() {
        seen_a[a] = true;
        nodes.push(Node {
            a,
            parent: ROOT,
            edge: u32::MAX,
            depth: 0,
        });
    }
    let mut head = 0;
    while head < nodes.len() {
        let (a, depth) = (nodes[head].a, nodes[head].depth);
        for &e in g.edges_at_a(a) {
            let (_, b) = g.ends(e as usize);
            let colours = g.colours(e as usize);
            if seen_b[b] || m.mate_of_a(a) == Some(b) || !rule.edge_ok(colours) {
                continue;
            }
            // new edges along the chain must be pairwise colour-disjoint
            let mut cur = head;
            let mut clash = false;
            while nodes[cur].parent != ROOT {
                if !disjoint(g.colours(nodes[cur].edge as usize), colours) {
                    clash = true;
                    break;
                }
                cur = nodes[cur].parent;
            }
            if clash {
                continue;
            }
            match m.mate_of_b(b) {
                None => return Some(finish(g, m, &nodes, head, a, b, e)),
                Some(a2) => {
                    if depth + 2 > max_edges || seen_a[a2] {
                        continue;
                    }
                    seen_b[b] = true;
                    seen_a[a2] = true;
                    nodes.push(Node {
                        a: a2,
                        parent: head,
                        edge: e,
                        depth: depth + 1,
                    });
                }
            }
        }
        head += 1;
    }
    None
}

fn finish(
    g: &ColouredBipartiteGraph,
    m: &RainbowMatching,
    nodes: &[Node],
    last: usize,
    a: usize,
    b: usize,
    e: u32,
) -> RainbowMatching {
    let mut new_edges = vec![(a, b, g.colours(e as usize).to_vec())];
    let mut drop_a = Vec::new();
    let mut cur = last;
    while nodes[cur].parent != ROOT {
        let node = &nodes[cur];
        drop_a.push(node.a);
        let (pa, pb) = g.ends(node.edge as usize);
        debug_assert_eq!(pa, nodes[node.parent].a);
        new_edges.push((pa, pb, g.colours(node.edge as usize).to_vec()));
        cur = node.parent;
    }
    apply(m, &drop_a, &new_edges)
}

/// The five-stage scheme: new edges `a b1` from `stages[0]`, `a1 b` from
/// `stages[1]`, `a2 b3` from `stages[2]`, `a3 b2` from `stages[3]` and the
/// joining edge `a4 b4` from `stages[4]`, giving the sequence
/// `a, b1, a2, b3, a4, b4, a3, b2, a1, b`. Tries every pair of uncovered
/// vertices `a`, `b`.
pub fn augment_staged(
    stages: [&ColouredBipartiteGraph; 5],
    m: &RainbowMatching,
    blocked: &[bool],
) -> Option<RainbowMatching> {
    let rule = Admissible { m, blocked };
    let [g1, g2, g3, g4, g5] = stages;
    let free_a: Vec<usize> = m.free_a().collect();
    let free_b: Vec<usize> = m.free_b().collect();

    for &a in &free_a {
        // a4 -> (b3, a2, b1) with new edges a b1 and a2 b3
        let mut a2_from: HashMap<usize, (usize, u32)> = HashMap::new();
        for &e in g1.edges_at_a(a) {
            let (_, b1) = g1.ends(e as usize);
            if let Some(a2) = m.mate_of_b(b1) {
                if rule.edge_ok(g1.colours(e as usize)) {
                    a2_from.entry(a2).or_insert((b1, e));
                }
            }
        }
        let mut a4_from: HashMap<usize, (usize, usize, u32)> = HashMap::new();
        for &a2 in a2_from.keys() {
            for &e in g3.edges_at_a(a2) {
                let (_, b3) = g3.ends(e as usize);
                if m.mate_of_a(a2) == Some(b3) || !rule.edge_ok(g3.colours(e as usize)) {
                    continue;
                }
                if let Some(a4) = m.mate_of_b(b3) {
                    a4_from.entry(a4).or_insert((b3, a2, e));
                }
            }
        }
        if a4_from.is_empty() {
            continue;
        }
        for &b in &free_b {
            // b4 -> (a3, b2, a1) with new edges a1 b and a3 b2
            let mut b2_from: HashMap<usize, (usize, u32)> = HashMap::new();
            for &e in g2.edges_at_b(b) {
                let (a1, _) = g2.ends(e as usize);
                if let Some(b2) = m.mate_of_a(a1) {
                    if rule.edge_ok(g2.colours(e as usize)) {
                        b2_from.entry(b2).or_insert((a1, e));
                    }
                }
            }
            let mut b4_from: HashMap<usize, (usize, usize, u32)> = HashMap::new();
            for &b2 in b2_from.keys() {
                for &e in g4.edges_at_b(b2) {
                    let (a3, _) = g4.ends(e as usize);
                    if m.mate_of_b(b2) == Some(a3) || !rule.edge_ok(g4.colours(e as usize)) {
                        continue;
                    }
                    if let Some(b4) = m.mate_of_a(a3) {
                        b4_from.entry(b4).or_insert((a3, b2, e));
                    }
                }
            }
            for (&a4, &(b3, a2, e3)) in &a4_from {
                for &e5 in g5.edges_at_a(a4) {
                    let (_, b4) = g5.ends(e5 as usize);
                    let Some(&(a3, b2, e4)) = b4_from.get(&b4) else { continue };
                    if !rule.edge_ok(g5.colours(e5 as usize)) {
                        continue;
                    }
                    let (b1, e1) = a2_from[&a2];
                    let (a1, e2) = b2_from[&b2];
                    let mut av = [a, a2, a4, a3, a1];
                    let mut bv = [b1, b3, b4, b2, b];
                    av.sort_unstable();
                    bv.sort_unstable();
                    if av.windows(2).any(|w| w[0] == w[1]) || bv.windows(2).any(|w| w[0] == w[1]) {
                        continue;
                    }
                    let new_edges = vec![
                        (a, b1, g1.colours(e1 as usize).to_vec()),
                        (a1, b, g2.colours(e2 as usize).to_vec()),
                        (a2, b3, g3.colours(e3 as usize).to_vec()),
                        (a3, b2, g4.colours(e4 as usize).to_vec()),
                        (a4, b4, g5.colours(e5 as usize).to_vec()),
                    ];
                    let pairwise = (0..5).all(|i| ((i + 1)..5).all(|j| disjoint(&new_edges[i].2, &new_edges[j].2)));
                    if pairwise {
                        return Some(apply(m, &[a2, a4, a3, a1], &new_edges));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A-vertices a, a1, a2, a3, a4 = 0..5 and B-vertices b, b1, b2, b3, b4 = 0..5,
    /// matched b1 a2, b3 a4, b4 a3, b2 a1, with one new edge per stage graph.
    fn staged_fixture() -> (Vec<ColouredBipartiteGraph>, RainbowMatching) {
        let (a, a1, a2, a3, a4) = (0, 1, 2, 3, 4);
        let (b, b1, b2, b3, b4) = (0, 1, 2, 3, 4);
        let colours = 18;
        let mut m = RainbowMatching::new(5, 5, colours);
        m.add(a2, b1, &[0, 1]).unwrap();
        m.add(a4, b3, &[2, 3]).unwrap();
        m.add(a3, b4, &[4, 5]).unwrap();
        m.add(a1, b2, &[6, 7]).unwrap();
        let mut stages: Vec<ColouredBipartiteGraph> =
            (0..5).map(|_| ColouredBipartiteGraph::new(5, 5, 2, colours)).collect();
        stages[0].add_edge(a, b1, &[8, 9]).unwrap();
        stages[1].add_edge(a1, b, &[10, 11]).unwrap();
        stages[2].add_edge(a2, b3, &[12, 13]).unwrap();
        stages[3].add_edge(a3, b2, &[14, 15]).unwrap();
        stages[4].add_edge(a4, b4, &[16, 17]).unwrap();
        (stages, m)
    }

    #[test]
    fn staged_scheme_on_the_ten_vertex_fixture() {
        let (stages, m) = staged_fixture();
        let out = augment_staged([&stages[0], &stages[1], &stages[2], &stages[3], &stages[4]], &m, &[]).unwrap();
        assert_eq!(out.len(), m.len() + 1);
        assert!(out.check_invariants());
        assert!(out.is_perfect());
        let mut pairs: Vec<(usize, usize)> = out.edges().iter().map(|e| (e.a, e.b)).collect();
        pairs.sort_unstable();
        assert_eq!(pairs, vec![(0, 1), (1, 0), (2, 3), (3, 2), (4, 4)]);
    }

    #[test]
    fn bfs_finds_the_same_sequence_at_depth_ten() {
        let (stages, m) = staged_fixture();
        let mut union = ColouredBipartiteGraph::new(5, 5, 2, 18);
        for s in &stages {
            for e in 0..s.num_edges() {
                let (a, b) = s.ends(e);
                union.add_edge(a, b, s.colours(e)).unwrap();
            }
        }
        assert!(augment(&union, &m, &[], 8).is_none());
        let out = augment(&union, &m, &[], 10).unwrap();
        assert_eq!(out.len(), 5);
        assert!(out.check_invariants());
    }

    #[test]
    fn blocked_colour_stops_the_sequence() {
        let (stages, m) = staged_fixture();
        let mut blocked = vec![false; 18];
        blocked[16] = true;
        assert!(augment_staged([&stages[0], &stages[1], &stages[2], &stages[3], &stages[4]], &m, &blocked).is_none());
    }

    #[test]
    fn shortest_sequence_is_a_single_edge() {
        let mut g = ColouredBipartiteGraph::new(2, 2, 2, 8);
        g.add_edge(0, 0, &[0, 1]).unwrap();
        g.add_edge(1, 1, &[2, 3]).unwrap();
        let mut m = RainbowMatching::for_graph(&g);
        m.add(0, 0, &[0, 1]).unwrap();
        let out = augment(&g, &m, &[], 10).unwrap();
        assert_eq!(out.len(), 2);
        // a perfect matching has nothing to augment
        assert!(augment(&g, &out, &[], 10).is_none());
        // the free edge's colour is blocked
        let mut blocked = vec![false; 8];
        blocked[3] = true;
        assert!(augment(&g, &m, &blocked, 10).is_none());
    }

    #[test]
    fn new_edges_avoid_matching_colours() {
        // a0-b1 is free in vertices but reuses colour 1 of the matched edge a1-b0
        let mut g = ColouredBipartiteGraph::new(2, 2, 2, 8);
        g.add_edge(0, 1, &[1, 4]).unwrap();
        let mut m = RainbowMatching::new(2, 2, 8);
        m.add(1, 0, &[0, 1]).unwrap();
        assert!(augment(&g, &m, &[], 10).is_none());
    }
}
