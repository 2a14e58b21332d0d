//! Bipartite graphs whose edges carry sets of `t` colours, and rainbow matchings in them.

use std::collections::HashSet;

use crate::board::{unattacked, LineId, PartialConfig, Square};
use crate::error::{QueensError, Result};

/// Vertices of part A are `0..a_len`, of part B `0..b_len`; colours are `0..num_colours`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredBipartiteGraph {
    a_len: usize,
    b_len: usize,
    t: usize,
    num_colours: usize,
    ends: Vec<(u32, u32)>,
    /// `t` colours per edge, flattened
    colours: Vec<u32>,
    adj_a: Vec<Vec<u32>>,
    adj_b: Vec<Vec<u32>>,
}

impl ColouredBipartiteGraph {
    pub fn new(a_len: usize, b_len: usize, t: usize, num_colours: usize) -> Self {
        ColouredBipartiteGraph {
            a_len,
            b_len,
            t,
            num_colours,
            ends: Vec::new(),
            colours: Vec::new(),
            adj_a: vec![Vec::new(); a_len],
            adj_b: vec![Vec::new(); b_len],
        }
    }

    /// An edgeless graph on the same vertices and colours.
    pub fn empty_like(&self) -> Self {
        Self::new(self.a_len, self.b_len, self.t, self.num_colours)
    }

    pub fn add_edge(&mut self, a: usize, b: usize, colours: &[u32]) -> Result<usize> {
        if a >= self.a_len || b >= self.b_len {
            return Err(QueensError::Precondition(format!(
                "edge ({a}, {b}) outside parts of sizes {} and {}",
                self.a_len, self.b_len
            )));
        }
        if colours.len() != self.t || colours.iter().any(|&c| c as usize >= self.num_colours) || has_repeat(colours) {
            return Err(QueensError::Precondition(format!(
                "edge ({a}, {b}) needs {} distinct colours below {}, got {colours:?}",
                self.t, self.num_colours
            )));
        }
        let e = self.ends.len();
        self.ends.push((a as u32, b as u32));
        self.colours.extend_from_slice(colours);
        self.adj_a[a].push(e as u32);
        self.adj_b[b].push(e as u32);
        Ok(e)
    }

    /// The graph on the same vertices keeping only the edges for which `keep` holds.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        let mut g = self.empty_like();
        for e in 0..self.num_edges() {
            if keep(e) {
                let (a, b) = self.ends(e);
                g.add_edge(a, b, self.colours(e)).expect("edge is valid in the parent");
            }
        }
        g
    }

    pub fn a_len(&self) -> usize {
        self.a_len
    }

    pub fn b_len(&self) -> usize {
        self.b_len
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_colours(&self) -> usize {
        self.num_colours
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        let (a, b) = self.ends[e];
        (a as usize, b as usize)
    }

    pub fn colours(&self, e: usize) -> &[u32] {
        &self.colours[e * self.t..(e + 1) * self.t]
    }

    /// Edge ids at A-vertex `a`.
    pub fn edges_at_a(&self, a: usize) -> &[u32] {
        &self.adj_a[a]
    }

    /// Edge ids at B-vertex `b`.
    pub fn edges_at_b(&self, b: usize) -> &[u32] {
        &self.adj_b[b]
    }

    pub fn degree_a(&self, a: usize) -> usize {
        self.adj_a[a].len()
    }

    pub fn degree_b(&self, b: usize) -> usize {
        self.adj_b[b].len()
    }
}

fn has_repeat(colours: &[u32]) -> bool {
    (0..colours.len()).any(|i| colours[i + 1..].contains(&colours[i]))
}

/// Proper: edges at a common vertex have disjoint colour sets.
/// Linear: every pair of colours appears together on at most one edge.
pub fn check_proper_linear(g: &ColouredBipartiteGraph) -> bool {
    let mut seen = vec![usize::MAX; g.num_colours()];
    let mut stamp = 0usize;
    let adjacency = (0..g.a_len())
        .map(|a| g.edges_at_a(a))
        .chain((0..g.b_len()).map(|b| g.edges_at_b(b)));
    for edges in adjacency {
        for &e in edges {
            for &c in g.colours(e as usize) {
                if seen[c as usize] == stamp {
                    return false;
                }
                seen[c as usize] = stamp;
            }
        }
        stamp += 1;
    }
    let mut pairs = HashSet::new();
    for e in 0..g.num_edges() {
        let cs = g.colours(e);
        for i in 0..cs.len() {
            for j in (i + 1)..cs.len() {
                let pair = (cs[i].min(cs[j]), cs[i].max(cs[j]));
                if !pairs.insert(pair) {
                    return false;
                }
            }
        }
    }
    true
}

/// The chessboard as a 2-fold coloured bipartite graph: empty rows against
/// empty columns, an edge per unattacked square coloured by its two diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoardGraph {
    pub graph: ColouredBipartiteGraph,
    /// board row of each A-vertex
    pub rows: Vec<usize>,
    /// board column of each B-vertex
    pub cols: Vec<usize>,
    pub n: usize,
}

impl BoardGraph {
    pub fn square(&self, a: usize, b: usize) -> Square {
        Square::new(self.rows[a], self.cols[b])
    }

    /// Colour id of a diagonal: its position among the `4n - 2` diagonals.
    pub fn colour_of(line: LineId, n: usize) -> u32 {
        debug_assert!(line.is_diagonal());
        (line.index(n) - 2 * n) as u32
    }

    /// The configuration `cfg` plus one queen per matching edge, validated.
    pub fn completion(&self, cfg: &PartialConfig, m: &RainbowMatching) -> Result<PartialConfig> {
        let extra = m.edges().iter().map(|e| self.square(e.a, e.b));
        PartialConfig::new(self.n, cfg.queens().iter().copied().chain(extra))
    }
}

pub fn board_to_graph(cfg: &PartialConfig) -> BoardGraph {
    let n = cfg.n();
    let mut row_used = vec![false; n + 1];
    let mut col_used = vec![false; n + 1];
    for q in cfg.queens() {
        row_used[q.row] = true;
        col_used[q.col] = true;
    }
    let rows: Vec<usize> = (1..=n).filter(|&i| !row_used[i]).collect();
    let cols: Vec<usize> = (1..=n).filter(|&j| !col_used[j]).collect();
    let mut a_of = vec![usize::MAX; n + 1];
    let mut b_of = vec![usize::MAX; n + 1];
    rows.iter().enumerate().for_each(|(a, &r)| a_of[r] = a);
    cols.iter().enumerate().for_each(|(b, &c)| b_of[c] = b);
    let mut graph = ColouredBipartiteGraph::new(rows.len(), cols.len(), 2, 4 * n - 2);
    for s in unattacked(cfg) {
        let colours = [
            BoardGraph::colour_of(LineId::DiagPlus(s.plus_diagonal(n)), n),
            BoardGraph::colour_of(LineId::DiagMinus(s.minus_diagonal()), n),
        ];
        graph
            .add_edge(a_of[s.row], b_of[s.col], &colours)
            .expect("unattacked squares lie in empty rows and columns");
    }
    BoardGraph {
        graph,
        rows,
        cols,
        n,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchEdge {
    pub a: usize,
    pub b: usize,
    pub colours: Vec<u32>,
}

/// A matching whose edges also have pairwise disjoint colour sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowMatching {
    edges: Vec<MatchEdge>,
    a_mate: Vec<Option<usize>>,
    b_mate: Vec<Option<usize>>,
    /// edge position holding each colour
    colour_used: Vec<Option<usize>>,
}

impl RainbowMatching {
    pub fn new(a_len: usize, b_len: usize, num_colours: usize) -> Self {
        RainbowMatching {
            edges: Vec::new(),
            a_mate: vec![None; a_len],
            b_mate: vec![None; b_len],
            colour_used: vec![None; num_colours],
        }
    }

    pub fn for_graph(g: &ColouredBipartiteGraph) -> Self {
        Self::new(g.a_len(), g.b_len(), g.num_colours())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[MatchEdge] {
        &self.edges
    }

    /// The B-vertex matched to `a`.
    pub fn mate_of_a(&self, a: usize) -> Option<usize> {
        self.a_mate[a].map(|e| self.edges[e].b)
    }

    /// The A-vertex matched to `b`.
    pub fn mate_of_b(&self, b: usize) -> Option<usize> {
        self.b_mate[b].map(|e| self.edges[e].a)
    }

    pub fn is_colour_used(&self, c: u32) -> bool {
        self.colour_used[c as usize].is_some()
    }

    pub fn can_add(&self, a: usize, b: usize, colours: &[u32]) -> bool {
        self.a_mate[a].is_none()
            && self.b_mate[b].is_none()
            && !has_repeat(colours)
            && colours.iter().all(|&c| !self.is_colour_used(c))
    }

    /// Adds an edge; fails if it would clash with the matching.
    pub fn add(&mut self, a: usize, b: usize, colours: &[u32]) -> Result<()> {
        if !self.can_add(a, b, colours) {
            return Err(QueensError::Precondition(format!(
                "edge ({a}, {b}) with colours {colours:?} clashes with the matching"
            )));
        }
        let pos = self.edges.len();
        self.a_mate[a] = Some(pos);
        self.b_mate[b] = Some(pos);
        for &c in colours {
            self.colour_used[c as usize] = Some(pos);
        }
        self.edges.push(MatchEdge {
            a,
            b,
            colours: colours.to_vec(),
        });
        Ok(())
    }

    /// Removes the edge at A-vertex `a`, if any.
    pub fn remove_at_a(&mut self, a: usize) -> Option<MatchEdge> {
        let pos = self.a_mate[a]?;
        let edge = self.edges.swap_remove(pos);
        self.a_mate[edge.a] = None;
        self.b_mate[edge.b] = None;
        for &c in &edge.colours {
            self.colour_used[c as usize] = None;
        }
        if pos < self.edges.len() {
            let moved = &self.edges[pos];
            self.a_mate[moved.a] = Some(pos);
            self.b_mate[moved.b] = Some(pos);
            for &c in &moved.colours {
                self.colour_used[c as usize] = Some(pos);
            }
        }
        Some(edge)
    }

    /// Recomputes every index from the edge list and checks both disjointness invariants.
    pub fn check_invariants(&self) -> bool {
        let mut a_seen = vec![false; self.a_mate.len()];
        let mut b_seen = vec![false; self.b_mate.len()];
        let mut c_seen = vec![false; self.colour_used.len()];
        for (pos, e) in self.edges.iter().enumerate() {
            if std::mem::replace(&mut a_seen[e.a], true) || std::mem::replace(&mut b_seen[e.b], true) {
                return false;
            }
            if self.a_mate[e.a] != Some(pos) || self.b_mate[e.b] != Some(pos) {
                return false;
            }
            for &c in &e.colours {
                if std::mem::replace(&mut c_seen[c as usize], true) || self.colour_used[c as usize] != Some(pos) {
                    return false;
                }
            }
        }
        let count = |v: &[Option<usize>]| v.iter().filter(|x| x.is_some()).count();
        count(&self.a_mate) == self.edges.len()
            && count(&self.b_mate) == self.edges.len()
            && count(&self.colour_used) == c_seen.iter().filter(|&&x| x).count()
    }

    pub fn free_a(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.a_mate.len()).filter(|&a| self.a_mate[a].is_none())
    }

    pub fn free_b(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.b_mate.len()).filter(|&b| self.b_mate[b].is_none())
    }

    /// Whether every vertex of the smaller part is matched.
    pub fn is_perfect(&self) -> bool {
        self.edges.len() == self.a_mate.len().min(self.b_mate.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_completions, SolveBudget};

    #[test]
    fn empty_four_board() {
        let bg = board_to_graph(&PartialConfig::empty(4).unwrap());
        assert_eq!(bg.graph.num_edges(), 16);
        assert_eq!(bg.graph.t(), 2);
        assert!(check_proper_linear(&bg.graph));
    }

    #[test]
    fn full_board_gives_empty_graph() {
        let q = PartialConfig::new(
            4,
            [Square::new(1, 2), Square::new(2, 4), Square::new(3, 1), Square::new(4, 3)],
        )
        .unwrap();
        let bg = board_to_graph(&q);
        assert_eq!((bg.graph.a_len(), bg.graph.b_len(), bg.graph.num_edges()), (0, 0, 0));
    }

    #[test]
    fn nauck_perfect_matchings_are_completions() {
        let cfg = PartialConfig::new(8, [Square::new(4, 2), Square::new(5, 4)]).unwrap();
        let bg = board_to_graph(&cfg);
        assert_eq!((bg.graph.a_len(), bg.graph.b_len()), (6, 6));
        assert!(check_proper_linear(&bg.graph));
        // count perfect rainbow matchings by brute force over edge subsets per row
        fn extend(g: &ColouredBipartiteGraph, a: usize, m: &mut RainbowMatching, found: &mut u64) {
            if a == g.a_len() {
                *found += 1;
                return;
            }
            for &e in g.edges_at_a(a) {
                let (_, b) = g.ends(e as usize);
                if m.can_add(a, b, g.colours(e as usize)) {
                    m.add(a, b, g.colours(e as usize)).unwrap();
                    extend(g, a + 1, m, found);
                    m.remove_at_a(a);
                }
            }
        }
        let mut found = 0;
        extend(&bg.graph, 0, &mut RainbowMatching::for_graph(&bg.graph), &mut found);
        let exact = count_completions(&cfg, SolveBudget::UNLIMITED).unwrap().count;
        assert_eq!(found, exact);
    }

    #[test]
    fn improper_and_nonlinear_graphs_are_rejected() {
        let mut g = ColouredBipartiteGraph::new(2, 2, 2, 6);
        g.add_edge(0, 0, &[0, 1]).unwrap();
        g.add_edge(0, 1, &[1, 2]).unwrap();
        assert!(!check_proper_linear(&g));

        let mut h = ColouredBipartiteGraph::new(2, 2, 2, 6);
        h.add_edge(0, 0, &[0, 1]).unwrap();
        h.add_edge(1, 1, &[0, 1]).unwrap();
        assert!(!check_proper_linear(&h));
    }

    #[test]
    fn matching_bookkeeping() {
        let mut m = RainbowMatching::new(3, 3, 6);
        m.add(0, 0, &[0, 1]).unwrap();
        m.add(1, 1, &[2, 3]).unwrap();
        assert!(m.add(2, 2, &[3, 4]).is_err());
        assert!(m.add(1, 2, &[4, 5]).is_err());
        m.add(2, 2, &[4, 5]).unwrap();
        assert!(m.check_invariants());
        let removed = m.remove_at_a(0).unwrap();
        assert_eq!(removed.colours, vec![0, 1]);
        assert!(m.check_invariants());
        assert_eq!(m.mate_of_a(2), Some(2));
        assert_eq!(m.free_a().collect::<Vec<_>>(), vec![0]);
    }
}
