//! Equalising vertex totals of an edge weighting by pairwise shifts through
//! common neighbours, and sparsifying by the resulting weights.

use std::fmt::Debug;

use num::{BigRational, FromPrimitive, Num, Signed, Zero};
use rand::Rng;

use super::graph::ColouredBipartiteGraph;
use crate::error::{QueensError, Result};

/// Weights the shift can run on: exact rationals for checking, floats for the pipeline.
pub trait ShiftWeight: Num + Signed + FromPrimitive + Clone + PartialOrd + Debug {
    /// Deviation small enough to count as zero.
    fn negligible(&self) -> bool;
    /// Negligible relative to the magnitude `scale`.
    fn negligible_against(&self, scale: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl ShiftWeight for f64 {
    fn negligible(&self) -> bool {
        self.abs() <= 1e-9
    }
    fn negligible_against(&self, scale: &Self) -> bool {
        self.abs() <= 1e-9 * scale.abs().max(1.0)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl ShiftWeight for BigRational {
    fn negligible(&self) -> bool {
        self.is_zero()
    }
    fn negligible_against(&self, _: &Self) -> bool {
        self.is_zero()
    }
    fn to_f64(&self) -> f64 {
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
pub struct Regularized<W> {
    pub weights: Vec<W>,
    /// common vertex total of part A (equal to that of part B when the parts have equal size)
    pub mean_a: W,
    pub mean_b: W,
    pub shifts: usize,
    /// largest `|w(e) - w0(e)|`
    pub max_drift: W,
    /// largest initial `|total(v) - mean|` over both parts
    pub max_deviation: W,
}

/// Neighbour lists sorted by neighbour, as `(neighbour, edge)`.
fn sorted_neighbours(g: &ColouredBipartiteGraph, part_a: bool) -> Vec<Vec<(usize, usize)>> {
    let len = if part_a { g.a_len() } else { g.b_len() };
    (0..len)
        .map(|v| {
            let edges = if part_a { g.edges_at_a(v) } else { g.edges_at_b(v) };
            let mut list: Vec<(usize, usize)> = edges
                .iter()
                .map(|&e| {
                    let (a, b) = g.ends(e as usize);
                    (if part_a { b } else { a }, e as usize)
                })
                .collect();
            list.sort_unstable();
            list
        })
        .collect()
}

/// Pairs of edges `(u x, v x)` over the common neighbours `x` of `u` and `v`.
fn common(nu: &[(usize, usize)], nv: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < nu.len() && j < nv.len() {
        match nu[i].0.cmp(&nv[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((nu[i].1, nv[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Smallest number of common neighbours over all same-part vertex pairs
/// (`usize::MAX` when no part has two vertices).
pub fn common_neighbour_floor(g: &ColouredBipartiteGraph) -> usize {
    let mut floor = usize::MAX;
    for part_a in [true, false] {
        let (len, other) = if part_a { (g.a_len(), g.b_len()) } else { (g.b_len(), g.a_len()) };
        let words = other.div_ceil(64);
        let sets: Vec<Vec<u64>> = sorted_neighbours(g, part_a)
            .iter()
            .map(|list| {
                let mut bits = vec![0u64; words];
                list.iter().for_each(|&(x, _)| bits[x / 64] |= 1 << (x % 64));
                bits
            })
            .collect();
        for u in 0..len {
            for v in (u + 1)..len {
                let c = sets[u].iter().zip(&sets[v]).map(|(x, y)| (x & y).count_ones() as usize).sum();
                floor = floor.min(c);
            }
        }
    }
    floor
}

fn vertex_totals<W: ShiftWeight>(g: &ColouredBipartiteGraph, w: &[W], part_a: bool) -> Vec<W> {
    let len = if part_a { g.a_len() } else { g.b_len() };
    (0..len)
        .map(|v| {
            let edges = if part_a { g.edges_at_a(v) } else { g.edges_at_b(v) };
            edges.iter().fold(W::zero(), |acc, &e| acc + w[e as usize].clone())
        })
        .collect()
}

/// Shifts weight between same-part vertices through their common neighbours
/// until every vertex total equals its part's mean. Each shift moves
/// `min(excess, deficit)` from the heaviest to the lightest vertex, which
/// leaves the totals of the other part untouched and zeroes at least one deviation.
pub fn weight_shift_regularize<W: ShiftWeight>(
    g: &ColouredBipartiteGraph,
    w0: &[W],
    common_neighbour_floor: usize,
) -> Result<Regularized<W>> {
    if w0.len() != g.num_edges() {
        return Err(QueensError::Precondition(format!(
            "{} weights for {} edges",
            w0.len(),
            g.num_edges()
        )));
    }
    let mut w = w0.to_vec();
    let mut shifts = 0;
    let mut means = Vec::new();
    let mut max_deviation = W::zero();
    for part_a in [true, false] {
        let nbrs = sorted_neighbours(g, part_a);
        let mut totals = vertex_totals(g, &w, part_a);
        if totals.is_empty() {
            means.push(W::zero());
            continue;
        }
        let sum = totals.iter().fold(W::zero(), |acc, t| acc + t.clone());
        let mean = sum.clone() / W::from_usize(totals.len()).expect("part size fits");
        let mut dev: Vec<W> = totals.iter().map(|t| t.clone() - mean.clone()).collect();
        for d in &dev {
            if d.abs() > max_deviation {
                max_deviation = d.abs();
            }
        }
        for _ in 0..=2 * totals.len() {
            let (mut hi, mut lo) = (0, 0);
            for v in 1..dev.len() {
                if dev[v] > dev[hi] {
                    hi = v;
                }
                if dev[v] < dev[lo] {
                    lo = v;
                }
            }
            if dev[hi].negligible() && dev[lo].negligible() {
                break;
            }
            let excess = dev[hi].clone();
            let deficit = -dev[lo].clone();
            let eta = if excess < deficit { excess.clone() } else { deficit.clone() };
            let pairs = common(&nbrs[hi], &nbrs[lo]);
            if pairs.len() < common_neighbour_floor.max(1) {
                return Err(QueensError::Precondition(format!(
                    "vertices {hi} and {lo} of part {} share {} common neighbours, below the floor {}",
                    if part_a { 'A' } else { 'B' },
                    pairs.len(),
                    common_neighbour_floor.max(1)
                )));
            }
            let step = eta.clone() / W::from_usize(pairs.len()).expect("count fits");
            for &(eu, ev) in &pairs {
                w[eu] = w[eu].clone() - step.clone();
                w[ev] = w[ev].clone() + step.clone();
            }
            totals[hi] = totals[hi].clone() - eta.clone();
            totals[lo] = totals[lo].clone() + eta.clone();
            // pin the zeroed side exactly so float rounding cannot stall the loop
            if excess <= deficit {
                dev[hi] = W::zero();
                dev[lo] = dev[lo].clone() + eta;
            } else {
                dev[lo] = W::zero();
                dev[hi] = dev[hi].clone() - eta;
            }
            shifts += 1;
            let new_sum = totals.iter().fold(W::zero(), |acc, t| acc + t.clone());
            if !(new_sum - sum.clone()).negligible_against(&sum) {
                return Err(QueensError::Numerical("weight shift changed the part total".into()));
            }
        }
        if dev.iter().any(|d| !d.negligible()) {
            return Err(QueensError::Numerical("weight shift did not converge".into()));
        }
        means.push(mean);
    }
    let max_drift = w.iter().zip(w0).fold(W::zero(), |acc, (a, b)| {
        let d = (a.clone() - b.clone()).abs();
        if d > acc {
            d
        } else {
            acc
        }
    });
    let mean_b = means.pop().expect("two parts");
    let mean_a = means.pop().expect("two parts");
    Ok(Regularized {
        weights: w,
        mean_a,
        mean_b,
        shifts,
        max_drift,
        max_deviation,
    })
}

#[derive(Clone, Debug)]
pub struct Sparsified {
    pub graph: ColouredBipartiteGraph,
    /// parent edge of each kept edge
    pub origin: Vec<usize>,
    /// expected degree of each A-vertex, then each B-vertex
    pub expected_degree: Vec<f64>,
    /// largest `|degree - expected|` over all vertices
    pub max_degree_deviation: f64,
}

/// Keeps edge `e` independently with probability `w(e) / (1 + mu)`.
pub fn sparsify<R: Rng>(g: &ColouredBipartiteGraph, w: &[f64], mu: f64, rng: &mut R) -> Result<Sparsified> {
    if w.len() != g.num_edges() {
        return Err(QueensError::Precondition(format!(
            "{} weights for {} edges",
            w.len(),
            g.num_edges()
        )));
    }
    let probs: Vec<f64> = w.iter().map(|&x| x / (1.0 + mu)).collect();
    if let Some((e, p)) = probs
        .iter()
        .enumerate()
        .find(|(_, p)| !(-1e-12..=1.0 + 1e-12).contains(*p))
    {
        return Err(QueensError::Precondition(format!(
            "keep probability {p} of edge {e} lies outside [0, 1]"
        )));
    }
    let mut keep = vec![false; g.num_edges()];
    for (k, &p) in keep.iter_mut().zip(&probs) {
        *k = rng.gen::<f64>() < p;
    }
    let mut origin = Vec::new();
    let graph = g.filter_edges(|e| {
        if keep[e] {
            origin.push(e);
        }
        keep[e]
    });
    let mut expected_degree = vec![0.0; g.a_len() + g.b_len()];
    for (e, &p) in probs.iter().enumerate() {
        let (a, b) = g.ends(e);
        expected_degree[a] += p;
        expected_degree[g.a_len() + b] += p;
    }
    let degree = |v: usize| {
        if v < g.a_len() {
            graph.degree_a(v)
        } else {
            graph.degree_b(v - g.a_len())
        }
    };
    let max_degree_deviation = expected_degree
        .iter()
        .enumerate()
        .map(|(v, &d)| (degree(v) as f64 - d).abs())
        .fold(0.0, f64::max);
    Ok(Sparsified {
        graph,
        origin,
        expected_degree,
        max_degree_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{PartialConfig, Square};
    use crate::constructions::regularize_weighting;
    use crate::rainbow::graph::board_to_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn complete_bipartite(n: usize) -> ColouredBipartiteGraph {
        let mut g = ColouredBipartiteGraph::new(n, n, 2, 2 * n * n);
        for a in 0..n {
            for b in 0..n {
                let c = (2 * (a * n + b)) as u32;
                g.add_edge(a, b, &[c, c + 1]).unwrap();
            }
        }
        g
    }

    #[test]
    fn regular_input_is_untouched() {
        let g = complete_bipartite(3);
        let w0 = vec![r(1, 3); 9];
        let out = weight_shift_regularize(&g, &w0, 1).unwrap();
        assert_eq!(out.shifts, 0);
        assert_eq!(out.weights, w0);
    }

    #[test]
    fn two_by_two_needs_one_shift() {
        // edges (0,0), (0,1), (1,0), (1,1): A totals 1.2 and 0.8, B totals 1 and 1
        let g = complete_bipartite(2);
        let w0 = vec![r(6, 10), r(6, 10), r(4, 10), r(4, 10)];
        let out = weight_shift_regularize(&g, &w0, 2).unwrap();
        assert_eq!(out.shifts, 1);
        assert_eq!(out.weights, vec![r(1, 2); 4]);
        assert_eq!(out.max_deviation, r(1, 5));
        assert_eq!(out.max_drift, r(1, 10));
    }

    #[test]
    fn missing_common_neighbours_fail() {
        let mut g = ColouredBipartiteGraph::new(2, 2, 2, 4);
        g.add_edge(0, 0, &[0, 1]).unwrap();
        g.add_edge(1, 1, &[2, 3]).unwrap();
        assert!(weight_shift_regularize(&g, &[1.0, 0.5], 1).is_err());
    }

    #[test]
    fn board_weighting_drift_bound() {
        let cfg = PartialConfig::new(11, [Square::new(3, 5), Square::new(8, 2)]).unwrap();
        let bg = board_to_graph(&cfg);
        let sw = regularize_weighting(11).unwrap();
        let w0: Vec<BigRational> = (0..bg.graph.num_edges())
            .map(|e| {
                let (a, b) = bg.graph.ends(e);
                sw.value(bg.square(a, b))
            })
            .collect();
        let c = common_neighbour_floor(&bg.graph);
        let out = weight_shift_regularize(&bg.graph, &w0, c).unwrap();
        for part_a in [true, false] {
            let totals = vertex_totals(&bg.graph, &out.weights, part_a);
            let mean = if part_a { &out.mean_a } else { &out.mean_b };
            assert!(totals.iter().all(|t| t == mean));
        }
        let bound = out.max_deviation.clone() * r(2, 1) / r(c as i64, 1);
        assert!(out.max_drift <= bound);
    }

    #[test]
    fn sparsify_extremes() {
        let g = complete_bipartite(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sparsify(&g, &[0.0; 16], 0.3, &mut rng).unwrap().graph.num_edges(), 0);
        assert_eq!(sparsify(&g, &[1.3; 16], 0.3, &mut rng).unwrap().graph.num_edges(), 16);
        assert!(sparsify(&g, &[1.5; 16], 0.3, &mut rng).is_err());
        assert!(sparsify(&g, &[-0.5; 16], 0.3, &mut rng).is_err());
    }
}
