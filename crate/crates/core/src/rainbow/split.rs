//! Pipeline knobs and the random split of the colours into six labelled classes.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::ColouredBipartiteGraph;
use crate::error::{QueensError, Result};

/// How an augmenting sequence is searched for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AugmentStrategy {
    /// alternating breadth-first search up to the depth bound
    Bfs,
    /// the fixed five-stage scheme, then breadth-first search if it finds nothing
    Staged,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub alpha: f64,
    pub epsilon: f64,
    /// colour fold; 2 for chessboards
    pub t: usize,
    pub nibble_restarts: usize,
    /// maximum number of vertices in an augmenting sequence
    pub depth_bound: usize,
    /// full restarts of sparsify, split, nibble and augment
    pub restarts: usize,
    pub strategy: AugmentStrategy,
    pub seed: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            alpha: 0.1,
            epsilon: 0.01,
            t: 2,
            nibble_restarts: 20,
            depth_bound: 10,
            restarts: 50,
            strategy: AugmentStrategy::Bfs,
            seed: 0,
        }
    }
}

impl PipelineParams {
    /// `p_0 = 1 - alpha/t`, then `p_1..p_5 = alpha/(5t)`.
    pub fn label_probabilities(&self) -> [f64; 6] {
        let t = self.t as f64;
        let side = self.alpha / (5.0 * t);
        [1.0 - self.alpha / t, side, side, side, side, side]
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        if self.t == 0 {
            return Err(QueensError::Precondition("colour fold t must be positive".into()));
        }
        if !self.label_probabilities().iter().all(|&p| ok(p)) || !self.alpha.is_finite() {
            return Err(QueensError::Precondition(format!(
                "alpha = {} gives label probabilities outside [0, 1]",
                self.alpha
            )));
        }
        if !ok(self.epsilon) {
            return Err(QueensError::Precondition(format!("epsilon = {} is not in [0, 1]", self.epsilon)));
        }
        if self.depth_bound < 2 {
            return Err(QueensError::Precondition("depth bound must allow at least one edge".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ColourSplit {
    /// label in `0..6` of every colour
    pub labels: Vec<u8>,
    /// `parts[i]` holds the edges whose colours all carry label `i`
    pub parts: Vec<ColouredBipartiteGraph>,
    /// parent edge of each edge of each part
    pub origin: Vec<Vec<usize>>,
}

impl ColourSplit {
    /// Label shared by all colours of parent edge `colours`, if any.
    pub fn label_of(&self, colours: &[u32]) -> Option<u8> {
        let first = self.labels[*colours.first()? as usize];
        colours.iter().all(|&c| self.labels[c as usize] == first).then_some(first)
    }
}

/// Labels every colour independently; edges with mixed labels are dropped.
pub fn colour_split<R: Rng>(g: &ColouredBipartiteGraph, params: &PipelineParams, rng: &mut R) -> Result<ColourSplit> {
    params.validate()?;
    let probs = params.label_probabilities();
    let labels: Vec<u8> = (0..g.num_colours())
        .map(|_| {
            let mut u: f64 = rng.gen();
            for (i, &p) in probs.iter().enumerate().skip(1) {
                if u < p {
                    return i as u8;
                }
                u -= p;
            }
            0
        })
        .collect();
    let mut parts: Vec<ColouredBipartiteGraph> = (0..6).map(|_| g.empty_like()).collect();
    let mut origin = vec![Vec::new(); 6];
    let mut split = ColourSplit {
        labels,
        parts: Vec::new(),
        origin: Vec::new(),
    };
    for e in 0..g.num_edges() {
        if let Some(i) = split.label_of(g.colours(e)) {
            let (a, b) = g.ends(e);
            parts[i as usize].add_edge(a, b, g.colours(e))?;
            origin[i as usize].push(e);
        }
    }
    split.parts = parts;
    split.origin = origin;
    Ok(split)
}
