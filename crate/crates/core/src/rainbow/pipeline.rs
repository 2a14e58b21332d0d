//! The randomized completion pipeline with per-phase diagnostics.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::augment::{augment, augment_staged};
use super::graph::{board_to_graph, ColouredBipartiteGraph, RainbowMatching};
use super::hypergraph::nibble_matching;
use super::regularize::{common_neighbour_floor, sparsify, weight_shift_regularize};
use super::split::{colour_split, AugmentStrategy, PipelineParams};
use crate::board::{is_valid_partial, PartialConfig};
use crate::constructions::regularize_weighting;
use crate::error::{QueensError, Result};

/// One diagnostics record; serialised as a single JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub phase: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart: Option<usize>,
    pub metrics: Map<String, Value>,
}

impl PhaseRecord {
    fn new(phase: &str, restart: Option<usize>, metrics: Value) -> Self {
        let Value::Object(metrics) = metrics else {
            unreachable!("metrics are built as objects")
        };
        PhaseRecord {
            phase: phase.to_string(),
            restart,
            metrics,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineOutcome {
    Completed(PartialConfig),
    HeuristicFailure,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub outcome: PipelineOutcome,
    pub restarts_used: usize,
    pub records: Vec<PhaseRecord>,
}

impl PipelineReport {
    pub fn completion(&self) -> Option<&PartialConfig> {
        match &self.outcome {
            PipelineOutcome::Completed(c) => Some(c),
            PipelineOutcome::HeuristicFailure => None,
        }
    }
}

/// Where augmenting edges are drawn from, in the order tried.
const POOLS: [&str; 3] = ["split", "sparsified", "full"];

/// Completes `cfg` by a rainbow matching in its board graph: square weights
/// restricted to the graph, regularized by weight shifts, then per restart a
/// sparsification, a colour split, a random greedy matching on class 0 and
/// augmentations. Augmenting edges come from classes 1 to 5 first, and from
/// the sparsified and full graphs when those run dry. Every completion is
/// re-validated before it is returned.
pub fn complete_via_pipeline<R: Rng>(
    cfg: &PartialConfig,
    params: &PipelineParams,
    rng: &mut R,
) -> Result<PipelineReport> {
    params.validate()?;
    let mut records = Vec::new();
    if cfg.is_complete() {
        return Ok(PipelineReport {
            outcome: PipelineOutcome::Completed(cfg.clone()),
            restarts_used: 0,
            records,
        });
    }
    let n = cfg.n();
    let bg = board_to_graph(cfg);
    let g = &bg.graph;
    let side = g.a_len();
    let square_weights = regularize_weighting(n)?;
    let w0: Vec<f64> = (0..g.num_edges())
        .map(|e| {
            let (a, b) = g.ends(e);
            square_weights.quarters(bg.square(a, b)) as f64 / 4.0
        })
        .collect();

    let c = common_neighbour_floor(g);
    let (weights, mu, regular) = match weight_shift_regularize(g, &w0, c) {
        Ok(r) if c > 0 && c != usize::MAX => {
            let mu = 2.0 * r.max_deviation / c as f64;
            if r.weights.iter().all(|&x| x >= 0.0 && x <= 1.0 + mu) {
                records.push(PhaseRecord::new(
                    "regularize",
                    None,
                    json!({"c": c, "d_prime": r.max_deviation, "mu": mu, "shifts": r.shifts,
                           "max_drift": r.max_drift, "mean_degree": r.mean_a, "fallback": false}),
                ));
                (r.weights, mu, true)
            } else {
                (w0.clone(), 0.0, false)
            }
        }
        _ => (w0.clone(), 0.0, false),
    };
    if !regular {
        records.push(PhaseRecord::new(
            "regularize",
            None,
            json!({"c": if c == usize::MAX { Value::Null } else { json!(c) }, "fallback": true}),
        ));
    }

    let t = params.t as f64;
    let no_extra_blocks = vec![false; g.num_colours()];
    for restart in 0..params.restarts {
        let h = sparsify(g, &weights, mu, rng)?;
        let d = weights.iter().sum::<f64>() / side.max(1) as f64 / (1.0 + mu);
        records.push(PhaseRecord::new(
            "sparsify",
            Some(restart),
            json!({"edges": h.graph.num_edges(), "d": d, "max_degree_deviation": h.max_degree_deviation,
                   "within_2_eps_d": h.max_degree_deviation <= 2.0 * params.epsilon * d}),
        ));

        let split = colour_split(&h.graph, params, rng)?;
        let part_edges: Vec<usize> = split.parts.iter().map(|p| p.num_edges()).collect();
        records.push(PhaseRecord::new("split", Some(restart), json!({"edges": part_edges})));

        let nib = nibble_matching(&split.parts[0], 1.0 - params.epsilon, params.nibble_restarts, rng)?;
        records.push(PhaseRecord::new(
            "nibble",
            Some(restart),
            json!({"size": nib.matching.len(), "coverage": nib.coverage, "restarts": nib.restarts_used}),
        ));

        let side_union = union(&split.parts[1..]);
        let pools: [&ColouredBipartiteGraph; 3] = [&side_union, &h.graph, g];
        let mut m = nib.matching;
        let mut per_pool = [0usize; 3];
        let mut augmentations = 0usize;
        while m.len() < side {
            let mut next = None;
            if params.strategy == AugmentStrategy::Staged {
                let s = &split.parts;
                next = augment_staged([&s[1], &s[2], &s[3], &s[4], &s[5]], &m, &no_extra_blocks).map(|x| (x, 0));
            }
            for (i, pool) in pools.iter().enumerate() {
                if next.is_some() {
                    break;
                }
                next = augment(pool, &m, &no_extra_blocks, params.depth_bound).map(|x| (x, i));
            }
            let Some((bigger, pool)) = next else { break };
            debug_assert_eq!(bigger.len(), m.len() + 1);
            m = bigger;
            per_pool[pool] += 1;
            augmentations += 1;
        }
        let side_colours = side_class_colours(&m, &split.labels);
        records.push(PhaseRecord::new(
            "augment",
            Some(restart),
            json!({"augmentations": augmentations,
                   "by_pool": POOLS.iter().zip(per_pool).map(|(k, v)| (k.to_string(), json!(v))).collect::<Map<_, _>>(),
                   "size": m.len(), "target": side,
                   "side_class_colours": side_colours, "budget": 5.0 * t * augmentations as f64,
                   "success": m.len() == side}),
        ));
        if m.len() == side {
            let completion = bg.completion(cfg, &m)?;
            if !completion.is_complete() || !is_valid_partial(completion.queens(), n)? || !cfg.is_subset_of(&completion) {
                return Err(QueensError::Numerical("pipeline produced an invalid board".into()));
            }
            records.push(PhaseRecord::new("summary", None, json!({"success": true, "restarts": restart + 1})));
            return Ok(PipelineReport {
                outcome: PipelineOutcome::Completed(completion),
                restarts_used: restart + 1,
                records,
            });
        }
    }
    records.push(PhaseRecord::new("summary", None, json!({"success": false, "restarts": params.restarts})));
    Ok(PipelineReport {
        outcome: PipelineOutcome::HeuristicFailure,
        restarts_used: params.restarts,
        records,
    })
}

fn union(parts: &[ColouredBipartiteGraph]) -> ColouredBipartiteGraph {
    let mut u = parts[0].empty_like();
    for p in parts {
        for e in 0..p.num_edges() {
            let (a, b) = p.ends(e);
            u.add_edge(a, b, p.colours(e)).expect("parts share vertices and colours");
        }
    }
    u
}

/// Colours on matching edges outside class 0.
fn side_class_colours(m: &RainbowMatching, labels: &[u8]) -> usize {
    m.edges()
        .iter()
        .flat_map(|e| e.colours.iter())
        .filter(|&&c| labels[c as usize] != 0)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Square;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_input_is_returned_unchanged() {
        let q = PartialConfig::new(
            4,
            [Square::new(1, 2), Square::new(2, 4), Square::new(3, 1), Square::new(4, 3)],
        )
        .unwrap();
        let r = complete_via_pipeline(&q, &PipelineParams::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(r.completion(), Some(&q));
    }

    #[test]
    fn empty_board_of_size_forty() {
        let cfg = PartialConfig::empty(40).unwrap();
        let r = complete_via_pipeline(&cfg, &PipelineParams::default(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let c = r.completion().expect("pipeline completes an empty 40x40 board");
        assert!(c.is_complete());
        assert!(r.records.iter().all(|rec| !rec.to_json_line().contains('\n')));
    }

    #[test]
    fn dead_board_fails_cleanly() {
        // n = 3 has no solution at all
        let cfg = PartialConfig::empty(3).unwrap();
        let params = PipelineParams { restarts: 3, ..Default::default() };
        let r = complete_via_pipeline(&cfg, &params, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(r.outcome, PipelineOutcome::HeuristicFailure);
    }
}
