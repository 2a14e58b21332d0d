//! Completing partial configurations through rainbow matchings in coloured
//! bipartite graphs.

pub mod augment;
pub mod graph;
pub mod hypergraph;
pub mod pipeline;
pub mod regularize;
pub mod split;

pub use augment::{augment, augment_staged};
pub use graph::{board_to_graph, check_proper_linear, BoardGraph, ColouredBipartiteGraph, MatchEdge, RainbowMatching};
pub use hypergraph::{conflict_hypergraph, nibble_matching, Hypergraph, NibbleResult};
pub use pipeline::{complete_via_pipeline, PhaseRecord, PipelineOutcome, PipelineReport};
pub use regularize::{common_neighbour_floor, sparsify, weight_shift_regularize, Regularized, ShiftWeight, Sparsified};
pub use split::{colour_split, AugmentStrategy, ColourSplit, PipelineParams};
