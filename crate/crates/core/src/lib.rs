//! Partial n-queens configurations: exact completion, LP certificates of
//! incompletability, explicit constructions and a randomized rainbow-matching
//! completion pipeline.

pub mod board;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod lp;
pub mod notation;
pub mod rainbow;
pub mod threshold;

pub use board::{
    is_valid_partial, line_squares, lines_through, unattacked, LineId, LineOccupancy,
    PartialConfig, Square, Symmetry,
};
pub use error::{QueensError, Result};
pub use constructions::{
    central_embedding, central_embedding_any, central_slack, hat_weighting, near_diagonal_config,
    regularize_weighting, third_construction, CentralInstance, SquareWeighting,
};
pub use exact::{complete, count_completions, enumerate_all, min_embedding, Completion, SolveBudget};
pub use lp::{
    certify_incompletable, covers, max_fractional_completion, min_cover_value, verify_certificate,
    weighting_value, CertificateDocument, FractionalCompletion, LineWeighting, LpOutcome,
};
pub use rainbow::{
    board_to_graph, complete_via_pipeline, ColouredBipartiteGraph, PipelineOutcome, PipelineParams,
    RainbowMatching,
};
pub use threshold::{qc_exhaustive, qc_sampled, qc_star_probe, ProbeReport, QcScanRow};
