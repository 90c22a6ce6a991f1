//! Channel counts and the compression planner.

mod compress;
mod curve;
mod depth;

pub use compress::{
    greedy_compress, greedy_compress_strict, probability_floor, reach_index, reach_threshold,
    CompressionPlan, Section,
};
pub use curve::{sweep_curve, CurvePoint};
pub use depth::{
    appendix_a_depth, appendix_b_depth, appendix_b_min_success, improved1_depth,
    improved1_min_fidelity, AccuracyModel, ResourceKind,
};
