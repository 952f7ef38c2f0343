//! Stochastic labeling mutations, deterministic repairs and the boundary
//! smoothing applied before every evaluation.

mod ops;
mod region;
mod repairs;
mod smooth;

pub use ops::{
    apply_mutation, chart_propagation, chart_removal, directional_path, directional_walk, orthogonal_directions,
    propagation_segment, random_mutation, sample_mutation, MutationKind, MutationSpec,
};
pub use region::grow_region;
pub use repairs::{repair, repair_high_valency_corner, repair_opposite_boundary, BandSide, REPAIR_SIZES};
pub use smooth::{smooth_boundaries, smooth_boundaries_counted, MAX_SMOOTHING_ITERATIONS};
