//! Reset-word synthesis with length certificates.

mod certificate;
mod combine;
mod greedy;
mod pipeline;
mod reduce;

pub use certificate::{bounds, BoundKind, ResetCertificate};
pub use combine::{combine_complete_primitive, Combination, MAX_HALVINGS};
pub use greedy::{greedy_compression, greedy_compression_from, greedy_extension, ExtensionRun};
pub use pipeline::{
    sink_completeness_length, small_rank_pipeline, small_rank_pipeline_refined, SmallRankRun, ACTION_CAP,
    EXACT_INDUCED_STATES,
};
pub use reduce::{
    check_factor_closed, reduce_alpha, reduce_factor_closed, reduce_general, reduce_primitive, ReduceMode, Reduction,
};
