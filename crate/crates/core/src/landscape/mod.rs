//! Landscape exploration: optimisation, critical-point classification and
//! the second-order analysis at the exceptional control.

pub mod classify;
pub mod exceptional;
pub mod optimize;
pub mod slice;
pub mod sweep;
pub mod variation;

pub use classify::{
    classify, classify_with_hessian, lemma1_rank_profile, ClassifiedPoint, PointKind, Tolerances,
};
pub use exceptional::{f0_second_order_report, EpsilonProbe, F0Report, F0Verdict};
pub use optimize::{ascend, Direction, OptimizerConfig, RunRecord, RunStatus};
pub use slice::LandscapeSlice;
pub use sweep::{
    derive_seed, random_pair, sweep, SweepConfig, SweepCounts, SweepObjective, SweepReport,
    SweepRun,
};
