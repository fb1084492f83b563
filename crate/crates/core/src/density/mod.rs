//! Uniform-density configurations from covering forests and Sturmian words.

pub mod fill;
pub mod forest;
pub mod slope;

pub use fill::{
    ball_sequence, convex_enumeration, fill_density, forbidden_check, is_convex, measure_density,
    verify_condition1, AggregateCheck, ClusterCheck, Condition1Report, DensityReport, DensityRow,
    ForbiddenVerdict,
};
pub use forest::{
    cluster_radius, greedy_rnet, CoveringForest, ForestRecord, LevelRecord, SandwichReport,
};
pub use slope::{is_balanced, sturmian, Slope, MAX_DENOMINATOR};
