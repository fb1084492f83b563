//! Strongly aperiodic constructions via the local lemma.

pub mod paths;
pub mod tsets;
pub mod witness;

pub use paths::{
    alphabet_is_sufficient, build_squarefree_instance, enumerate_odd_paths, find_vertex_square,
    is_vertex_square, squarefree_dependency_excess, OddPaths, PathWindow, DEFAULT_PATH_BUDGET,
};
pub use tsets::{
    build_2coloring_instance, build_t_sets, dependency_counts_by_level, sample_two_coloring,
    two_coloring_dependency_excess, verify_distinct_neighborhood, DistinctReport, TSet, TSets,
    TwoColoringInstance,
};
pub use witness::{witness_path, Witness, WitnessPath, WitnessRecord};
