//! Finite-window constructions from symbolic dynamics on finitely generated groups.
//!
//! * [`group`]: groups with decidable word problem, Cayley balls.
//! * [`shift`]: patterns, window configurations, densities and boundaries.
//! * [`lll`]: the asymmetric local lemma, checked exactly, and a resampling sampler.
//! * [`aperiodic`]: distinct-neighbourhood 2-colorings, square-free colorings and witness paths.
//! * [`density`]: covering forests, Sturmian fillings and density certificates.

pub mod aperiodic;
pub mod density;
pub mod error;
pub mod exact;
pub mod graph;
pub mod group;
pub mod lll;
pub mod shift;

pub use error::{Error, Result};
pub use exact::{Rational, RootTwo};
pub use graph::Graph;
pub use group::{Ball, Element, GroupKind, GroupModel, Letter, Word};
pub use lll::{BadEvent, LLLInstance, Predicate, Variable, Verdict, Weight};
pub use shift::{Pattern, PatternCoding, Symbol, WindowConfig};
