//! Local improvement for maximum weight independent set in d-claw free graphs.
//!
//! The search maximises the squared-weight potential `Σ w(v)²`. Two
//! neighbourhoods are available: claws only, and every connected candidate
//! set of bounded size. Everything is computed in exact rational arithmetic.

pub mod analysis;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
mod potential;
pub mod scaling;
pub mod search;
pub mod setpacking;

pub use error::{Error, Result};
pub use graph::{
    format_weight, parse_weight, Claw, ClawFreeness, ProblemInstance, VertexSet, Weight,
};
pub use search::{
    apply_improvement, find_bounded_improvement, find_claw_improvement, gain, greedy,
    run_local_search, Certificate, Improvement, ImprovementKind, PivotRule, SearchConfig, Solution,
    Strategy, Trace,
};
pub use setpacking::{SetSystem, WeightedSet};
