//! Iterated local search over permutation problems.
//!
//! The [`engine`] module holds the problem-agnostic walk through the space of
//! local optima: acceptance criteria, search history, termination and the
//! distance-based escape procedure. The [`tsp`], [`qap`] and [`fsp`] modules
//! provide instance parsing, objective evaluation, local searches,
//! perturbations and construction heuristics for the three problems, and
//! [`problem`] ties them together behind a single configuration surface.

pub mod engine;
pub mod error;
pub mod fsp;
pub mod perm;
pub mod problem;
pub mod qap;
pub mod rng;
pub mod tsp;

pub use engine::{
    AcceptanceCriterion, Components, RestartSource, RunRecord, SearchHistory, Solution,
    Termination, TraceEntry,
};
pub use error::{Error, Result};

/// Exact integer objective value shared by all three problems.
pub type Cost = i64;
