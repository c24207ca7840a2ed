//! Experiment harness for the iterated local search engine: declarative
//! multi-seed sweeps, exhaustive oracles for small instances, report
//! aggregation and emission, and the rank-sum test used to compare two
//! variants.

pub mod config;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod report;
pub mod stats;

pub use config::{BestKnown, Combination, ExperimentConfig, InstanceSource, TerminationConfig};
pub use error::{Error, Result};
pub use experiment::{run_experiment, run_experiment_with, trajectory_capture};
pub use oracle::brute_force;
pub use report::{emit_report, Format, Report, ReportRow, RunResult};
