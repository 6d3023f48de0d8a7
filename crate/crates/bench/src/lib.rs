//! Benchmark harness: synthetic instances, solver runs, traces and reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod config;
pub mod experiment;
pub mod generate;
pub mod rate;
pub mod report;
pub mod trace_csv;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] l0box_core::Error),
    #[error("solver {0}")]
    Solver(String),
    #[error("{solver} aborted at iteration {iteration}: {reason}")]
    Aborted {
        solver: String,
        iteration: usize,
        reason: String,
        partial_trace: Vec<l0box_core::IterationRecord<f64>>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("malformed trace: {0}")]
    Trace(String),
    #[error("config: {0}")]
    Config(String),
}

pub use audit::{audit_trace, TraceAudit, TraceIssue};
pub use experiment::{run_experiment, run_on_instance, ExperimentReport, SolverRun};
pub use generate::{
    generate_instance, ExampleId, ExperimentSpec, GeneratedInstance, SolverSettings,
};
pub use rate::{rate_probe, rate_probe_series, RateMode, RateReport};
pub use report::{markdown_table, write_artifacts, Summary, TableCell, SCHEMA_VERSION};
pub use trace_csv::{read_trace, read_trace_file, write_trace, write_trace_file};
