//! Experiment orchestration for the `qega` command-line tool.
//!
//! Three commands share one JSON configuration format:
//!
//! - [`bench::cmd_bench_samplers`] compares samplers on selection QUBOs built
//!   from random populations and writes `sampler_bench.csv`;
//! - [`run::cmd_run`] runs the GA over functions and operators and writes
//!   `trace.csv`, `summary.csv`, `pvalues.csv` and optionally `mu_sweep.csv`;
//! - [`report::cmd_report`] re-aggregates a `trace.csv`.
//!
//! All output is deterministic in the master seed.

pub mod bench;
pub mod config;
pub mod error;
pub mod format;
pub mod report;
pub mod run;

pub use config::{CommandKind, ExperimentConfig, Overrides};
pub use error::CliError;
