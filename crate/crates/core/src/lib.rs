//! Genetic algorithm with QUBO-based parent selection.
//!
//! Parent selection is cast as the minimisation of a binary quadratic model
//! whose diagonal rewards fitness and whose couplings reward pairwise Hamming
//! diversity, with a quadratic penalty pinning the number of selected parents
//! to `mu`. Classical samplers stand in for an annealer; an external process
//! can be plugged in through a newline-delimited JSON protocol.
//!
//! Modules:
//!
//! - [`bqm`]: the selection QUBO and energy evaluation
//! - [`samplers`]: simulated annealing, steepest descent, exhaustive, random and external samplers
//! - [`functions`]: OneMax, LeadingOnes, LABS and the W-model suite (fids 4-18)
//! - [`ga`]: the genetic algorithm with classical and QUBO-based selection
//! - [`stats`]: summaries and Welch's t-test
//!
//! The `parallel` feature (on by default) runs independent sampler reads,
//! enumeration chunks and experiment runs on the rayon pool. Without it every
//! loop runs sequentially and produces identical output.

pub mod bqm;
pub mod functions;
pub mod ga;
pub mod par;
pub mod rng;
pub mod samplers;
pub mod stats;

pub use bqm::{build_selection_qubo, energy, hamming, Bqm, BqmError, PenaltyMode, SelectionParams};
pub use functions::{FunctionError, FunctionId, ObjectiveFunction};
pub use ga::{run_ga, run_ga_observed, GaConfig, GaError, Operator, Population, RunRecord};
pub use par::Execution;
pub use samplers::{sample, SampleRecord, SampleSet, SamplerError, SamplerKind, SamplerSpec};
pub use stats::{summarize, welch_t_test, Summary, TTestResult};
