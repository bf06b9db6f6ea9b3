//! Sampler comparison on selection QUBOs from random populations.

use std::path::PathBuf;

use qega::ga::init_population;
use qega::rng::mix_all;
use qega::samplers::sample;
use qega::{build_selection_qubo, Execution, ObjectiveFunction, SamplerError, SelectionParams};

use crate::config::{CommandKind, ExperimentConfig};
use crate::error::CliError;
use crate::format::fmt_real;

/// Default scales for the bench when the config leaves them out.
pub const DEFAULT_ALPHA: f64 = 1000.0;
pub const DEFAULT_BETA: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub trial: usize,
    pub sampler: String,
    pub alpha: f64,
    pub beta: f64,
    pub mu: usize,
    pub min_energy: f64,
}

/// Computes the bench rows: one per (trial, sampler), trial-major.
pub fn bench_rows(config: &ExperimentConfig, exec: Execution) -> Result<Vec<BenchRow>, CliError> {
    config.validate_for(CommandKind::BenchSamplers)?;
    let alpha = config.alpha.unwrap_or(DEFAULT_ALPHA);
    let beta = config.beta.unwrap_or(DEFAULT_BETA);
    let params = SelectionParams::new(alpha, beta, config.mu, config.penalty_mode);
    let samplers = config.bench_samplers();
    let f = ObjectiveFunction::onemax(config.nu).map_err(|e| CliError::Config(e.to_string()))?;

    let per_trial = exec.try_map_indexed(config.runs, |trial| -> Result<Vec<BenchRow>, CliError> {
        let members = init_population(config.n, config.nu, mix_all(config.master_seed, &[trial as u64]));
        let fitness: Vec<f64> = members
            .iter()
            .map(|m| f.evaluate(m))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let bqm = build_selection_qubo(&fitness, &members, &params).map_err(|e| CliError::Config(e.to_string()))?;
        samplers
            .iter()
            .enumerate()
            .map(|(k, spec)| {
                let seed = mix_all(spec.seed ^ config.master_seed, &[trial as u64, k as u64]);
                let set = sample(&bqm, &spec.with_seed(seed))?;
                let min_energy = set
                    .min_energy()
                    .ok_or_else(|| SamplerError::InvalidSpec("sampler returned no samples".into()))?;
                Ok(BenchRow {
                    trial,
                    sampler: spec.kind.label().to_string(),
                    alpha,
                    beta,
                    mu: config.mu,
                    min_energy,
                })
            })
            .collect()
    })?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// Runs the bench and writes `sampler_bench.csv` into the output directory.
pub fn cmd_bench_samplers(config: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let rows = bench_rows(config, Execution::default())?;
    std::fs::create_dir_all(&config.output_dir)?;
    let path = config.output_dir.join("sampler_bench.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["trial", "sampler", "alpha", "beta", "mu", "min_energy"])?;
    for r in &rows {
        w.write_record([
            r.trial.to_string(),
            r.sampler.clone(),
            fmt_real(r.alpha),
            fmt_real(r.beta),
            r.mu.to_string(),
            fmt_real(r.min_energy),
        ])?;
    }
    w.flush()?;
    Ok(path)
}
