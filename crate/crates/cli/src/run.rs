//! GA experiments over functions and operators.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use qega::rng::mix_all;
use qega::{run_ga, welch_t_test, Execution, FunctionId, GaConfig, ObjectiveFunction, Operator, SelectionParams};

use crate::config::{CommandKind, ExperimentConfig};
use crate::error::CliError;
use crate::format::{fmt_real, quantize};
use crate::report::{aggregate, run_metrics, RunMetrics, TraceRow, SUMMARY_HEADER, TRACE_HEADER};

/// Tag mixed into μ-sweep seeds so they never collide with the main runs.
const SWEEP_TAG: u64 = 0x6d75_7377;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub trace: PathBuf,
    pub summary: PathBuf,
    pub pvalues: PathBuf,
    pub mu_sweep: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PValueRow {
    pub fid: FunctionId,
    pub qe_operator: Operator,
    pub classic_operator: Operator,
    pub metric: &'static str,
    pub t: f64,
    pub df: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mu: usize,
    pub lambda: usize,
    pub operator: Operator,
    pub mean_g: f64,
}

/// Seed of run `run` of `op` on `fid`.
pub fn run_seed(master: u64, fid: FunctionId, op: Operator, run: usize) -> u64 {
    mix_all(master, &[fid.code(), op.code(), run as u64])
}

/// The GA configuration used for `op` under `config` with parent count `mu`.
pub fn ga_config(config: &ExperimentConfig, op: Operator, mu: usize) -> GaConfig {
    let mut ga = GaConfig::new(op, config.n, config.nu, mu);
    ga.budget = config.budget;
    ga.mutation_rate = config.mutation_rate;
    if op.is_qe() {
        let (alpha, beta) = config.scales_for(op);
        ga.selection = Some(SelectionParams::new(alpha, beta, mu, config.penalty_mode));
        ga.sampler = Some(config.run_sampler());
    }
    if !op.is_elitist() {
        ga.children_per_parent = config.children_per_parent;
    }
    ga
}

fn sorted<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    items.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn build_function(fid: FunctionId, nu: usize) -> Result<ObjectiveFunction, CliError> {
    fid.build(nu).map_err(|e| CliError::Config(format!("fid {fid}: {e}")))
}

/// All trace rows, sorted by (fid, operator, run, generation), with reals
/// quantized to their CSV representation.
pub fn trace_rows(config: &ExperimentConfig, exec: Execution) -> Result<Vec<TraceRow>, CliError> {
    config.validate_for(CommandKind::Run)?;
    let fids = sorted(&config.fids);
    let ops = sorted(&config.operators);
    if fids.is_empty() || ops.is_empty() {
        return Err(CliError::Config("fids and operators must not be empty".into()));
    }
    let functions: Vec<ObjectiveFunction> = fids
        .iter()
        .map(|&fid| build_function(fid, config.nu))
        .collect::<Result<_, _>>()?;
    let configs: Vec<GaConfig> = ops.iter().map(|&op| ga_config(config, op, config.mu)).collect();
    for ga in &configs {
        ga.validate()?;
    }

    let runs = config.runs;
    let jobs = fids.len() * ops.len() * runs;
    let per_job = exec.try_map_indexed(jobs, |job| -> Result<Vec<TraceRow>, CliError> {
        let run = job % runs;
        let op_index = (job / runs) % ops.len();
        let fid_index = job / (runs * ops.len());
        let f = &functions[fid_index];
        let op = ops[op_index];
        let mut ga = configs[op_index].clone();
        ga.seed = run_seed(config.master_seed, f.id, op, run);
        let record = run_ga(&ga, f)?;
        Ok(record
            .best_fitness_trace
            .iter()
            .zip(&record.diversity_trace)
            .enumerate()
            .map(|(g, (&best, &div))| TraceRow {
                experiment: config.experiment.clone(),
                fid: f.id,
                operator: op,
                run,
                generation: g + 1,
                best_fitness: quantize(best),
                diversity: quantize(div),
                converged_at: record.converged_at,
            })
            .collect())
    })?;
    Ok(per_job.into_iter().flatten().collect())
}

type Metric = fn(&RunMetrics) -> f64;

/// Welch tests of each QE operator against its classical counterpart on
/// final fitness, G and GD. Pairs with fewer than two runs are skipped.
pub fn pvalue_rows(rows: &[TraceRow]) -> Result<Vec<PValueRow>, CliError> {
    let metrics = run_metrics(rows);
    let mut out = Vec::new();
    for (&(fid, op), qe_runs) in &metrics {
        if !op.is_qe() {
            continue;
        }
        let classic = op.classical_counterpart();
        let Some(classic_runs) = metrics.get(&(fid, classic)) else {
            continue;
        };
        if qe_runs.len() < 2 || classic_runs.len() < 2 {
            continue;
        }
        let pick = |runs: &[RunMetrics], m: Metric| runs.iter().map(m).collect::<Vec<f64>>();
        let columns: [(&'static str, Metric); 3] = [("fitness", |m| m.fitness), ("G", |m| m.g), ("GD", |m| m.gd)];
        for (metric, get) in columns {
            let r = welch_t_test(&pick(qe_runs, get), &pick(classic_runs, get))
                .map_err(|e| CliError::Config(e.to_string()))?;
            out.push(PValueRow {
                fid,
                qe_operator: op,
                classic_operator: classic,
                metric,
                t: r.t,
                df: r.df,
                p: r.p,
            });
        }
    }
    Ok(out)
}

/// Mean G on OneMax for every (μ, operator) in the sweep. Offspring count
/// is `n - μ` for elitist operators and `n` otherwise.
pub fn sweep_rows(config: &ExperimentConfig, mus: &[usize], exec: Execution) -> Result<Vec<SweepRow>, CliError> {
    let f = build_function(FunctionId::OneMax, config.nu)?;
    let ops = sorted(&config.operators);
    let mus = sorted(mus);
    let mut cells = Vec::new();
    for &mu in &mus {
        for &op in &ops {
            let mut ga = ga_config(config, op, mu);
            ga.children_per_parent = None;
            ga.validate()?;
            cells.push((mu, op, ga));
        }
    }
    let runs = config.runs;
    let gs = exec.try_map_indexed(cells.len() * runs, |job| -> Result<f64, CliError> {
        let (mu, op, ga) = &cells[job / runs];
        let mut ga = ga.clone();
        ga.seed = mix_all(
            config.master_seed,
            &[SWEEP_TAG, *mu as u64, op.code(), (job % runs) as u64],
        );
        Ok(run_ga(&ga, &f)?.converged_at as f64)
    })?;
    Ok(cells
        .iter()
        .zip(gs.chunks(runs))
        .map(|((mu, op, _), g)| SweepRow {
            mu: *mu,
            lambda: if op.is_elitist() { config.n - mu } else { config.n },
            operator: *op,
            mean_g: g.iter().sum::<f64>() / g.len() as f64,
        })
        .collect())
}

fn write_csv<const N: usize>(
    path: &Path,
    header: [&str; N],
    records: impl IntoIterator<Item = [String; N]>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in records {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the experiment and writes its CSV files into the output directory.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunOutputs, CliError> {
    let exec = Execution::default();
    let rows = trace_rows(config, exec)?;
    let summary = aggregate(&rows)?;
    let pvalues = pvalue_rows(&rows)?;
    let sweep = match &config.mu_sweep {
        Some(mus) => Some(sweep_rows(config, mus, exec)?),
        None => None,
    };

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir)?;
    let out = RunOutputs {
        trace: dir.join("trace.csv"),
        summary: dir.join("summary.csv"),
        pvalues: dir.join("pvalues.csv"),
        mu_sweep: sweep.as_ref().map(|_| dir.join("mu_sweep.csv")),
    };
    write_csv(&out.trace, TRACE_HEADER, rows.iter().map(TraceRow::to_record))?;
    write_csv(&out.summary, SUMMARY_HEADER, summary.iter().map(|s| s.to_record()))?;
    write_csv(
        &out.pvalues,
        ["fid", "qe_operator", "classic_operator", "metric", "t", "df", "p"],
        pvalues.iter().map(|r| {
            [
                r.fid.to_string(),
                r.qe_operator.to_string(),
                r.classic_operator.to_string(),
                r.metric.to_string(),
                fmt_real(r.t),
                fmt_real(r.df),
                fmt_real(r.p),
            ]
        }),
    )?;
    if let (Some(path), Some(sweep)) = (&out.mu_sweep, &sweep) {
        write_csv(
            path,
            ["mu", "lambda", "operator", "mean_G"],
            sweep.iter().map(|r| {
                [
                    r.mu.to_string(),
                    r.lambda.to_string(),
                    r.operator.to_string(),
                    fmt_real(r.mean_g),
                ]
            }),
        )?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n: 6,
            nu: 8,
            mu: 3,
            budget: 4,
            runs: 2,
            fids: vec![FunctionId::Fid(4), FunctionId::OneMax],
            operators: vec![Operator::QePlus, Operator::ClassicPlus],
            samplers: Some(vec![qega::SamplerSpec::new(qega::SamplerKind::SteepestDescent, 5, 0)]),
            ..Default::default()
        }
    }

    #[test]
    fn rows_are_sorted_and_complete() {
        let rows = trace_rows(&small(), Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 4);
        let keys: Vec<_> = rows.iter().map(|r| (r.fid, r.operator, r.run, r.generation)).collect();
        let mut want = keys.clone();
        want.sort();
        assert_eq!(keys, want);
        assert_eq!(rows[0].fid, FunctionId::OneMax);
    }

    #[test]
    fn execution_mode_does_not_change_rows() {
        let c = small();
        assert_eq!(
            trace_rows(&c, Execution::Sequential).unwrap(),
            trace_rows(&c, Execution::default()).unwrap()
        );
    }

    #[test]
    fn pvalues_cover_three_metrics_per_pair() {
        let rows = trace_rows(&small(), Execution::Sequential).unwrap();
        let p = pvalue_rows(&rows).unwrap();
        assert_eq!(p.len(), 2 * 3);
        assert!(p
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.p) && r.classic_operator == Operator::ClassicPlus));
    }

    #[test]
    fn sweep_lambda_follows_operator() {
        let c = ExperimentConfig {
            operators: vec![Operator::ClassicPlus, Operator::ClassicComma],
            ..small()
        };
        let rows = sweep_rows(&c, &[2, 3], Execution::Sequential).unwrap();
        let lambdas: Vec<_> = rows.iter().map(|r| (r.mu, r.operator, r.lambda)).collect();
        assert_eq!(
            lambdas,
            vec![
                (2, Operator::ClassicPlus, 4),
                (2, Operator::ClassicComma, 6),
                (3, Operator::ClassicPlus, 3),
                (3, Operator::ClassicComma, 6),
            ]
        );
    }

    #[test]
    fn inconsistent_children_per_parent_is_a_config_error() {
        let c = ExperimentConfig {
            operators: vec![Operator::ClassicComma],
            children_per_parent: Some(4),
            ..small()
        };
        assert_eq!(trace_rows(&c, Execution::Sequential).unwrap_err().exit_code(), 1);
    }
}
