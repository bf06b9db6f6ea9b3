//! Trace rows and their aggregation into per-(fid, operator) summaries.

use std::collections::BTreeMap;
use std::path::Path;

use qega::{summarize, FunctionId, Operator};
use serde::Deserialize;

use crate::error::CliError;
use crate::format::fmt_real;

pub const TRACE_HEADER: [&str; 8] = [
    "experiment",
    "fid",
    "operator",
    "run",
    "generation",
    "best_fitness",
    "diversity",
    "converged_at",
];

pub const SUMMARY_HEADER: [&str; 8] = [
    "fid",
    "operator",
    "mean_fitness",
    "sd_fitness",
    "mean_G",
    "sd_G",
    "mean_GD",
    "sd_GD",
];

/// One generation of one run. `converged_at` repeats the run's G on every row
/// so that a trace alone suffices to rebuild the summary.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TraceRow {
    pub experiment: String,
    pub fid: FunctionId,
    pub operator: Operator,
    pub run: usize,
    pub generation: usize,
    pub best_fitness: f64,
    pub diversity: f64,
    pub converged_at: usize,
}

impl TraceRow {
    pub fn to_record(&self) -> [String; 8] {
        [
            self.experiment.clone(),
            self.fid.to_string(),
            self.operator.to_string(),
            self.run.to_string(),
            self.generation.to_string(),
            fmt_real(self.best_fitness),
            fmt_real(self.diversity),
            self.converged_at.to_string(),
        ]
    }
}

/// Per-run metrics recovered from trace rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    /// Best fitness at the last generation.
    pub fitness: f64,
    /// Generations to reach the target, or the budget.
    pub g: f64,
    /// Mean genotype diversity over the generations.
    pub gd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub fid: FunctionId,
    pub operator: Operator,
    pub mean_fitness: f64,
    pub sd_fitness: f64,
    pub mean_g: f64,
    pub sd_g: f64,
    pub mean_gd: f64,
    pub sd_gd: f64,
}

impl SummaryRow {
    pub fn to_record(&self) -> [String; 8] {
        [
            self.fid.to_string(),
            self.operator.to_string(),
            fmt_real(self.mean_fitness),
            fmt_real(self.sd_fitness),
            fmt_real(self.mean_g),
            fmt_real(self.sd_g),
            fmt_real(self.mean_gd),
            fmt_real(self.sd_gd),
        ]
    }
}

/// Groups rows by (fid, operator) and run, in sorted order.
pub fn run_metrics(rows: &[TraceRow]) -> BTreeMap<(FunctionId, Operator), Vec<RunMetrics>> {
    let mut runs: BTreeMap<(FunctionId, Operator, usize), Vec<&TraceRow>> = BTreeMap::new();
    for r in rows {
        runs.entry((r.fid, r.operator, r.run)).or_default().push(r);
    }
    let mut out: BTreeMap<(FunctionId, Operator), Vec<RunMetrics>> = BTreeMap::new();
    for ((fid, op, _), mut rows) in runs {
        rows.sort_by_key(|r| r.generation);
        let last = rows.last().expect("groups are nonempty");
        let gd = rows.iter().map(|r| r.diversity).sum::<f64>() / rows.len() as f64;
        out.entry((fid, op)).or_default().push(RunMetrics {
            fitness: last.best_fitness,
            g: last.converged_at as f64,
            gd,
        });
    }
    out
}

pub fn aggregate(rows: &[TraceRow]) -> Result<Vec<SummaryRow>, CliError> {
    if rows.is_empty() {
        return Err(CliError::NoRows("trace".into()));
    }
    let stat = |v: Vec<f64>| summarize(&v).map_err(|e| CliError::Config(e.to_string()));
    run_metrics(rows)
        .into_iter()
        .map(|((fid, operator), runs)| {
            let fit = stat(runs.iter().map(|m| m.fitness).collect())?;
            let g = stat(runs.iter().map(|m| m.g).collect())?;
            let gd = stat(runs.iter().map(|m| m.gd).collect())?;
            Ok(SummaryRow {
                fid,
                operator,
                mean_fitness: fit.mean,
                sd_fitness: fit.sd,
                mean_g: g.mean,
                sd_g: g.sd,
                mean_gd: gd.mean,
                sd_gd: gd.sd,
            })
        })
        .collect()
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>, CliError> {
    let mut r =
        csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    r.deserialize()
        .collect::<Result<Vec<TraceRow>, _>>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Re-aggregates a trace file into summary rows.
pub fn cmd_report(trace_csv: &Path) -> Result<Vec<SummaryRow>, CliError> {
    let rows = read_trace(trace_csv)?;
    if rows.is_empty() {
        return Err(CliError::NoRows(trace_csv.display().to_string()));
    }
    aggregate(&rows)
}

/// Fixed-width table of summary rows for the terminal.
pub fn render_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let header = SUMMARY_HEADER.map(String::from);
    let records: Vec<[String; 8]> = std::iter::once(header)
        .chain(rows.iter().map(SummaryRow::to_record))
        .collect();
    let widths: Vec<usize> = (0..8)
        .map(|c| records.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    for r in &records {
        let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
