use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qega_cli::bench::cmd_bench_samplers;
use qega_cli::report::{cmd_report, render_table};
use qega_cli::run::cmd_run;
use qega_cli::{CliError, CommandKind, ExperimentConfig, Overrides};

/// Quantum-enhanced selection GA experiments.
#[derive(Parser)]
#[command(name = "qega", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare samplers on selection QUBOs; writes sampler_bench.csv.
    BenchSamplers(ConfigArgs),
    /// Run GA experiments; writes trace, summary, pvalues and mu_sweep CSVs.
    Run(ConfigArgs),
    /// Re-aggregate a trace.csv and print the summary table.
    Report {
        /// Path to a trace.csv written by `run`.
        trace: PathBuf,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Runs per (fid, operator) pair, or bench trials.
    #[arg(long)]
    runs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        Ok(base.apply(&Overrides {
            seed: self.seed,
            runs: self.runs,
            out: self.out.clone(),
        }))
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::BenchSamplers(args) => {
            let config = args.load()?;
            config.validate_for(CommandKind::BenchSamplers)?;
            let path = cmd_bench_samplers(&config)?;
            println!("wrote {}", path.display());
        }
        Command::Run(args) => {
            let config = args.load()?;
            config.validate_for(CommandKind::Run)?;
            let out = cmd_run(&config)?;
            for path in [
                Some(&out.trace),
                Some(&out.summary),
                Some(&out.pvalues),
                out.mu_sweep.as_ref(),
            ]
            .into_iter()
            .flatten()
            {
                println!("wrote {}", path.display());
            }
        }
        Command::Report { trace } => print!("{}", render_table(&cmd_report(&trace)?)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
