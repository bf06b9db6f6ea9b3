//! JSON experiment configuration and command-line overrides.

use std::path::{Path, PathBuf};

use qega::{FunctionId, Operator, PenaltyMode, SamplerKind, SamplerSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    BenchSamplers,
    Run,
}

/// Every key is optional; absent keys take the defaults documented on
/// [`ExperimentConfig::default`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// When present, must match the subcommand the file is used with.
    pub command: Option<CommandKind>,
    pub experiment: String,
    pub n: usize,
    pub nu: usize,
    pub mu: usize,
    /// `None` means the per-operator default scales (runs) or 1000 (bench).
    pub alpha: Option<f64>,
    /// `None` means the per-operator default scales (runs) or 10 (bench).
    pub beta: Option<f64>,
    pub penalty_mode: PenaltyMode,
    pub mutation_rate: f64,
    pub budget: usize,
    pub operators: Vec<Operator>,
    pub fids: Vec<FunctionId>,
    /// Bench: every sampler is compared. Run: the first drives QE selection.
    /// `None` means SA, SD and Random for the bench and SA for runs.
    pub samplers: Option<Vec<SamplerSpec>>,
    pub children_per_parent: Option<usize>,
    pub mu_sweep: Option<Vec<usize>>,
    #[serde(alias = "seed")]
    pub master_seed: u64,
    /// GA runs per (fid, operator) pair, or trials for the sampler bench.
    pub runs: usize,
    #[serde(alias = "out")]
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: None,
            experiment: "qega".to_string(),
            n: 50,
            nu: 50,
            mu: 25,
            alpha: None,
            beta: None,
            penalty_mode: PenaltyMode::Auto,
            mutation_rate: 0.02,
            budget: 50,
            operators: Operator::ALL.to_vec(),
            fids: FunctionId::SUITE.map(FunctionId::Fid).collect(),
            samplers: None,
            children_per_parent: None,
            mu_sweep: None,
            master_seed: 0,
            runs: 20,
            output_dir: PathBuf::from("results"),
        }
    }
}

/// Command-line values that replace the corresponding config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(seed) = o.seed {
            self.master_seed = seed;
        }
        if let Some(runs) = o.runs {
            self.runs = runs;
        }
        if let Some(out) = &o.out {
            self.output_dir = out.clone();
        }
        self
    }

    /// Checks the keys shared by all commands and that the file targets `command`.
    pub fn validate_for(&self, command: CommandKind) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if let Some(c) = self.command {
            if c != command {
                return bad(format!("config is for {c:?}, not {command:?}"));
            }
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.n < 2 || self.nu == 0 {
            return bad(format!("need n >= 2 and nu >= 1 (n = {}, nu = {})", self.n, self.nu));
        }
        if self.mu == 0 || self.mu > self.n {
            return bad(format!("mu = {} must lie in 1..={}", self.mu, self.n));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if v.is_some_and(|v| !v.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        if let Some(samplers) = &self.samplers {
            if samplers.is_empty() {
                return bad("samplers must not be empty".into());
            }
            for s in samplers {
                s.validate().map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// `(alpha, beta)` for `op`, falling back to the operator defaults.
    pub fn scales_for(&self, op: Operator) -> (f64, f64) {
        let (a, b) = op.default_scales();
        (self.alpha.unwrap_or(a), self.beta.unwrap_or(b))
    }

    pub fn bench_samplers(&self) -> Vec<SamplerSpec> {
        self.samplers.clone().unwrap_or_else(|| {
            [
                SamplerKind::SimulatedAnnealing,
                SamplerKind::SteepestDescent,
                SamplerKind::Random,
            ]
            .into_iter()
            .map(|k| SamplerSpec::new(k, qega::samplers::DEFAULT_NUM_READS, 0))
            .collect()
        })
    }

    pub fn run_sampler(&self) -> SamplerSpec {
        self.samplers
            .as_ref()
            .and_then(|s| s.first().cloned())
            .unwrap_or_else(|| SamplerSpec::new(SamplerKind::SimulatedAnnealing, qega::samplers::DEFAULT_NUM_READS, 0))
    }
}
