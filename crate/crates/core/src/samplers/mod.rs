//! BQM samplers.
//!
//! Every sampler maps a [`Bqm`] to an energy-sorted [`SampleSet`]. The
//! in-process samplers are deterministic in `(bqm, spec)`: read `r` draws from
//! its own stream derived from `(spec.seed, r)`, so reads can run in parallel
//! without changing the result.

mod annealing;
mod dense;
mod descent;
mod exhaustive;
pub mod external;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bqm::{Bqm, BqmError};
use crate::par::Execution;
use crate::rng::stream_rng;

pub use annealing::{beta_at, default_schedule};
pub use exhaustive::MAX_EXHAUSTIVE_VARS;
pub use external::ExternalSampler;

use dense::DenseModel;

/// Reads per call when a configuration does not say otherwise.
pub const DEFAULT_NUM_READS: usize = 100;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("invalid sampler spec: {0}")]
    InvalidSpec(String),
    #[error("exhaustive sampler limited to {max} variables, model has {num_vars}")]
    TooManyVariables { num_vars: usize, max: usize },
    #[error("failed to launch external sampler `{command}`: {source}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("external sampler I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("protocol error ({reason}) in line: {line}")]
    Protocol { line: String, reason: String },
    #[error("sample {index}: reported energy {reported} but recomputed {computed}")]
    EnergyMismatch { index: usize, reported: f64, computed: f64 },
    #[error(transparent)]
    Bqm(#[from] BqmError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    SimulatedAnnealing,
    SteepestDescent,
    Exhaustive,
    Random,
    External,
}

impl SamplerKind {
    /// Short label used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            SamplerKind::SimulatedAnnealing => "sa",
            SamplerKind::SteepestDescent => "sd",
            SamplerKind::Exhaustive => "exhaustive",
            SamplerKind::Random => "random",
            SamplerKind::External => "external",
        }
    }
}

/// Annealing schedule: `sweeps` passes with inverse temperature geometric
/// from `beta_start` to `beta_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    #[serde(default = "default_num_reads")]
    pub num_reads: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_cmd: Option<String>,
}

fn default_num_reads() -> usize {
    DEFAULT_NUM_READS
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind, num_reads: usize, seed: u64) -> Self {
        SamplerSpec {
            kind,
            num_reads,
            seed,
            schedule: None,
            external_cmd: None,
        }
    }

    pub fn external(command: impl Into<String>, num_reads: usize, seed: u64) -> Self {
        SamplerSpec {
            external_cmd: Some(command.into()),
            ..SamplerSpec::new(SamplerKind::External, num_reads, seed)
        }
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = Some(schedule);
        self
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SamplerSpec { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let invalid = |m: &str| Err(SamplerError::InvalidSpec(m.to_string()));
        if self.num_reads == 0 {
            return invalid("num_reads must be at least 1");
        }
        if let Some(s) = &self.schedule {
            if s.sweeps == 0 {
                return invalid("schedule needs at least one sweep");
            }
            if !(s.beta_start > 0.0 && s.beta_start < s.beta_end && s.beta_end.is_finite()) {
                return invalid("schedule needs 0 < beta_start < beta_end");
            }
        }
        if self.kind == SamplerKind::External && self.external_cmd.as_deref().is_none_or(|c| c.trim().is_empty()) {
            return invalid("external sampler needs external_cmd");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    #[serde(with = "binary_vec")]
    pub assignment: Vec<bool>,
    pub energy: f64,
    pub num_occurrences: u32,
}

/// Records sorted ascending by energy, ties by assignment in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    records: Vec<SampleRecord>,
}

impl SampleSet {
    pub fn from_records(mut records: Vec<SampleRecord>) -> Self {
        records.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.assignment.cmp(&b.assignment))
        });
        SampleSet { records }
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn first(&self) -> Option<&SampleRecord> {
        self.records.first()
    }

    pub fn min_energy(&self) -> Option<f64> {
        self.first().map(|r| r.energy)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn into_records(self) -> Vec<SampleRecord> {
        self.records
    }
}

mod binary_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(bits.iter().map(|&b| b as u8))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let raw = Vec::<u8>::deserialize(d)?;
        raw.into_iter()
            .map(|v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(serde::de::Error::custom(format!("non-binary value {other}"))),
            })
            .collect()
    }
}

/// Samples `bqm` according to `spec`, parallelising reads when the
/// `parallel` feature is enabled.
pub fn sample(bqm: &Bqm, spec: &SamplerSpec) -> Result<SampleSet, SamplerError> {
    sample_with(bqm, spec, Execution::default())
}

pub fn sample_with(bqm: &Bqm, spec: &SamplerSpec, exec: Execution) -> Result<SampleSet, SamplerError> {
    spec.validate()?;
    match spec.kind {
        SamplerKind::External => {
            let cmd = spec.external_cmd.as_deref().unwrap_or_default();
            ExternalSampler::spawn(cmd)?.sample(bqm, spec.num_reads, spec.seed)
        }
        SamplerKind::Exhaustive => exhaustive::enumerate_best(bqm, spec.num_reads, exec),
        kind => Ok(sample_in_process(bqm, spec, kind, exec)),
    }
}

fn sample_in_process(bqm: &Bqm, spec: &SamplerSpec, kind: SamplerKind, exec: Execution) -> SampleSet {
    let model = DenseModel::new(bqm);
    let schedule = spec.schedule.unwrap_or_else(|| default_schedule(bqm));
    let records = exec.map_indexed(spec.num_reads, |read| {
        let mut rng = stream_rng(spec.seed, read as u64);
        let assignment = match kind {
            SamplerKind::SimulatedAnnealing => annealing::anneal_once(&model, &schedule, &mut rng),
            SamplerKind::SteepestDescent => descent::descend_from_random(&model, &mut rng),
            SamplerKind::Random => (0..model.n).map(|_| rng.gen()).collect(),
            SamplerKind::Exhaustive | SamplerKind::External => unreachable!("handled by caller"),
        };
        let energy = model.energy(&assignment);
        SampleRecord {
            assignment,
            energy,
            num_occurrences: 1,
        }
    });
    SampleSet::from_records(records)
}

/// A sampler that can be called repeatedly. External samplers keep one child
/// process alive for the whole session.
pub enum SamplerSession {
    InProcess(SamplerSpec),
    External { spec: SamplerSpec, child: ExternalSampler },
}

impl SamplerSession {
    pub fn open(spec: &SamplerSpec) -> Result<Self, SamplerError> {
        spec.validate()?;
        Ok(match spec.kind {
            SamplerKind::External => SamplerSession::External {
                spec: spec.clone(),
                child: ExternalSampler::spawn(spec.external_cmd.as_deref().unwrap_or_default())?,
            },
            _ => SamplerSession::InProcess(spec.clone()),
        })
    }

    pub fn spec(&self) -> &SamplerSpec {
        match self {
            SamplerSession::InProcess(spec) | SamplerSession::External { spec, .. } => spec,
        }
    }

    /// Samples with the session's spec but an explicit seed.
    pub fn sample_seeded(&mut self, bqm: &Bqm, seed: u64) -> Result<SampleSet, SamplerError> {
        match self {
            SamplerSession::InProcess(spec) => sample(bqm, &spec.with_seed(seed)),
            SamplerSession::External { spec, child } => child.sample(bqm, spec.num_reads, seed),
        }
    }
}
