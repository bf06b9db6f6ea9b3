//! Genetic algorithm with classical rank selection or QUBO-based selection.
//!
//! Each generation selects `mu` parents from the current population, builds
//! offspring by uniform crossover, mutates the offspring bitwise and replaces
//! the population:
//!
//! - elitist operators (`ClassicPlus`, `QePlus`) cross the best-so-far string
//!   with a random parent to make `n - mu` offspring and carry the parents over;
//! - `ClassicComma` crosses each parent with another random parent;
//! - `QeComma` crosses each parent with a uniformly drawn population member.
//!
//! The best-so-far string is tracked for every operator.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bqm::{build_selection_qubo, hamming, BqmError, PenaltyMode, SelectionParams};
use crate::functions::{FunctionError, ObjectiveFunction};
use crate::rng::{mix, stream_rng, StreamRng};
use crate::samplers::{sample, SamplerError, SamplerKind, SamplerSession, SamplerSpec};

pub type Chromosome = Vec<bool>;

#[derive(Debug, Error)]
pub enum GaError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Bqm(#[from] BqmError),
    #[error("sampler returned no samples")]
    EmptySampleSet,
    #[error("genotype diversity needs at least two members")]
    DiversityNeedsTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    ClassicPlus,
    ClassicComma,
    QePlus,
    QeComma,
}

impl Operator {
    pub const ALL: [Operator; 4] = [
        Operator::QePlus,
        Operator::ClassicPlus,
        Operator::QeComma,
        Operator::ClassicComma,
    ];

    pub fn is_elitist(self) -> bool {
        matches!(self, Operator::ClassicPlus | Operator::QePlus)
    }

    pub fn is_qe(self) -> bool {
        matches!(self, Operator::QePlus | Operator::QeComma)
    }

    /// The classical operator with the same replacement scheme.
    pub fn classical_counterpart(self) -> Operator {
        match self {
            Operator::QePlus | Operator::ClassicPlus => Operator::ClassicPlus,
            Operator::QeComma | Operator::ClassicComma => Operator::ClassicComma,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Operator::ClassicPlus => "classic_plus",
            Operator::ClassicComma => "classic_comma",
            Operator::QePlus => "qe_plus",
            Operator::QeComma => "qe_comma",
        }
    }

    /// Small integer used when deriving per-run seeds.
    pub fn code(self) -> u64 {
        match self {
            Operator::ClassicPlus => 0,
            Operator::ClassicComma => 1,
            Operator::QePlus => 2,
            Operator::QeComma => 3,
        }
    }

    /// Default `(alpha, beta)`: fitness-heavy for the elitist variant,
    /// balanced for the non-elitist one.
    pub fn default_scales(self) -> (f64, f64) {
        match self {
            Operator::QeComma | Operator::ClassicComma => (100.0, 100.0),
            Operator::QePlus | Operator::ClassicPlus => (1000.0, 10.0),
        }
    }
}

impl std::fmt::Display for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Operator {
    type Err = GaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operator::ALL
            .into_iter()
            .find(|op| op.label() == s)
            .ok_or_else(|| GaError::InvalidConfig(format!("unknown operator {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub chromosome_len: usize,
    pub mu: usize,
    pub budget: usize,
    pub mutation_rate: f64,
    pub operator: Operator,
    /// Required for QE operators; `mu` here must match `GaConfig::mu`.
    pub selection: Option<SelectionParams>,
    /// Required for QE operators.
    pub sampler: Option<SamplerSpec>,
    /// Comma operators only. `None` means `lambda = n` offspring spread
    /// round-robin over the parents; `Some(c)` requires `c * mu == n`.
    pub children_per_parent: Option<usize>,
    pub seed: u64,
}

impl GaConfig {
    /// Configuration with budget 50, mutation rate 0.02, auto penalty and,
    /// for QE operators, the operator's default scales and a 100-read
    /// simulated-annealing sampler.
    pub fn new(operator: Operator, population_size: usize, chromosome_len: usize, mu: usize) -> Self {
        let (alpha, beta) = operator.default_scales();
        GaConfig {
            population_size,
            chromosome_len,
            mu,
            budget: 50,
            mutation_rate: 0.02,
            operator,
            selection: operator
                .is_qe()
                .then(|| SelectionParams::new(alpha, beta, mu, PenaltyMode::Auto)),
            sampler: operator
                .is_qe()
                .then(|| SamplerSpec::new(SamplerKind::SimulatedAnnealing, 100, 0)),
            children_per_parent: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), GaError> {
        let invalid = |m: String| Err(GaError::InvalidConfig(m));
        let n = self.population_size;
        if n < 2 {
            return invalid(format!("population size {n} must be at least 2"));
        }
        if self.chromosome_len == 0 {
            return invalid("chromosome length must be positive".into());
        }
        if self.mu == 0 || self.mu > n {
            return invalid(format!("mu = {} must lie in 1..={n}", self.mu));
        }
        if self.operator.is_elitist() && self.mu == n {
            return invalid(format!("elitist operators need mu < n (mu = {}, n = {n})", self.mu));
        }
        if self.budget == 0 {
            return invalid("budget must be at least 1 generation".into());
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return invalid(format!("mutation rate {} outside [0, 1]", self.mutation_rate));
        }
        if let Some(c) = self.children_per_parent {
            if c * self.mu != n {
                return invalid(format!(
                    "children_per_parent {c} * mu {} must equal population size {n}",
                    self.mu
                ));
            }
        }
        if self.operator.is_qe() {
            let Some(params) = &self.selection else {
                return invalid(format!("{} needs selection parameters", self.operator));
            };
            if params.mu != self.mu {
                return invalid(format!("selection mu {} differs from GA mu {}", params.mu, self.mu));
            }
            match &self.sampler {
                Some(spec) => spec.validate()?,
                None => return invalid(format!("{} needs a sampler", self.operator)),
            }
        }
        Ok(())
    }
}

/// Members with cached fitness values.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Chromosome>,
    fitness: Vec<f64>,
}

impl Population {
    pub fn evaluate(members: Vec<Chromosome>, f: &ObjectiveFunction) -> Result<Self, FunctionError> {
        let fitness = members.iter().map(|m| f.evaluate(m)).collect::<Result<Vec<_>, _>>()?;
        Ok(Population { members, fitness })
    }

    pub fn members(&self) -> &[Chromosome] {
        &self.members
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the first member with maximal fitness.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &f) in self.fitness.iter().enumerate() {
            if best.is_none_or(|b| f > self.fitness[b]) {
                best = Some(i);
            }
        }
        best
    }
}

/// Per-run trace and result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Best fitness found so far, after each generation.
    pub best_fitness_trace: Vec<f64>,
    /// Genotype diversity of the population after each generation.
    pub diversity_trace: Vec<f64>,
    /// First generation whose best-so-far reached the target, or the budget.
    pub converged_at: usize,
    pub best: Chromosome,
    pub best_fitness: f64,
}

impl RunRecord {
    pub fn generations(&self) -> usize {
        self.best_fitness_trace.len()
    }

    pub fn mean_diversity(&self) -> f64 {
        self.diversity_trace.iter().sum::<f64>() / self.diversity_trace.len() as f64
    }
}

fn random_chromosome(nu: usize, rng: &mut StreamRng) -> Chromosome {
    (0..nu).map(|_| rng.gen()).collect()
}

/// `n` uniformly random chromosomes of length `nu`.
pub fn init_population(n: usize, nu: usize, seed: u64) -> Vec<Chromosome> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| random_chromosome(nu, &mut rng)).collect()
}

/// Indices of the `mu` fittest members, ties to the lower index, returned in
/// ascending index order.
pub fn select_classical(fitness: &[f64], mu: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order.into_iter().take(mu).collect();
    chosen.sort_unstable();
    chosen
}

/// Forces a sampled selection to exactly `mu` members: surplus members with
/// the lowest fitness are dropped, missing ones are filled with the fittest
/// unselected. Ties keep the lower index.
pub fn repair_selection(selected: &[bool], fitness: &[f64], mu: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = (0..selected.len()).filter(|&i| selected[i]).collect();
    if chosen.len() > mu {
        // Keep the fittest, lower index first among ties.
        chosen.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
        chosen.truncate(mu);
    } else if chosen.len() < mu {
        let mut rest: Vec<usize> = (0..selected.len()).filter(|&i| !selected[i]).collect();
        rest.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
        chosen.extend(rest.into_iter().take(mu - chosen.len()));
    }
    chosen.sort_unstable();
    chosen
}

/// Selects parents by building the selection QUBO, sampling it and taking
/// the lowest-energy sample, repaired to cardinality `params.mu`.
pub fn select_qe(pop: &Population, params: &SelectionParams, sampler: &SamplerSpec) -> Result<Vec<usize>, GaError> {
    let bqm = build_selection_qubo(pop.fitness(), pop.members(), params)?;
    let set = sample(&bqm, sampler)?;
    let best = set.first().ok_or(GaError::EmptySampleSet)?;
    Ok(repair_selection(&best.assignment, pop.fitness(), params.mu))
}

fn select_qe_in_session(
    pop: &Population,
    params: &SelectionParams,
    session: &mut SamplerSession,
    seed: u64,
) -> Result<Vec<usize>, GaError> {
    let bqm = build_selection_qubo(pop.fitness(), pop.members(), params)?;
    let set = session.sample_seeded(&bqm, seed)?;
    let best = set.first().ok_or(GaError::EmptySampleSet)?;
    Ok(repair_selection(&best.assignment, pop.fitness(), params.mu))
}

/// Each gene copied from `a` or `b` with probability one half.
pub fn crossover_uniform(a: &[bool], b: &[bool], rng: &mut StreamRng) -> Chromosome {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| if rng.gen::<bool>() { x } else { y })
        .collect()
}

/// Flips each bit independently with probability `rate`.
pub fn mutate(x: &[bool], rate: f64, rng: &mut StreamRng) -> Chromosome {
    x.iter().map(|&b| b ^ rng.gen_bool(rate)).collect()
}

/// Mean pairwise Hamming distance, normalised by the chromosome length.
pub fn genotype_diversity(members: &[Chromosome]) -> Result<f64, GaError> {
    let n = members.len();
    if n < 2 {
        return Err(GaError::DiversityNeedsTwo);
    }
    let nu = members[0].len();
    let mut total = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            total += hamming(&members[i], &members[j])?;
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(total as f64 / (pairs * nu.max(1) as f64))
}

/// Runs the genetic algorithm for `config.budget` generations.
pub fn run_ga(config: &GaConfig, f: &ObjectiveFunction) -> Result<RunRecord, GaError> {
    run_ga_observed(config, f, |_, _| {})
}

/// [`run_ga`] calling `observe(generation, population)` for the initial
/// population (generation 0) and after every generation.
pub fn run_ga_observed<O>(config: &GaConfig, f: &ObjectiveFunction, mut observe: O) -> Result<RunRecord, GaError>
where
    O: FnMut(usize, &Population),
{
    config.validate()?;
    if f.dimension != config.chromosome_len {
        return Err(GaError::InvalidConfig(format!(
            "function dimension {} differs from chromosome length {}",
            f.dimension, config.chromosome_len
        )));
    }
    let n = config.population_size;
    let mu = config.mu;
    let mut rng = stream_rng(config.seed, 1);
    let mut session = match (config.operator.is_qe(), &config.sampler) {
        (true, Some(spec)) => Some(SamplerSession::open(spec)?),
        _ => None,
    };

    let mut pop = Population::evaluate(init_population(n, config.chromosome_len, config.seed), f)?;
    observe(0, &pop);
    let start = pop.best_index().expect("population is nonempty");
    let mut best = pop.members()[start].clone();
    let mut best_fitness = pop.fitness()[start];

    let mut best_trace = Vec::with_capacity(config.budget);
    let mut diversity_trace = Vec::with_capacity(config.budget);
    let mut converged_at = None;

    for generation in 1..=config.budget {
        let parents = match (&mut session, &config.selection) {
            (Some(session), Some(params)) => {
                let seed = mix(session.spec().seed ^ config.seed, generation as u64);
                select_qe_in_session(&pop, params, session, seed)?
            }
            _ => select_classical(pop.fitness(), mu),
        };

        let members = pop.members();
        let offspring: Vec<Chromosome> = match config.operator {
            Operator::ClassicPlus | Operator::QePlus => (0..n - mu)
                .map(|_| {
                    let mate = parents[rng.gen_range(0..mu)];
                    crossover_uniform(&best, &members[mate], &mut rng)
                })
                .collect(),
            Operator::ClassicComma => (0..n)
                .map(|k| {
                    let parent = parents[k % mu];
                    let mate = parents[rng.gen_range(0..mu)];
                    crossover_uniform(&members[parent], &members[mate], &mut rng)
                })
                .collect(),
            Operator::QeComma => (0..n)
                .map(|k| {
                    let parent = parents[k % mu];
                    let mate = rng.gen_range(0..n);
                    crossover_uniform(&members[parent], &members[mate], &mut rng)
                })
                .collect(),
        };
        let mut next: Vec<Chromosome> = if config.operator.is_elitist() {
            parents.iter().map(|&p| members[p].clone()).collect()
        } else {
            Vec::with_capacity(n)
        };
        next.extend(
            offspring
                .iter()
                .map(|child| mutate(child, config.mutation_rate, &mut rng)),
        );

        pop = Population::evaluate(next, f)?;
        observe(generation, &pop);
        if let Some(i) = pop.best_index() {
            if pop.fitness()[i] > best_fitness {
                best_fitness = pop.fitness()[i];
                best = pop.members()[i].clone();
            }
        }
        best_trace.push(best_fitness);
        diversity_trace.push(genotype_diversity(pop.members())?);
        if converged_at.is_none() && f.target.is_some_and(|t| best_fitness >= t) {
            converged_at = Some(generation);
        }
    }

    Ok(RunRecord {
        best_fitness_trace: best_trace,
        diversity_trace,
        converged_at: converged_at.unwrap_or(config.budget),
        best,
        best_fitness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    fn bits(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&b| b == 1).collect()
    }

    #[test]
    fn classical_selection() {
        assert_eq!(select_classical(&[5.0, 2.0, 9.0, 1.0], 2), vec![0, 2]);
        assert_eq!(select_classical(&[5.0, 2.0, 9.0, 1.0], 4), vec![0, 1, 2, 3]);
        assert_eq!(select_classical(&[3.0, 3.0, 3.0], 2), vec![0, 1]);
    }

    #[test]
    fn repair_rules() {
        assert_eq!(repair_selection(&bits(&[1, 1, 1]), &[2.0, 1.0, 0.0], 2), vec![0, 1]);
        assert_eq!(repair_selection(&bits(&[0, 0, 1]), &[2.0, 1.0, 0.0], 2), vec![0, 2]);
        assert_eq!(
            repair_selection(&bits(&[0, 0, 0, 0]), &[1.0, 3.0, 3.0, 0.0], 2),
            vec![1, 2]
        );
        assert_eq!(repair_selection(&bits(&[1, 1, 1]), &[4.0, 4.0, 4.0], 1), vec![0]);
        assert_eq!(repair_selection(&bits(&[1, 0, 1]), &[4.0, 4.0, 4.0], 2), vec![0, 2]);
    }

    #[test]
    fn qe_selection_three_members() {
        let f = ObjectiveFunction::onemax(2).unwrap();
        let pop = Population::evaluate(vec![bits(&[1, 1]), bits(&[0, 1]), bits(&[0, 0])], &f).unwrap();
        let params = SelectionParams::new(1.0, 1.0, 1, PenaltyMode::Auto);
        let spec = SamplerSpec::new(SamplerKind::Exhaustive, 1, 0);
        assert_eq!(select_qe(&pop, &params, &spec).unwrap(), vec![0]);
    }

    #[test]
    fn crossover_properties() {
        let a = bits(&[1, 0, 1, 1, 0, 0, 1]);
        let b = bits(&[0, 0, 1, 0, 1, 0, 0]);
        assert_eq!(crossover_uniform(&a, &a, &mut seeded_rng(1)), a);
        let child = crossover_uniform(&a, &b, &mut seeded_rng(2));
        assert!(child.iter().enumerate().all(|(i, &g)| g == a[i] || g == b[i]));
        assert_eq!(child, crossover_uniform(&a, &b, &mut seeded_rng(2)));
    }

    #[test]
    fn mutation_extremes() {
        let x = bits(&[1, 0, 0, 1, 1]);
        assert_eq!(mutate(&x, 0.0, &mut seeded_rng(0)), x);
        assert_eq!(mutate(&x, 1.0, &mut seeded_rng(0)), bits(&[0, 1, 1, 0, 0]));
    }

    #[test]
    fn diversity_examples() {
        assert_eq!(genotype_diversity(&[bits(&[1, 0]), bits(&[1, 0])]).unwrap(), 0.0);
        assert_eq!(genotype_diversity(&[vec![false; 4], vec![true; 4]]).unwrap(), 1.0);
        let d = genotype_diversity(&[bits(&[1, 0]), bits(&[0, 1]), bits(&[1, 1])]).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
        assert!(genotype_diversity(&[bits(&[1])]).is_err());
    }

    #[test]
    fn init_is_seeded() {
        let a = init_population(5, 8, 42);
        assert_eq!(a, init_population(5, 8, 42));
        assert_ne!(a, init_population(5, 8, 43));
        assert_eq!(a.len(), 5);
        assert!(a.iter().all(|c| c.len() == 8));
    }

    #[test]
    fn config_validation() {
        let ok = GaConfig::new(Operator::QePlus, 10, 10, 5);
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.sampler = None;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.mu = 11;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.mutation_rate = 1.5;
        assert!(c.validate().is_err());
        let mut c = GaConfig::new(Operator::ClassicComma, 10, 10, 5);
        c.children_per_parent = Some(3);
        assert!(c.validate().is_err());
        c.children_per_parent = Some(2);
        assert!(c.validate().is_ok());
        assert!(GaConfig::new(Operator::ClassicPlus, 10, 10, 10).validate().is_err());
    }

    #[test]
    fn small_onemax_run() {
        let f = ObjectiveFunction::onemax(10).unwrap();
        let mut config = GaConfig::new(Operator::ClassicPlus, 10, 10, 5);
        config.seed = 3;
        let rec = run_ga(&config, &f).unwrap();
        assert_eq!(rec.generations(), 50);
        assert!(rec.best_fitness_trace.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(rec.best_fitness, 10.0);
        assert!(rec.converged_at < 50);
        assert_eq!(rec, run_ga(&config, &f).unwrap());
    }

    #[test]
    fn budget_one() {
        let f = ObjectiveFunction::onemax(12).unwrap();
        for op in Operator::ALL {
            let mut config = GaConfig::new(op, 8, 12, 4);
            config.budget = 1;
            config.sampler = config.sampler.map(|s| SamplerSpec { num_reads: 4, ..s });
            let rec = run_ga(&config, &f).unwrap();
            assert_eq!(rec.best_fitness_trace.len(), 1);
            assert_eq!(rec.diversity_trace.len(), 1);
            assert_eq!(rec.converged_at, 1);
        }
    }

    #[test]
    fn operator_labels_round_trip() {
        for op in Operator::ALL {
            assert_eq!(op.label().parse::<Operator>().unwrap(), op);
            assert_eq!(serde_json::to_string(&op).unwrap(), format!("\"{}\"", op.label()));
        }
    }
}
