//! Binary quadratic models and the parent-selection QUBO.
//!
//! For a population `a_0 .. a_{n-1}` with fitnesses `psi_i`, the selection
//! model is
//!
//! ```text
//! E(s) = sum_i -alpha |psi_i| s_i  +  sum_{i<j} -beta |hamming(a_i, a_j)| s_i s_j
//!        + gamma (sum_i s_i - mu)^2
//! ```
//!
//! and the penalty is expanded with `s_i^2 = s_i` so the model is stored as
//! plain linear terms, upper-triangular couplings and a constant offset.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BqmError {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },
    #[error("empty population")]
    EmptyPopulation,
    #[error("mu = {mu} exceeds population size {n}")]
    MuTooLarge { mu: usize, n: usize },
    #[error("mu must be at least 1")]
    MuZero,
    #[error("{fitnesses} fitness values for {chromosomes} chromosomes")]
    FitnessCountMismatch { fitnesses: usize, chromosomes: usize },
    #[error("invalid quadratic key {0:?}, expected \"i,j\" with i < j")]
    BadQuadraticKey(String),
    #[error("invalid linear key {0:?}")]
    BadLinearKey(String),
    #[error("non-finite coefficient")]
    NonFinite,
}

/// Number of positions where `a` and `b` differ.
pub fn hamming(a: &[bool], b: &[bool]) -> Result<usize, BqmError> {
    if a.len() != b.len() {
        return Err(BqmError::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Upper-triangular binary quadratic model over `{0,1}` variables.
///
/// Linear terms are stored densely (every variable has one, possibly zero).
/// Couplings are keyed by `(i, j)` with `i < j`; zero couplings are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "BqmWire", try_from = "BqmWire")]
pub struct Bqm {
    num_vars: usize,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl Bqm {
    pub fn new(num_vars: usize) -> Self {
        Bqm {
            num_vars,
            linear: vec![0.0; num_vars],
            quadratic: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    pub fn add_linear(&mut self, var: usize, value: f64) -> Result<(), BqmError> {
        self.check_index(var)?;
        self.linear[var] += value;
        Ok(())
    }

    /// Adds `value` to the coupling between `u` and `v`, in either order.
    /// `u == v` folds into the linear term since `s^2 = s`.
    pub fn add_quadratic(&mut self, u: usize, v: usize, value: f64) -> Result<(), BqmError> {
        self.check_index(u)?;
        self.check_index(v)?;
        if u == v {
            self.linear[u] += value;
            return Ok(());
        }
        let key = if u < v { (u, v) } else { (v, u) };
        *self.quadratic.entry(key).or_insert(0.0) += value;
        Ok(())
    }

    pub fn get_quadratic(&self, u: usize, v: usize) -> Option<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.quadratic.get(&key).copied()
    }

    /// `offset + sum_i linear_i s_i + sum_{i<j} quadratic_ij s_i s_j`.
    pub fn energy(&self, assignment: &[bool]) -> Result<f64, BqmError> {
        if assignment.len() != self.num_vars {
            return Err(BqmError::LengthMismatch {
                expected: self.num_vars,
                actual: assignment.len(),
            });
        }
        let mut e = self.offset;
        for (c, &s) in self.linear.iter().zip(assignment) {
            if s {
                e += c;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if assignment[i] && assignment[j] {
                e += c;
            }
        }
        Ok(e)
    }

    /// Mean absolute value of the nonzero linear and quadratic coefficients,
    /// or `None` when every coefficient is zero.
    pub fn mean_abs_coefficient(&self) -> Option<f64> {
        let (sum, count) = self
            .linear
            .iter()
            .chain(self.quadratic.values())
            .filter(|c| **c != 0.0)
            .fold((0.0, 0usize), |(s, n), c| (s + c.abs(), n + 1));
        (count > 0).then(|| sum / count as f64)
    }

    fn check_index(&self, var: usize) -> Result<(), BqmError> {
        if var >= self.num_vars {
            return Err(BqmError::IndexOutOfRange {
                index: var,
                num_vars: self.num_vars,
            });
        }
        Ok(())
    }
}

pub fn energy(bqm: &Bqm, assignment: &[bool]) -> Result<f64, BqmError> {
    bqm.energy(assignment)
}

/// Flat record used on the external-sampler wire:
/// `{num_vars, linear: {"i": c}, quadratic: {"i,j": c}, offset}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BqmWire {
    pub num_vars: usize,
    #[serde(default)]
    pub linear: BTreeMap<String, f64>,
    #[serde(default)]
    pub quadratic: BTreeMap<String, f64>,
    #[serde(default)]
    pub offset: f64,
}

impl From<Bqm> for BqmWire {
    fn from(bqm: Bqm) -> Self {
        BqmWire {
            num_vars: bqm.num_vars,
            linear: bqm
                .linear
                .iter()
                .enumerate()
                .map(|(i, &c)| (i.to_string(), c))
                .collect(),
            quadratic: bqm
                .quadratic
                .iter()
                .map(|(&(i, j), &c)| (format!("{i},{j}"), c))
                .collect(),
            offset: bqm.offset,
        }
    }
}

impl TryFrom<BqmWire> for Bqm {
    type Error = BqmError;

    fn try_from(wire: BqmWire) -> Result<Self, Self::Error> {
        let mut bqm = Bqm::new(wire.num_vars);
        if !wire.offset.is_finite() {
            return Err(BqmError::NonFinite);
        }
        bqm.offset = wire.offset;
        for (key, c) in wire.linear {
            let i: usize = key.trim().parse().map_err(|_| BqmError::BadLinearKey(key.clone()))?;
            if !c.is_finite() {
                return Err(BqmError::NonFinite);
            }
            bqm.add_linear(i, c)?;
        }
        for (key, c) in wire.quadratic {
            let bad = || BqmError::BadQuadraticKey(key.clone());
            let (i, j) = key.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            if i >= j {
                return Err(bad());
            }
            if !c.is_finite() {
                return Err(BqmError::NonFinite);
            }
            bqm.add_quadratic(i, j, c)?;
        }
        Ok(bqm)
    }
}

/// How the cardinality penalty weight `gamma` is chosen.
///
/// With `alpha >= 0`, any `gamma` larger than the best gain one member can
/// add to a `mu`-subset makes every minimum-energy assignment select exactly
/// `mu` members. `Auto` uses the tightest such bound computed from the actual
/// distances; `WorstCase` bounds every distance by `nu`. A smaller `gamma`
/// lowers the barriers between feasible selections, which matters for
/// single-flip samplers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyMode {
    /// `gamma = 1`, the literal selection energy.
    Paper,
    /// `gamma = 1 + max_i (alpha |psi_i| + |beta| * sum of the mu largest
    /// distances from member i)`.
    #[default]
    Auto,
    /// `gamma = 1 + alpha max|psi| + |beta| nu (n - 1)`.
    WorstCase,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: usize,
    #[serde(default)]
    pub penalty_mode: PenaltyMode,
}

impl SelectionParams {
    pub fn new(alpha: f64, beta: f64, mu: usize, penalty_mode: PenaltyMode) -> Self {
        SelectionParams {
            alpha,
            beta,
            mu,
            penalty_mode,
        }
    }

    /// Penalty weight for a population with fitnesses `fitnesses`, chromosome
    /// length `nu` and pairwise distances `distance(i, j)`.
    pub fn penalty_weight<D>(&self, fitnesses: &[f64], nu: usize, distance: D) -> f64
    where
        D: Fn(usize, usize) -> f64,
    {
        let n = fitnesses.len();
        match self.penalty_mode {
            PenaltyMode::Paper => 1.0,
            PenaltyMode::Fixed(g) => g,
            PenaltyMode::WorstCase => {
                let max_fit = fitnesses.iter().fold(0.0f64, |m, f| m.max(f.abs()));
                1.0 + self.alpha.abs() * max_fit + self.beta.abs() * nu as f64 * n.saturating_sub(1) as f64
            }
            PenaltyMode::Auto => {
                let mut worst = 0.0f64;
                let mut row = Vec::with_capacity(n);
                for (i, fit) in fitnesses.iter().enumerate() {
                    row.clear();
                    row.extend((0..n).filter(|&j| j != i).map(|j| distance(i, j)));
                    row.sort_by(|a, b| b.total_cmp(a));
                    let diversity: f64 = row.iter().take(self.mu).sum();
                    worst = worst.max(self.alpha.abs() * fit.abs() + self.beta.abs() * diversity);
                }
                1.0 + worst
            }
        }
    }
}

/// Builds the selection QUBO for a population.
pub fn build_selection_qubo<C: AsRef<[bool]>>(
    fitnesses: &[f64],
    chromosomes: &[C],
    params: &SelectionParams,
) -> Result<Bqm, BqmError> {
    let n = chromosomes.len();
    if n == 0 {
        return Err(BqmError::EmptyPopulation);
    }
    if fitnesses.len() != n {
        return Err(BqmError::FitnessCountMismatch {
            fitnesses: fitnesses.len(),
            chromosomes: n,
        });
    }
    if params.mu == 0 {
        return Err(BqmError::MuZero);
    }
    if params.mu > n {
        return Err(BqmError::MuTooLarge { mu: params.mu, n });
    }
    let nu = chromosomes[0].as_ref().len();
    for c in chromosomes {
        if c.as_ref().len() != nu {
            return Err(BqmError::LengthMismatch {
                expected: nu,
                actual: c.as_ref().len(),
            });
        }
    }
    if fitnesses.iter().any(|f| !f.is_finite()) {
        return Err(BqmError::NonFinite);
    }

    let mut distances = vec![0.0; n * n];
    for i in 0..n {
        let a = chromosomes[i].as_ref();
        for j in (i + 1)..n {
            let d = hamming(a, chromosomes[j].as_ref())? as f64;
            distances[i * n + j] = d;
            distances[j * n + i] = d;
        }
    }
    let gamma = params.penalty_weight(fitnesses, nu, |i, j| distances[i * n + j]);
    let mu = params.mu as f64;

    let mut bqm = Bqm::new(n);
    for (i, f) in fitnesses.iter().enumerate() {
        bqm.linear[i] = -params.alpha * f.abs() + gamma * (1.0 - 2.0 * mu);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            bqm.quadratic
                .insert((i, j), -params.beta * distances[i * n + j] + 2.0 * gamma);
        }
    }
    bqm.offset = gamma * mu * mu;
    Ok(bqm)
}
