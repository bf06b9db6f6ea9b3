//! Pseudo-Boolean benchmark functions.
//!
//! Fids 4-17 are W-model transformations of OneMax and LeadingOnes, evaluated
//! as `ruggedness(base(neutrality(dummy(x))))`; fid 18 is LABS. Plain OneMax
//! is available as [`FunctionId::OneMax`].
//!
//! | fid | base | dummy | neutrality | ruggedness |
//! |-----|------|-------|------------|------------|
//! | 4 / 11 | OneMax / LeadingOnes | floor(n/2) | 1 | id |
//! | 5 / 12 | OneMax / LeadingOnes | floor(0.9n) | 1 | id |
//! | 6 / 13 | OneMax / LeadingOnes | n | 3 | id |
//! | 7 / 14 | OneMax / LeadingOnes | n | 4 | id |
//! | 8-10 / 15-17 | OneMax / LeadingOnes | n | 1 | r1, r2, r3 |
//! | 18 | LABS | - | - | - |

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::seeded_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("unknown function id {0:?}; expected \"onemax\" or 4..=18")]
    UnknownFid(String),
    #[error("dimension {nu} too small for {fid}")]
    DimensionTooSmall { fid: FunctionId, nu: usize },
    #[error("input has length {actual}, function expects {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("dummy active set must be nonempty, sorted, unique and in range")]
    BadActiveSet,
    #[error("neutrality block size must be at least 1")]
    ZeroBlockSize,
    #[error("value {value} exceeds maximum {max}")]
    ValueOutOfRange { value: usize, max: usize },
    #[error("LABS needs at least 2 bits")]
    LabsTooShort,
}

pub fn onemax(x: &[bool]) -> usize {
    x.iter().filter(|&&b| b).count()
}

pub fn leading_ones(x: &[bool]) -> usize {
    x.iter().take_while(|&&b| b).count()
}

/// Merit factor `n^2 / (2 E)` where `E` is the sum of squared aperiodic
/// autocorrelations of the `+-1` sequence `s_i = 2 x_i - 1`.
pub fn labs(x: &[bool]) -> Result<f64, FunctionError> {
    let n = x.len();
    if n < 2 {
        return Err(FunctionError::LabsTooShort);
    }
    let s: Vec<i64> = x.iter().map(|&b| if b { 1 } else { -1 }).collect();
    let energy: i64 = (1..n)
        .map(|k| {
            let c: i64 = (0..n - k).map(|i| s[i] * s[i + k]).sum();
            c * c
        })
        .sum();
    // The k = n - 1 term is (s_0 s_{n-1})^2 = 1.
    assert!(energy >= 1);
    Ok((n * n) as f64 / (2.0 * energy as f64))
}

/// The subsequence of `x` at the `active` positions.
pub fn apply_dummy(x: &[bool], active: &[usize]) -> Result<Vec<bool>, FunctionError> {
    let sorted = active.windows(2).all(|w| w[0] < w[1]);
    if active.is_empty() || !sorted || active.last().is_some_and(|&i| i >= x.len()) {
        return Err(FunctionError::BadActiveSet);
    }
    Ok(active.iter().map(|&i| x[i]).collect())
}

/// Block-majority reduction: consecutive blocks of `k` bits map to 1 when
/// strictly more than half are ones. A trailing partial block is dropped.
pub fn apply_neutrality(x: &[bool], k: usize) -> Result<Vec<bool>, FunctionError> {
    if k == 0 {
        return Err(FunctionError::ZeroBlockSize);
    }
    Ok(x.chunks_exact(k).map(|block| 2 * onemax(block) > k).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ruggedness {
    Id,
    R1,
    R2,
    R3,
}

/// Remaps a base value `v` in `0..=q`. Every variant fixes `q` and maps
/// `0..q` into `0..q`.
pub fn apply_ruggedness(v: usize, r: Ruggedness, q: usize) -> Result<usize, FunctionError> {
    if v > q {
        return Err(FunctionError::ValueOutOfRange { value: v, max: q });
    }
    if v == q || r == Ruggedness::Id {
        return Ok(v);
    }
    Ok(match r {
        Ruggedness::Id => v,
        Ruggedness::R1 if (q - v).is_multiple_of(2) => v + 1,
        Ruggedness::R1 => v.saturating_sub(1),
        Ruggedness::R2 => 2 * (v / 2),
        Ruggedness::R3 => q - 1 - v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseFunction {
    OneMax,
    LeadingOnes,
    Labs,
}

/// Epistasis layer. Only the identity is used by the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Epistasis {
    #[default]
    Identity,
}

impl Epistasis {
    fn apply(self, x: Vec<bool>) -> Vec<bool> {
        match self {
            Epistasis::Identity => x,
        }
    }
}

/// Benchmark identifier: plain OneMax or a suite fid in `4..=18`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    OneMax,
    Fid(u8),
}

impl FunctionId {
    pub const SUITE: std::ops::RangeInclusive<u8> = 4..=18;

    pub fn fid(fid: u8) -> Result<Self, FunctionError> {
        if Self::SUITE.contains(&fid) {
            Ok(FunctionId::Fid(fid))
        } else {
            Err(FunctionError::UnknownFid(fid.to_string()))
        }
    }

    /// Numeric code; OneMax is 1 as in the usual pseudo-Boolean suite numbering.
    pub fn code(self) -> u64 {
        match self {
            FunctionId::OneMax => 1,
            FunctionId::Fid(f) => f as u64,
        }
    }

    pub fn build(self, nu: usize) -> Result<ObjectiveFunction, FunctionError> {
        match self {
            FunctionId::OneMax => ObjectiveFunction::onemax(nu),
            FunctionId::Fid(f) => make_fid(f, nu, f as u64),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionId::OneMax => f.write_str("onemax"),
            FunctionId::Fid(id) => write!(f, "{id}"),
        }
    }
}

impl FromStr for FunctionId {
    type Err = FunctionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("onemax") {
            return Ok(FunctionId::OneMax);
        }
        s.parse::<u8>()
            .map_err(|_| FunctionError::UnknownFid(s.to_string()))
            .and_then(FunctionId::fid)
    }
}

impl Serialize for FunctionId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FunctionId::OneMax => s.serialize_str("onemax"),
            FunctionId::Fid(f) => s.serialize_u8(*f),
        }
    }
}

impl<'de> Deserialize<'de> for FunctionId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(n) => u8::try_from(n)
                .map_err(|_| FunctionError::UnknownFid(n.to_string()))
                .and_then(FunctionId::fid),
            Raw::Str(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// An immutable benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFunction {
    pub id: FunctionId,
    pub dimension: usize,
    /// Sorted positions that the function reads; `None` reads every bit.
    pub dummy_active: Option<Vec<usize>>,
    pub neutrality_k: usize,
    pub epistasis: Epistasis,
    pub base: BaseFunction,
    pub ruggedness: Ruggedness,
    /// Known optimum value, when there is one.
    pub target: Option<f64>,
    pub instance_seed: u64,
}

impl ObjectiveFunction {
    pub fn onemax(nu: usize) -> Result<Self, FunctionError> {
        if nu == 0 {
            return Err(FunctionError::DimensionTooSmall {
                fid: FunctionId::OneMax,
                nu,
            });
        }
        Ok(ObjectiveFunction {
            id: FunctionId::OneMax,
            dimension: nu,
            dummy_active: None,
            neutrality_k: 1,
            epistasis: Epistasis::Identity,
            base: BaseFunction::OneMax,
            ruggedness: Ruggedness::Id,
            target: Some(nu as f64),
            instance_seed: 1,
        })
    }

    /// Length of the string seen by the base function.
    fn reduced_len(&self) -> usize {
        let after_dummy = self.dummy_active.as_ref().map_or(self.dimension, Vec::len);
        after_dummy / self.neutrality_k
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<f64, FunctionError> {
        if x.len() != self.dimension {
            return Err(FunctionError::LengthMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        let reduced = match &self.dummy_active {
            Some(active) => apply_dummy(x, active)?,
            None => x.to_vec(),
        };
        let reduced = if self.neutrality_k > 1 {
            apply_neutrality(&reduced, self.neutrality_k)?
        } else {
            reduced
        };
        let reduced = self.epistasis.apply(reduced);
        let q = reduced.len();
        match self.base {
            BaseFunction::Labs => labs(&reduced),
            BaseFunction::OneMax => Ok(apply_ruggedness(onemax(&reduced), self.ruggedness, q)? as f64),
            BaseFunction::LeadingOnes => Ok(apply_ruggedness(leading_ones(&reduced), self.ruggedness, q)? as f64),
        }
    }

    /// A string attaining the target: ones on every read position, zeros on
    /// the ignored ones. `None` for functions without a known optimum.
    pub fn optimizer(&self) -> Option<Vec<bool>> {
        self.target?;
        Some(match &self.dummy_active {
            Some(active) => {
                let mut x = vec![false; self.dimension];
                for &i in active {
                    x[i] = true;
                }
                x
            }
            None => vec![true; self.dimension],
        })
    }
}

/// Builds suite function `fid` in dimension `nu`.
///
/// The dummy layer keeps `w` positions chosen by shuffling `0..nu` with a
/// generator seeded by `instance_seed` and sorting the first `w`.
pub fn make_fid(fid: u8, nu: usize, instance_seed: u64) -> Result<ObjectiveFunction, FunctionError> {
    let id = FunctionId::fid(fid)?;
    let too_small = || FunctionError::DimensionTooSmall { fid: id, nu };

    if fid == 18 {
        if nu < 2 {
            return Err(too_small());
        }
        return Ok(ObjectiveFunction {
            id,
            dimension: nu,
            dummy_active: None,
            neutrality_k: 1,
            epistasis: Epistasis::Identity,
            base: BaseFunction::Labs,
            ruggedness: Ruggedness::Id,
            target: None,
            instance_seed,
        });
    }

    let base = if fid <= 10 {
        BaseFunction::OneMax
    } else {
        BaseFunction::LeadingOnes
    };
    // Position within the 7-function block: 0 -> n/2 dummy, 1 -> 0.9n dummy,
    // 2 -> neutrality 3, 3 -> neutrality 4, 4..6 -> r1..r3.
    let variant = (fid - 4) % 7;
    let dummy_w = match variant {
        0 => Some(nu / 2),
        1 => Some(nu * 9 / 10),
        _ => None,
    };
    let neutrality_k = match variant {
        2 => 3,
        3 => 4,
        _ => 1,
    };
    let ruggedness = match variant {
        4 => Ruggedness::R1,
        5 => Ruggedness::R2,
        6 => Ruggedness::R3,
        _ => Ruggedness::Id,
    };

    let dummy_active = match dummy_w {
        Some(w) => {
            if w == 0 {
                return Err(too_small());
            }
            let mut idx: Vec<usize> = (0..nu).collect();
            idx.shuffle(&mut seeded_rng(instance_seed));
            let mut active = idx[..w].to_vec();
            active.sort_unstable();
            Some(active)
        }
        None => None,
    };

    let mut f = ObjectiveFunction {
        id,
        dimension: nu,
        dummy_active,
        neutrality_k,
        epistasis: Epistasis::Identity,
        base,
        ruggedness,
        target: None,
        instance_seed,
    };
    let q = f.reduced_len();
    if q == 0 {
        return Err(too_small());
    }
    f.target = Some(apply_ruggedness(q, ruggedness, q)? as f64);
    Ok(f)
}
