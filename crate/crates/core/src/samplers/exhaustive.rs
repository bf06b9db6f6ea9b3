//! Brute-force enumeration of every assignment, returning the `k` best.
//!
//! The state space is split into fixed-size chunks by the high variables;
//! each chunk is walked in Gray-code order over the low variables so one flip
//! separates successive states. Chunk boundaries do not depend on the thread
//! count, and the retained candidates are re-scored exactly before the final
//! sort, so the output is deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::dense::DenseModel;
use super::{SampleRecord, SampleSet, SamplerError};
use crate::bqm::Bqm;
use crate::par::Execution;

/// Largest model the enumerator accepts.
pub const MAX_EXHAUSTIVE_VARS: usize = 24;

const CHUNK_BITS: usize = 14;

#[derive(Clone, Copy)]
struct Candidate {
    energy: f64,
    mask: u32,
}

impl Candidate {
    // Variable 0 ends up in the top bit, so numeric order equals the
    // lexicographic order of the assignment vector.
    fn lex_key(&self) -> u32 {
        self.mask.reverse_bits()
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.energy
            .total_cmp(&other.energy)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

fn push_bounded(heap: &mut BinaryHeap<Candidate>, cand: Candidate, k: usize) {
    if heap.len() < k {
        heap.push(cand);
    } else if let Some(worst) = heap.peek() {
        if cand < *worst {
            heap.pop();
            heap.push(cand);
        }
    }
}

fn mask_to_state(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn scan_chunk(model: &DenseModel, chunk: usize, low_bits: usize, k: usize) -> Vec<Candidate> {
    let n = model.n;
    let mut mask = (chunk as u32) << low_bits;
    let mut state = mask_to_state(mask, n);
    let mut fields = model.fields(&state);
    let mut energy = model.energy(&state);
    let mut heap = BinaryHeap::with_capacity(k + 1);
    push_bounded(&mut heap, Candidate { energy, mask }, k);
    for step in 1u64..(1u64 << low_bits) {
        let bit = step.trailing_zeros() as usize;
        energy += DenseModel::flip_delta(&state, &fields, bit);
        model.flip(&mut state, &mut fields, bit);
        mask ^= 1 << bit;
        push_bounded(&mut heap, Candidate { energy, mask }, k);
    }
    heap.into_vec()
}

pub(crate) fn enumerate_best(bqm: &Bqm, num_reads: usize, exec: Execution) -> Result<SampleSet, SamplerError> {
    let n = bqm.num_vars();
    if n > MAX_EXHAUSTIVE_VARS {
        return Err(SamplerError::TooManyVariables {
            num_vars: n,
            max: MAX_EXHAUSTIVE_VARS,
        });
    }
    let total = 1usize << n;
    let k = num_reads.min(total);
    let model = DenseModel::new(bqm);
    let low_bits = n.min(CHUNK_BITS);
    let chunks = 1usize << (n - low_bits);

    let per_chunk = exec.map_indexed(chunks, |c| scan_chunk(&model, c, low_bits, k));
    let mut merged = BinaryHeap::with_capacity(k + 1);
    for cand in per_chunk.into_iter().flatten() {
        push_bounded(&mut merged, cand, k);
    }

    let records = merged
        .into_vec()
        .into_iter()
        .map(|c| {
            let assignment = mask_to_state(c.mask, n);
            let energy = bqm.energy(&assignment)?;
            Ok(SampleRecord {
                assignment,
                energy,
                num_occurrences: 1,
            })
        })
        .collect::<Result<Vec<_>, SamplerError>>()?;
    Ok(SampleSet::from_records(records))
}
