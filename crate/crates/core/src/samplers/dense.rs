use crate::bqm::Bqm;

/// Dense symmetric view of a [`Bqm`] with incrementally maintained local
/// fields, shared by the single-flip samplers.
pub(crate) struct DenseModel {
    pub n: usize,
    linear: Vec<f64>,
    // Row-major n x n, symmetric, zero diagonal.
    coupling: Vec<f64>,
    offset: f64,
}

impl DenseModel {
    pub fn new(bqm: &Bqm) -> Self {
        let n = bqm.num_vars();
        let mut coupling = vec![0.0; n * n];
        for (&(i, j), &c) in bqm.quadratic() {
            coupling[i * n + j] += c;
            coupling[j * n + i] += c;
        }
        DenseModel {
            n,
            linear: bqm.linear().to_vec(),
            coupling,
            offset: bqm.offset(),
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coupling[i * self.n..(i + 1) * self.n]
    }

    /// `field_i = linear_i + sum_j coupling_ij s_j`.
    pub fn fields(&self, state: &[bool]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let row = self.row(i);
                self.linear[i] + state.iter().zip(row).filter(|(s, _)| **s).map(|(_, c)| c).sum::<f64>()
            })
            .collect()
    }

    pub fn energy(&self, state: &[bool]) -> f64 {
        let mut e = self.offset;
        for i in 0..self.n {
            if !state[i] {
                continue;
            }
            e += self.linear[i];
            let row = self.row(i);
            for j in (i + 1)..self.n {
                if state[j] {
                    e += row[j];
                }
            }
        }
        e
    }

    /// Energy change from flipping variable `i`.
    #[inline]
    pub fn flip_delta(state: &[bool], fields: &[f64], i: usize) -> f64 {
        if state[i] {
            -fields[i]
        } else {
            fields[i]
        }
    }

    /// Flip `i` in place and update every local field.
    #[inline]
    pub fn flip(&self, state: &mut [bool], fields: &mut [f64], i: usize) {
        state[i] = !state[i];
        let sign = if state[i] { 1.0 } else { -1.0 };
        for (f, c) in fields.iter_mut().zip(self.row(i)) {
            *f += sign * c;
        }
    }
}
