//! Steepest descent over the single-flip neighbourhood.

use rand::Rng;

use super::dense::DenseModel;
use crate::rng::StreamRng;

// Flips must improve by more than this to count; guards against cycling on
// rounding noise in the incrementally updated fields.
const IMPROVEMENT_EPS: f64 = 1e-12;

/// Repeatedly flips the variable with the largest energy decrease (lowest
/// index on ties) until no single flip improves.
pub(crate) fn descend(model: &DenseModel, mut state: Vec<bool>) -> Vec<bool> {
    let mut fields = model.fields(&state);
    loop {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..model.n {
            let delta = DenseModel::flip_delta(&state, &fields, i);
            if delta < -IMPROVEMENT_EPS && best.is_none_or(|(_, d)| delta < d) {
                best = Some((i, delta));
            }
        }
        match best {
            Some((i, _)) => model.flip(&mut state, &mut fields, i),
            None => return state,
        }
    }
}

pub(crate) fn descend_from_random(model: &DenseModel, rng: &mut StreamRng) -> Vec<bool> {
    let start: Vec<bool> = (0..model.n).map(|_| rng.gen()).collect();
    descend(model, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqm::Bqm;

    #[test]
    fn constant_model_keeps_start() {
        let model = DenseModel::new(&Bqm::new(5));
        let start = vec![true, false, true, true, false];
        assert_eq!(descend(&model, start.clone()), start);
    }

    #[test]
    fn single_variable_from_either_start() {
        let mut bqm = Bqm::new(1);
        bqm.add_linear(0, -2.0).unwrap();
        let model = DenseModel::new(&bqm);
        assert_eq!(descend(&model, vec![false]), vec![true]);
        assert_eq!(descend(&model, vec![true]), vec![true]);
    }

    #[test]
    fn takes_largest_decrease_first() {
        // Flipping 1 first (gain 5) blocks flipping 0 through the coupling.
        let mut bqm = Bqm::new(2);
        bqm.add_linear(0, -3.0).unwrap();
        bqm.add_linear(1, -5.0).unwrap();
        bqm.add_quadratic(0, 1, 10.0).unwrap();
        let model = DenseModel::new(&bqm);
        assert_eq!(descend(&model, vec![false, false]), vec![false, true]);
    }
}
