//! Single-flip Metropolis simulated annealing with a geometric schedule.

use rand::seq::SliceRandom;
use rand::Rng;

use super::dense::DenseModel;
use super::Schedule;
use crate::bqm::Bqm;
use crate::rng::StreamRng;

/// Self-scaling schedule: 1000 sweeps, inverse temperature geometric from
/// `0.1 / m` to `100 / m` where `m` is the mean absolute nonzero coefficient.
///
/// Penalty terms inflate `m` well above the energy gaps between feasible
/// selections, so the cold end sits three decades below the mean scale.
pub fn default_schedule(bqm: &Bqm) -> Schedule {
    let scale = bqm.mean_abs_coefficient().unwrap_or(1.0);
    Schedule {
        sweeps: 1000,
        beta_start: 0.1 / scale,
        beta_end: 100.0 / scale,
    }
}

pub fn beta_at(schedule: &Schedule, sweep: usize) -> f64 {
    if schedule.sweeps <= 1 {
        return schedule.beta_start;
    }
    let frac = sweep as f64 / (schedule.sweeps - 1) as f64;
    schedule.beta_start * (schedule.beta_end / schedule.beta_start).powf(frac)
}

pub(crate) fn anneal_once(model: &DenseModel, schedule: &Schedule, rng: &mut StreamRng) -> Vec<bool> {
    let n = model.n;
    let mut state: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut fields = model.fields(&state);
    let mut order: Vec<usize> = (0..n).collect();
    for sweep in 0..schedule.sweeps {
        let beta = beta_at(schedule, sweep);
        order.shuffle(rng);
        for &i in &order {
            let delta = DenseModel::flip_delta(&state, &fields, i);
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta * beta).exp();
            if accept {
                model.flip(&mut state, &mut fields, i);
            }
        }
    }
    state
}
