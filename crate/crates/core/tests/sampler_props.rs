use proptest::prelude::*;
use qega::samplers::{sample, sample_with, SamplerKind, SamplerSpec};
use qega::{Bqm, Execution};

fn random_bqm() -> impl Strategy<Value = Bqm> {
    (1usize..9).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec(-5.0f64..5.0, n * (n - 1) / 2),
            -3.0f64..3.0,
        )
            .prop_map(move |(lin, quad, off)| {
                let mut b = Bqm::new(n);
                for (i, c) in lin.into_iter().enumerate() {
                    b.add_linear(i, c).unwrap();
                }
                let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
                for ((i, j), c) in pairs.zip(quad) {
                    b.add_quadratic(i, j, c).unwrap();
                }
                b.add_offset(off);
                b
            })
    })
}

/// Minimum energy by direct enumeration, independent of the Gray-code path.
fn brute_force_min(bqm: &Bqm) -> f64 {
    let n = bqm.num_vars();
    (0u32..1 << n)
        .map(|mask| {
            let s: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            bqm.energy(&s).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

fn kinds() -> impl Strategy<Value = SamplerKind> {
    prop_oneof![
        Just(SamplerKind::SimulatedAnnealing),
        Just(SamplerKind::SteepestDescent),
        Just(SamplerKind::Random),
        Just(SamplerKind::Exhaustive),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn no_sampler_beats_exhaustive(bqm in random_bqm(), kind in kinds(), seed in any::<u64>()) {
        let oracle = brute_force_min(&bqm);
        let exhaustive = sample(&bqm, &SamplerSpec::new(SamplerKind::Exhaustive, 1, 0)).unwrap();
        prop_assert!((exhaustive.min_energy().unwrap() - oracle).abs() < 1e-9);
        let set = sample(&bqm, &SamplerSpec::new(kind, 8, seed)).unwrap();
        prop_assert!(set.min_energy().unwrap() >= oracle - 1e-9);
    }

    #[test]
    fn records_are_sorted_and_energies_verified(bqm in random_bqm(), kind in kinds(), seed in any::<u64>()) {
        let set = sample(&bqm, &SamplerSpec::new(kind, 6, seed)).unwrap();
        let expected = match kind {
            SamplerKind::Exhaustive => 6.min(1 << bqm.num_vars()),
            _ => 6,
        };
        prop_assert_eq!(set.len(), expected);
        for r in set.records() {
            prop_assert!((bqm.energy(&r.assignment).unwrap() - r.energy).abs() < 1e-9);
        }
        for w in set.records().windows(2) {
            prop_assert!(w[0].energy <= w[1].energy);
        }
    }

    #[test]
    fn steepest_descent_returns_one_flip_local_minima(bqm in random_bqm(), seed in any::<u64>()) {
        let set = sample(&bqm, &SamplerSpec::new(SamplerKind::SteepestDescent, 5, seed)).unwrap();
        for r in set.records() {
            for i in 0..bqm.num_vars() {
                let mut s = r.assignment.clone();
                s[i] = !s[i];
                prop_assert!(bqm.energy(&s).unwrap() >= r.energy - 1e-9);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_schedule_independent(bqm in random_bqm(), kind in kinds(), seed in any::<u64>()) {
        let spec = SamplerSpec::new(kind, 7, seed);
        let a = sample_with(&bqm, &spec, Execution::Sequential).unwrap();
        let b = sample_with(&bqm, &spec, Execution::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn exhaustive_returns_distinct_best_states() {
    let mut bqm = Bqm::new(10);
    for i in 0..10 {
        bqm.add_linear(i, (i as f64 - 4.5) * 0.3).unwrap();
        for j in (i + 1)..10 {
            bqm.add_quadratic(i, j, ((i * 7 + j * 3) % 5) as f64 - 2.0).unwrap();
        }
    }
    let set = sample(&bqm, &SamplerSpec::new(SamplerKind::Exhaustive, 25, 0)).unwrap();
    let mut all: Vec<f64> = (0u32..1 << 10)
        .map(|m| {
            bqm.energy(&(0..10).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
                .unwrap()
        })
        .collect();
    all.sort_by(f64::total_cmp);
    let got: Vec<f64> = set.records().iter().map(|r| r.energy).collect();
    for (g, w) in got.iter().zip(&all[..25]) {
        assert!((g - w).abs() < 1e-9);
    }
    let mut states: Vec<_> = set.records().iter().map(|r| r.assignment.clone()).collect();
    states.dedup();
    assert_eq!(states.len(), 25);
}

#[test]
fn exhaustive_guard() {
    let bqm = Bqm::new(qega::samplers::MAX_EXHAUSTIVE_VARS + 1);
    assert!(sample(&bqm, &SamplerSpec::new(SamplerKind::Exhaustive, 1, 0)).is_err());
}

#[test]
fn constant_landscape_gives_zero_energies() {
    let bqm = Bqm::new(6);
    for kind in [
        SamplerKind::SimulatedAnnealing,
        SamplerKind::SteepestDescent,
        SamplerKind::Random,
        SamplerKind::Exhaustive,
    ] {
        let set = sample(&bqm, &SamplerSpec::new(kind, 4, 3)).unwrap();
        assert!(set.records().iter().all(|r| r.energy == 0.0), "{kind:?}");
    }
}
