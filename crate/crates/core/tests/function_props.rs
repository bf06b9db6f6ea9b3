use proptest::prelude::*;
use qega::functions::{apply_neutrality, apply_ruggedness, labs, leading_ones, onemax, Ruggedness};
use qega::FunctionId;
use rand::Rng;

const NU: usize = 50;

fn with_target() -> Vec<qega::ObjectiveFunction> {
    (4u8..=17).map(|f| FunctionId::Fid(f).build(NU).unwrap()).collect()
}

#[test]
fn optimizers_attain_targets_and_random_strings_never_exceed_them() {
    let mut rng = qega::rng::seeded_rng(2024);
    let suite = with_target();
    for f in &suite {
        let target = f.target.expect("fids 4..=17 have targets");
        assert_eq!(f.evaluate(&f.optimizer().unwrap()).unwrap(), target, "fid {}", f.id);
    }
    for _ in 0..10_000 {
        let x: Vec<bool> = (0..NU).map(|_| rng.gen()).collect();
        for f in &suite {
            let v = f.evaluate(&x).unwrap();
            assert!((0.0..=f.target.unwrap()).contains(&v), "fid {} gave {v}", f.id);
        }
    }
}

#[test]
fn fid_18_has_no_target_and_is_positive() {
    let f = FunctionId::Fid(18).build(NU).unwrap();
    assert!(f.target.is_none());
    assert!(f.optimizer().is_none());
    assert!(f.evaluate(&[true; NU]).unwrap() > 0.0);
}

/// Reference LABS merit factor straight from the definition, over +-1 spins.
fn labs_oracle(x: &[bool]) -> f64 {
    let s: Vec<f64> = x.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
    let n = s.len();
    let e: f64 = (1..n)
        .map(|k| (0..n - k).map(|i| s[i] * s[i + k]).sum::<f64>().powi(2))
        .sum();
    (n * n) as f64 / (2.0 * e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn labs_symmetries(x in prop::collection::vec(any::<bool>(), NU)) {
        let f = labs(&x).unwrap();
        let complement: Vec<bool> = x.iter().map(|b| !b).collect();
        let reversed: Vec<bool> = x.iter().rev().copied().collect();
        prop_assert_eq!(f, labs(&complement).unwrap());
        prop_assert_eq!(f, labs(&reversed).unwrap());
        prop_assert!((f - labs_oracle(&x)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dummy_positions_are_ignored(x in prop::collection::vec(any::<bool>(), NU), pick in any::<prop::sample::Index>()) {
        for fid in [4u8, 5] {
            let f = FunctionId::Fid(fid).build(NU).unwrap();
            let active = f.dummy_active.clone().unwrap();
            let inactive: Vec<usize> = (0..NU).filter(|i| !active.contains(i)).collect();
            let i = inactive[pick.index(inactive.len())];
            let mut y = x.clone();
            y[i] = !y[i];
            prop_assert_eq!(f.evaluate(&x).unwrap(), f.evaluate(&y).unwrap());
        }
    }

    #[test]
    fn majority_preserving_flips_are_neutral(x in prop::collection::vec(any::<bool>(), NU), pos in 0usize..NU) {
        for fid in [6u8, 7, 13, 14] {
            let f = FunctionId::Fid(fid).build(NU).unwrap();
            let k = f.neutrality_k;
            let mut y = x.clone();
            y[pos] = !y[pos];
            if apply_neutrality(&x, k).unwrap() == apply_neutrality(&y, k).unwrap() {
                prop_assert_eq!(f.evaluate(&x).unwrap(), f.evaluate(&y).unwrap());
            }
        }
    }

    #[test]
    fn ruggedness_fixes_optimum_and_stays_below(q in 1usize..60, v in 0usize..60) {
        for r in [Ruggedness::Id, Ruggedness::R1, Ruggedness::R2, Ruggedness::R3] {
            prop_assert_eq!(apply_ruggedness(q, r, q).unwrap(), q);
            if v < q {
                prop_assert!(apply_ruggedness(v, r, q).unwrap() < q);
            } else if v > q {
                prop_assert!(apply_ruggedness(v, r, q).is_err());
            }
        }
    }

    #[test]
    fn base_functions_agree_with_definitions(x in prop::collection::vec(any::<bool>(), 0..40)) {
        prop_assert_eq!(onemax(&x), x.iter().filter(|&&b| b).count());
        let lo = x.iter().position(|&b| !b).unwrap_or(x.len());
        prop_assert_eq!(leading_ones(&x), lo);
    }
}
