//! The external sampler adapter driven through the reference child process.

use qega::samplers::{sample, ExternalSampler};
use qega::{build_selection_qubo, Bqm, PenaltyMode, SamplerError, SamplerKind, SamplerSpec, SelectionParams};

const REFERENCE: &str = env!("CARGO_BIN_EXE_reference-sampler");

fn instance() -> Bqm {
    let members: Vec<Vec<bool>> = (0..8u32)
        .map(|i| (0..10).map(|b| (i * 7 + b * 3) % 5 < 2).collect())
        .collect();
    let fitness: Vec<f64> = members
        .iter()
        .map(|m| m.iter().filter(|&&b| b).count() as f64)
        .collect();
    build_selection_qubo(
        &fitness,
        &members,
        &SelectionParams::new(10.0, 1.0, 3, PenaltyMode::Auto),
    )
    .unwrap()
}

#[test]
fn reference_child_matches_in_process_exhaustive() {
    let bqm = instance();
    let cmd = format!("{REFERENCE} --sampler exhaustive");
    let external = sample(&bqm, &SamplerSpec::external(cmd, 1, 0)).unwrap();
    let oracle = sample(&bqm, &SamplerSpec::new(SamplerKind::Exhaustive, 1, 0)).unwrap();
    assert_eq!(external.first().unwrap().assignment, oracle.first().unwrap().assignment);
    assert!((external.min_energy().unwrap() - oracle.min_energy().unwrap()).abs() < 1e-9);
}

#[test]
fn session_serves_many_requests() {
    let bqm = instance();
    let mut child = ExternalSampler::spawn(&format!("{REFERENCE} --sampler steepest_descent")).unwrap();
    let a = child.sample(&bqm, 6, 1).unwrap();
    let b = child.sample(&bqm, 6, 1).unwrap();
    let c = child.sample(&bqm, 6, 2).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 6);
    assert_eq!(c.len(), 6);
}

fn failure(mode: &str) -> SamplerError {
    let spec = SamplerSpec::external(format!("{REFERENCE} --mode {mode}"), 3, 0);
    sample(&instance(), &spec).unwrap_err()
}

#[test]
fn broken_children_are_reported() {
    assert!(matches!(failure("malformed"), SamplerError::Protocol { .. }));
    assert!(matches!(failure("wrong-id"), SamplerError::Protocol { .. }));
    assert!(matches!(failure("empty"), SamplerError::Protocol { .. }));
    assert!(matches!(failure("wrong-energy"), SamplerError::EnergyMismatch { .. }));
}
