mod common;

use common::properties;

fn check(result: Result<u32, String>) {
    let cases = result.unwrap_or_else(|e| panic!("{e}"));
    assert!(cases >= properties::CASES);
}

#[test]
fn norm_axioms() {
    check(properties::norm_axioms());
}

#[test]
fn birkhoff_homogeneity() {
    check(properties::birkhoff_homogeneity());
}

#[test]
fn grid_refinement_monotonicity() {
    check(properties::grid_monotonicity());
}

#[test]
fn witness_reproducibility() {
    check(properties::witness_reproducibility());
}

#[test]
fn weight_scaling_linearity() {
    check(properties::weight_scaling());
}
