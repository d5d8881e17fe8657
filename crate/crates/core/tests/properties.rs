mod common;

use common::*;

#[test]
fn scalar_ring_axioms() {
    ring_axioms(CASES).unwrap();
}

#[test]
fn evaluation_respects_operations() {
    evaluation_is_homomorphism(CASES).unwrap();
}

#[test]
fn conjugation_is_an_involution() {
    conjugation_involution(CASES).unwrap();
    real_scalars_are_self_conjugate(CASES).unwrap();
}

#[test]
fn wedge_is_graded_commutative_and_associative() {
    wedge_laws(CASES).unwrap();
}

#[test]
fn differential_is_a_graded_derivation() {
    graded_leibniz(CASES).unwrap();
}

#[test]
fn d_squared_agrees_with_brute_force_jacobi() {
    d_squared_matches_jacobi(CASES).unwrap();
}

#[test]
fn cup_product_ignores_representatives() {
    cup_independent_of_representatives(CASES, &cup_fixture()).unwrap();
}

#[test]
fn metric_verdicts_ignore_scaling() {
    metric_verdicts_scale_invariant(CASES).unwrap();
}

#[test]
fn documents_survive_export() {
    parse_emit_round_trip(CASES).unwrap();
    catalog_round_trip(CASES).unwrap();
}
