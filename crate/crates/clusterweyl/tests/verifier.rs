use clusterweyl::constructions::{build_qm, seq_r, NamedSequence};
use clusterweyl::quiver::VertexId;
use clusterweyl::roots::{CartanData, CartanType};
use clusterweyl::seed::{ensemble_map, is_trivial_sequence, MutationSequence, Seed, Tracking};
use clusterweyl::verifier::*;
use serde_json::json;

fn cd(t: CartanType, n: usize) -> CartanData {
    CartanData::of(t, n).unwrap()
}

#[test]
fn a_single_mutation_moves_the_peripheral_map() {
    let q = build_qm(&cd(CartanType::A, 2), None, 3).unwrap();
    let t = Tracking { a: true, x: true, ..Default::default() };
    let s0 = Seed::new(&q, t);
    let p0 = ensemble_map(&s0).unwrap();
    let p1 = ensemble_map(&s0.mutate(&VertexId::v(1, 2)).unwrap()).unwrap();
    assert_ne!(p0, p1);
    let pr = ensemble_map(&s0.apply(&seq_r(1, 1, 3).unwrap().sequence).unwrap()).unwrap();
    assert_eq!(p0, pr);
}

#[test]
fn a_single_mutation_is_not_an_automorphism() {
    let q = build_qm(&cd(CartanType::C, 3), None, 3).unwrap();
    let seq = NamedSequence { tag: "mu".into(), params: json!({}), sequence: MutationSequence::mutations([VertexId::v(2, 2)]) };
    let c = check_sequence_preserves(&q, &seq);
    assert!(!c.passed());
    assert!(c.witness["diff"].as_array().is_some_and(|d| !d.is_empty()));
}

#[test]
fn wrong_braid_order_is_not_trivial() {
    let q = build_qm(&cd(CartanType::A, 2), None, 3).unwrap();
    let r12 = seq_r(1, 1, 3).unwrap().sequence.then(&seq_r(2, 1, 3).unwrap().sequence);
    assert!(!is_trivial_sequence(&q, &r12.power(2)).unwrap());
    assert!(is_trivial_sequence(&q, &r12.power(3)).unwrap());
}

#[test]
fn certificates_are_reproducible() {
    let c = cd(CartanType::B, 2);
    let a = check_braid(&c, 3, false).without_timing().to_json_string();
    let b = check_braid(&c, 3, false).without_timing().to_json_string();
    assert_eq!(a, b);
    let q = build_qm(&cd(CartanType::A, 2), None, 2).unwrap();
    let a = check_separation(&q, "Q2(A2)", 8, 10, 5).without_timing();
    let b = check_separation(&q, "Q2(A2)", 8, 10, 5).without_timing();
    assert_eq!(a, b);
}

#[test]
fn symbolic_and_tropical_braid_agree_on_g2() {
    let c = cd(CartanType::G, 2);
    assert!(check_braid(&c, 2, false).passed());
    assert!(check_braid(&c, 2, true).passed());
}

#[test]
fn execution_convention_for_d_a1_squared_fails() {
    assert!(check_braid_weyl_d(BraidWeylConvention::Composition).passed());
    assert!(!check_braid_weyl_d(BraidWeylConvention::Execution).passed());
}

#[test]
fn decorated_closed_forms() {
    assert!(check_closed_forms(&cd(CartanType::C, 3), 3, FormMode::Decorated).passed());
    assert!(check_f_polynomial(&cd(CartanType::A, 2), 3).passed());
}
