//! The full default property suite on builder-produced sequences, the
//! stabilization monotonicity invariants, and the golden export files.

mod common;

use common::ord;
use hwalks::analysis::{
    check_semi_constant, run_lemma_suite, verify_family_coherence, xi_star, LemmaId, SamplingPlan,
};
use hwalks::cseq::CSequence;
use hwalks::game::{build_by_game, SeededAdversary};
use hwalks::ordinal::Ordinal;
use hwalks::stepped::SteppedUp;
use hwalks::walk::{walk, Sign};

/// Builder-produced coherent sequences report zero failures across the
/// whole property list.
#[test]
fn full_suite_on_builders() {
    let mut adversary = SeededAdversary::new(5);
    let stepped = SteppedUp::new(
        CSequence::order_minimal(1, ord("w^2")).unwrap(),
        CSequence::order_minimal(1, ord("w")).unwrap(),
        hwalks::cseq::landmark_grid(&ord("w^2"), 5)
            .into_iter()
            .filter(|o| o.is_limit())
            .collect(),
        ord("w"),
    )
    .unwrap();
    let universes = vec![
        CSequence::order_minimal(2, ord("w^2")).unwrap(),
        CSequence::maximal(2, ord("w^2")).unwrap(),
        build_by_game(2, 45, &mut adversary, 5).unwrap(),
        CSequence::from_stepped(stepped),
    ];
    for seq in &universes {
        let plan = SamplingPlan::default_for(seq);
        let report = run_lemma_suite(seq, &plan, &LemmaId::ALL).unwrap();
        assert!(
            report.all_pass(),
            "failures on {seq:?}:\n{}",
            report.render_lines()
        );
        assert!(
            report.instances.len() > 100,
            "plan produced too few instances"
        );
    }
}

/// A stabilized verdict never flips when the budget grows.
#[test]
fn stabilization_is_monotone_in_budget() {
    let seq = CSequence::maximal(2, ord("w^2")).unwrap();
    let family = [ord("w*2"), ord("w*3"), ord("w*4")];
    let alpha = ord("w*2");
    for confirm in [4usize, 8, 14] {
        let mut plan = SamplingPlan::default_for(&seq);
        plan.min_confirm = confirm;
        plan.precheck_coherence = false;
        let report = verify_family_coherence(&seq, &family, &alpha, &plan).unwrap();
        assert!(report.stabilized(), "budget {confirm}: {report:?}");
    }
}

/// An analytic threshold is never refuted by sampling: every sample above
/// it agrees, however many are taken.
#[test]
fn analytic_thresholds_are_never_refuted() {
    let seq = CSequence::order_minimal(2, ord("w^2")).unwrap();
    let plan = SamplingPlan::default_for(&seq);
    let alpha = ord("w*3");
    let gamma = [ord("w*4"), ord("w*4+3")];
    let threshold = xi_star(&seq, &alpha, &gamma, &plan).unwrap();
    assert!(threshold.analytic);
    let report = check_semi_constant(
        |xi| {
            let tree = walk(&seq, Sign::Plus, xi, &gamma, plan.cap)?;
            Ok(hwalks::chars::resh_of_tree(&tree))
        },
        &alpha,
        Some(threshold.value),
        24,
        24,
    )
    .unwrap();
    assert!(report.stabilized(), "{report:?}");
}

/// The JSON and DOT exports match the golden files byte for byte.
#[test]
fn golden_exports() {
    let seq = CSequence::maximal(2, ord("w^2")).unwrap();
    let tree = walk(
        &seq,
        Sign::Plus,
        &ord("w"),
        &[ord("w*2"), ord("w*3")],
        10_000,
    )
    .unwrap();
    let json = format!("{:#}\n", tree.to_json(&seq));
    let golden_json = include_str!("../schemas/golden/maximal-2d-walk.json");
    assert_eq!(json, golden_json);
    let dot = tree.to_dot();
    let golden_dot = include_str!("../schemas/golden/maximal-2d-walk.dot");
    assert_eq!(dot, golden_dot);
    // the dump satisfies the shape promised by the schema fields
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["arity"], 2);
    assert_eq!(value["node_count"], 3);
    for node in value["nodes"].as_array().unwrap() {
        assert!(node["flags"]["terminal"].is_boolean());
        assert!(node["label"].as_array().unwrap().len() == 3);
    }
}

/// The walk node cap triggers as an error rather than truncating.
#[test]
fn cap_guards_recursion() {
    let seq = CSequence::maximal(2, ord("w^2")).unwrap();
    let input = [ord("w+7"), ord("w*2")];
    let result = walk(&seq, Sign::Plus, &ord("3"), &input, 16);
    assert!(matches!(
        result,
        Err(hwalks::error::WalkError::CapExceeded(16))
    ));
    // and with a real cap the same walk finishes
    let tree = walk(&seq, Sign::Plus, &ord("3"), &input, 1_000_000).unwrap();
    assert!(tree.len() > 16);
}

/// Restricting a stepped-up sequence at a realized point gives the copied
/// sequence through the position isomorphism.
#[test]
fn stepped_restriction_isomorphism() {
    let e = CSequence::maximal(1, ord("w")).unwrap();
    let stepped = SteppedUp::new(
        CSequence::order_minimal(1, ord("w^2")).unwrap(),
        e.clone(),
        hwalks::cseq::landmark_grid(&ord("w^2"), 5)
            .into_iter()
            .filter(|o| o.is_limit())
            .collect(),
        ord("w"),
    )
    .unwrap();
    let seq = CSequence::from_stepped(stepped);
    let gamma = ord("w*4");
    let scaffold_club = seq.club_of(std::slice::from_ref(&gamma)).unwrap();
    let restricted = seq.restrict(&gamma).unwrap();
    for eta in 1..8u64 {
        let eta = Ordinal::nat(eta);
        let point = scaffold_club.element_at(&eta).unwrap();
        let r_club = restricted.club_of(std::slice::from_ref(&point)).unwrap();
        let e_club = e.club_of(std::slice::from_ref(&eta)).unwrap();
        // the restricted club is the image of the copied club
        let expected: Vec<Ordinal> = e_club
            .enumerate()
            .unwrap()
            .iter()
            .map(|xi| scaffold_club.element_at(xi).unwrap())
            .collect();
        assert_eq!(r_club.enumerate().unwrap(), expected, "at position {eta}");
    }
}
