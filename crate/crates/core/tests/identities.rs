//! Registry behaviour: listing, single runs, injected faults, literal
//! readings of misprinted indices, determinism and monotonicity.

use qtheta_core::identities::{
    big_multiplication_rhs, find, list_identities, registry, run_case, run_cases, run_identity, select, Kind,
    OrderPolicy, Outcome,
};
use qtheta_core::numerators::{bracket_ab, theta};
use qtheta_core::rat::{int, rat};
use qtheta_core::theta::{mumford_lazy, Mumford};
use qtheta_core::{CycloNum, Error, Lazy, Rat};

#[test]
fn listing_is_sorted_and_contains_anchors() {
    let ids: Vec<String> = list_identities().into_iter().map(|(id, ..)| id).collect();
    assert!(ids.len() >= 40);
    assert!(ids.windows(2).all(|w| w[0] < w[1]), "ids sorted and unique");
    for id in [
        "S2.mumford.item2",
        "S5.UeqV.m3.integer",
        "S2.mult-lemma.n1m2.j0k1",
        "S3.prod.K1xK1.case1",
        "S5.ladder.m2.s1/2",
    ] {
        assert!(ids.iter().any(|x| x == id), "missing {id}");
    }
}

#[test]
fn squares_item3_passes() {
    let r = run_identity("S2.squares.item3", Some(int(6)), false).unwrap();
    assert_eq!(r.status, Outcome::Pass);
    assert_eq!(r.certified_order, int(6));
    assert_eq!(r.wall_ms, None);
}

#[test]
fn level_one_numerator_is_shift_independent() {
    let r = run_identity("S4.pindep.m1.half", Some(int(4)), false).unwrap();
    assert_eq!(r.kind, Kind::PIndependence);
    assert_eq!(r.status, Outcome::Pass);
}

#[test]
fn injected_q3_fault_is_located() {
    let case = find("S2.squares.item3").unwrap();
    let bad = case.perturbed(Lazy::monomial(CycloNum::one(), int(3), int(0)));
    let r = run_case(&bad, int(6), false);
    assert_eq!(r.status, Outcome::Fail);
    assert_eq!(r.first_mismatch, Some((int(3), int(0))));
}

#[test]
fn fault_beyond_the_order_is_invisible() {
    let case = find("S2.squares.item3").unwrap();
    let bad = case.perturbed(Lazy::monomial(CycloNum::one(), int(7), int(0)));
    assert_eq!(run_case(&bad, int(6), false).status, Outcome::Pass);
}

#[test]
fn unknown_and_infeasible_requests() {
    assert!(matches!(run_identity("nonsense", None, false), Err(Error::UnknownIdentity(_))));
    let r = run_identity("S2.squares.item3", Some(int(41)), false).unwrap();
    assert_eq!(r.status, Outcome::Error);
    assert!(r.message.unwrap().contains("maximal certifiable order"));
}

#[test]
fn report_json_shape() {
    let r = run_identity("S2.squares.item3", Some(int(6)), false).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["certified_order", "first_mismatch", "id", "kind", "status", "wall_ms"]);
    assert_eq!(v["certified_order"], "6/1");
    assert_eq!(v["status"], "pass");
    assert!(v["first_mismatch"].is_null());
}

#[test]
fn reports_do_not_depend_on_parallelism() {
    let cases = select("S3");
    let policy = OrderPolicy::default();
    let a = run_cases(&cases, &policy, 1, false);
    let b = run_cases(&cases, &policy, 4, false);
    assert_eq!(a, b);
}

#[test]
fn raising_the_order_keeps_passes() {
    for id in ["S2.mumford.item1", "S3.prod.K2xK2.case1", "S5.member.half.m2.p-1", "S5.UeqV.m2.half"] {
        let low = run_identity(id, Some(int(3)), false).unwrap();
        let high = run_identity(id, Some(int(5)), false).unwrap();
        assert_eq!(low.status, Outcome::Pass, "{id}");
        assert_eq!(high.status, Outcome::Pass, "{id}");
    }
}

#[test]
fn every_section_is_populated() {
    for prefix in ["S2.", "S3.", "S4.", "S5."] {
        assert!(registry().iter().any(|c| c.id.starts_with(prefix)), "{prefix}");
    }
}

/// θ_{2,2}·B(−½, ½) with the second bracket index read literally as ½ − 2(4r+1).
fn literal_item_4ii(m: i64) -> (Lazy, Lazy) {
    let h = rat(1, 2);
    let lhs = theta(int(2), 2).unwrap().mul(&bracket_ab(-h, h, m + 1).unwrap());
    let rhs = big_multiplication_rhs(m + 3, m + 3, 2 * (m + 1) * (m + 3), |r| {
        let t = 2 * (2 * r + 1);
        (int(1 + t * (m + 1)), -h + int(t), h - int(2 * (4 * r + 1)))
    })
    .unwrap();
    (lhs, rhs)
}

/// ϑ10·B(½, −½) with the theta-constant index read literally as −1 + (1−2r)(m+1).
fn literal_item_5i(m: i64) -> (Lazy, Lazy) {
    let h = rat(1, 2);
    let lhs = mumford_lazy(Mumford::M10, int(1), int(1))
        .unwrap()
        .mul(&bracket_ab(h, -h, m + 1).unwrap());
    let rhs = big_multiplication_rhs(2 * (m + 3), m + 3, 2 * (m + 1) * (m + 3), |r| {
        (int(-1 + (1 - 2 * r) * (m + 1)), -h + int(2 * r), h - int(2 * r))
    })
    .unwrap();
    (lhs, rhs)
}

fn mismatch(pair: (Lazy, Lazy), order: Rat) -> Option<(Rat, Rat)> {
    let (a, b) = pair;
    a.eval(order).unwrap().equal_up_to(&b.eval(order).unwrap(), order).unwrap()
}

#[test]
fn literal_item_4ii_index_fails_where_corrected_one_holds() {
    for m in 1..=3i64 {
        assert!(mismatch(literal_item_4ii(m), int(4)).is_some(), "m = {m}");
        let id = format!("S5.bigmult.item4ii.m{m}");
        assert_eq!(run_identity(&id, None, false).unwrap().status, Outcome::Pass);
    }
}

#[test]
fn literal_item_5_constant_fails_where_corrected_one_holds() {
    for m in 1..=3i64 {
        assert!(mismatch(literal_item_5i(m), int(4)).is_some(), "m = {m}");
        let id = format!("S5.bigmult.item5i.m{m}");
        assert_eq!(run_identity(&id, None, false).unwrap().status, Outcome::Pass);
    }
}

#[test]
fn derived_denominator_is_odd_in_z() {
    let r = run_identity("S5.R0.zfree", None, false).unwrap();
    assert_eq!(r.status, Outcome::Fail);
    assert_eq!(r.first_mismatch.map(|(_, z)| z), Some(rat(-1, 2)));
}

#[test]
fn even_level_two_shift_two_denominator_vanishes() {
    let r = run_identity("S4.pindep.m2.half", None, false).unwrap();
    assert_eq!(r.status, Outcome::Error);
    assert!(r.message.unwrap().contains("vanishes identically"));
    assert_eq!(run_identity("S4.crossmul.m2.p2", None, false).unwrap().status, Outcome::Pass);
}
