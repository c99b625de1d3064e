//! Branching coefficients against closed eta-quotient forms.

use qtheta_core::branching::{branch, character_basis};
use qtheta_core::rat::{int, rat};
use qtheta_core::theta::eta_product;
use qtheta_core::{Error, ModuleLabel, Rat, Series, Status};

const ORDER: i64 = 6;

fn eq(factors: &[(Rat, i64)]) -> Series {
    eta_product(factors, int(ORDER)).unwrap()
}

/// A = η³/(η(τ/2)η(2τ)), B = η(τ/2)η(2τ)/η², C = η/η(τ/2).
fn quotients() -> (Series, Series, Series) {
    let (h, one, two) = (rat(1, 2), int(1), int(2));
    (
        eq(&[(one, 3), (h, -1), (two, -1)]),
        eq(&[(h, 1), (two, 1), (one, -2)]),
        eq(&[(one, 1), (h, -1)]),
    )
}

fn half(s: &Series) -> Series {
    s.scale_rat(&rat(1, 2))
}

fn label(m: u32, m2: u32) -> ModuleLabel {
    ModuleLabel::new(m, m2).unwrap()
}

fn check(left: ModuleLabel, right: ModuleLabel, expected: &[Series]) {
    let b = branch(left, right, int(ORDER)).unwrap();
    assert_eq!(b.decomposition.status, Status::Exact, "{left} x {right}");
    assert_eq!(b.decomposition.coefficients.len(), expected.len());
    for (got, want) in b.decomposition.coefficients.iter().zip(expected) {
        assert_eq!(got, want, "{left} x {right}");
    }
}

#[test]
fn level_one_mixed_product() {
    let (_, b, _) = quotients();
    check(label(1, 0), label(1, 1), &[b.clone()]);
    assert_eq!(b.ord(), rat(1, 48));
}

#[test]
fn level_one_squares() {
    let (a, b, _) = quotients();
    let plus = half(&(&a + &b));
    let minus = half(&(&a - &b));
    check(label(1, 0), label(1, 0), &[-&plus, minus.clone()]);
    check(label(1, 1), label(1, 1), &[minus, -&plus]);
}

#[test]
fn level_two_products() {
    let (_, b, c) = quotients();
    let plus = half(&(&c + &b));
    let minus = half(&(&c - &b));
    check(label(2, 1), label(2, 0), &[-&plus, minus.clone()]);
    check(label(2, 1), label(2, 2), &[minus, -&plus]);
}

#[test]
fn basis_outside_supported_levels() {
    assert!(character_basis(3, 1).is_err());
    let e = branch(label(1, 0), label(2, 0), int(4)).unwrap_err();
    assert!(matches!(e, Error::BasisUnavailable(_)));
    assert!(e.to_string().contains("basis not available in paper"));
}

#[test]
fn json_is_stable() {
    let a = serde_json::to_string(&branch(label(1, 0), label(1, 1), int(4)).unwrap().to_json()).unwrap();
    let b = serde_json::to_string(&branch(label(1, 0), label(1, 1), int(4)).unwrap().to_json()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"status\":\"exact\""));
}
