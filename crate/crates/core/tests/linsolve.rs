//! Properties of the series decomposition.

use proptest::prelude::*;
use qtheta_core::linsolve::{decompose, decompose_lazy};
use qtheta_core::rat::{int, rat};
use qtheta_core::theta::ThetaSpec;
use qtheta_core::{CycloNum, Lazy, Series, Status};

const ORDER: i64 = 5;

/// Level-2 thetas: linearly independent over z-free series.
fn basis() -> Vec<Series> {
    (0..4)
        .map(|j| ThetaSpec::jm(int(j), 2).expand(int(ORDER + 2)).unwrap())
        .collect()
}

/// A small z-free series with integer coefficients.
fn zfree(coeffs: &[i64]) -> Series {
    Series::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (rat(k as i64, 2), int(0), CycloNum::from_i64(c))),
        int(ORDER + 2),
    )
}

fn combine(cs: &[Series], bs: &[Series]) -> Series {
    cs.iter()
        .zip(bs)
        .fold(Series::zero(int(ORDER + 2)), |acc, (c, b)| &acc + &(c * b))
}

fn coeff_vec() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 0..4), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Known combinations are recovered exactly and certified.
    #[test]
    fn recovers_combinations(cs in coeff_vec()) {
        let bs = basis();
        let cs: Vec<Series> = cs.iter().map(|c| zfree(c)).collect();
        let target = combine(&cs, &bs);
        let d = decompose(&target, &bs, int(ORDER)).unwrap();
        prop_assert_eq!(d.status, Status::Exact);
        prop_assert!(d.residual.is_empty());
        for (got, want) in d.coefficients.iter().zip(&cs) {
            prop_assert_eq!(got, &want.truncate(int(ORDER)));
        }
    }

    /// Permuting the basis permutes the coefficients.
    #[test]
    fn permutation_invariant(cs in coeff_vec(), rot in 0usize..4) {
        let bs = basis();
        let cs: Vec<Series> = cs.iter().map(|c| zfree(c)).collect();
        let target = combine(&cs, &bs);
        let mut rotated = bs.clone();
        rotated.rotate_left(rot);
        let a = decompose(&target, &bs, int(ORDER)).unwrap();
        let b = decompose(&target, &rotated, int(ORDER)).unwrap();
        let mut back = b.coefficients.clone();
        back.rotate_right(rot);
        prop_assert_eq!(a.coefficients, back);
    }

    /// Scaling the target scales every coefficient.
    #[test]
    fn scaling_equivariant(cs in coeff_vec(), k in prop_oneof![-5i64..=-1, 1i64..=5]) {
        let bs = basis();
        let cs: Vec<Series> = cs.iter().map(|c| zfree(c)).collect();
        let target = combine(&cs, &bs);
        let c = CycloNum::from_i64(k);
        let a = decompose(&target, &bs, int(ORDER)).unwrap();
        let b = decompose(&target.scale(&c), &bs, int(ORDER)).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            prop_assert_eq!(&x.scale(&c), y);
        }
    }

    /// A ζ-exponent absent from every basis element cannot be reached.
    #[test]
    fn foreign_term_is_witnessed(q in 0i64..4) {
        let bs = basis();
        let stray = Series::monomial(CycloNum::one(), int(q), rat(1, 3), int(ORDER + 2));
        let d = decompose(&stray, &bs, int(ORDER)).unwrap();
        prop_assert_eq!(d.status, Status::NotInSpan);
        prop_assert_eq!(d.witness, Some((int(q), rat(1, 3))));
    }
}

#[test]
fn dependent_generators_are_under_determined() {
    let t = ThetaSpec::jm(int(0), 1).lazy().unwrap();
    let twice = t.scale_rat(int(2));
    let d = decompose_lazy(&t, &[t.clone(), twice], int(ORDER)).unwrap();
    assert_eq!(d.status, Status::UnderDetermined);
    assert!(d.in_span());
}

#[test]
fn zero_target_has_zero_coefficients() {
    let bs: Vec<Lazy> = (0..2).map(|j| ThetaSpec::jm(int(j), 1).lazy().unwrap()).collect();
    let d = decompose_lazy(&Lazy::zero(), &bs, int(ORDER)).unwrap();
    assert_eq!(d.status, Status::Exact);
    assert!(d.coefficients.iter().all(Series::is_empty));
}
