//! Shift-independence of the closed numerator expansions.

use super::{Goal, IdentityCase, Kind};
use crate::numerators::{numerator_half, numerator_half_parts, numerator_int};
use crate::rat::int;

const ORDER: i64 = 4;
const SHIFTS: [i64; 3] = [0, 1, 2];

pub(super) fn register(out: &mut Vec<IdentityCase>) {
    for m in 1..=5u32 {
        out.push(IdentityCase::new(
            format!("S4.pindep.m{m}.half"),
            Kind::PIndependence,
            format!("F^{{[{m},½]}} computed at p = 0, 1, 2 agree"),
            int(ORDER),
            move || {
                let xs = SHIFTS.iter().map(|&p| numerator_half(m, p)).collect::<crate::error::Result<_>>()?;
                Ok(Goal::AllEqual(xs))
            },
        ));
        // the same statement without dividing: θ^{(±)}·(F − tail) = N
        for p in [1i64, 2] {
            out.push(IdentityCase::new(
                format!("S4.crossmul.m{m}.p{p}"),
                Kind::Equality,
                format!("θ^{{(±)}}_{{{m}(2p+½),{}}}(τ,0)·(F^{{[{m},½]}} − tail_p) = N_p at p = {p}", m + 1),
                int(ORDER),
                move || {
                    let parts = numerator_half_parts(m, p)?;
                    let f = numerator_half(m, 0)?;
                    let lhs = parts.denominator.mul(&f.sub(&parts.tail));
                    Ok(Goal::Equal(lhs, parts.numerator))
                },
            ));
        }
    }
    for m in [1u32, 3, 5] {
        out.push(IdentityCase::new(
            format!("S4.pindep.m{m}.integer"),
            Kind::PIndependence,
            format!("F^{{[{m},0]}} computed at p = 0, 1, 2 agree"),
            int(ORDER),
            move || {
                let xs = SHIFTS.iter().map(|&p| numerator_int(m, p)).collect::<crate::error::Result<_>>()?;
                Ok(Goal::AllEqual(xs))
            },
        ));
    }
}
