//! Character formulas at levels 1, 2 and 4, their inversion, and the
//! branching of character products.

use super::{Goal, IdentityCase, Kind};
use crate::cyclo::CycloNum;
use crate::error::Result;
use crate::lazy::Lazy;
use crate::numerators::{character, theta, ModuleLabel};
use crate::rat::{int, rat, Rat};
use crate::theta::{eta_product_lazy, mumford_lazy, Mumford};

const ORDER: i64 = 6;

fn eq<F>(out: &mut Vec<IdentityCase>, id: &str, statement: &str, build: F)
where
    F: Fn() -> Result<(Lazy, Lazy)> + Send + Sync + 'static,
{
    out.push(IdentityCase::new(id, Kind::Equality, statement, int(ORDER), move || {
        let (a, b) = build()?;
        Ok(Goal::Equal(a, b))
    }));
}

fn ch(m: u32, m2: u32) -> Result<Lazy> {
    character(ModuleLabel::new(m, m2)?)
}

fn vt(l: Mumford) -> Result<Lazy> {
    mumford_lazy(l, int(1), int(1))
}

fn etas(f: &[(Rat, i64)]) -> Lazy {
    eta_product_lazy(f)
}

/// η(τ)³ / (η(τ/2) η(2τ)).
fn coeff_a() -> Lazy {
    etas(&[(int(1), 3), (rat(1, 2), -1), (int(2), -1)])
}

/// η(τ/2) η(2τ) / η(τ)².
fn coeff_b() -> Lazy {
    etas(&[(rat(1, 2), 1), (int(2), 1), (int(1), -2)])
}

/// η(τ) / η(τ/2).
fn coeff_c() -> Lazy {
    etas(&[(int(1), 1), (rat(1, 2), -1)])
}

/// ½(x + y)·sign.
fn half_comb(x: &Lazy, y: &Lazy, plus: bool, sign: i64) -> Lazy {
    let s = if plus { x.add(y) } else { x.sub(y) };
    s.scale_rat(rat(sign, 2))
}

pub(super) fn register(out: &mut Vec<IdentityCase>) {
    eq(out, "S3.char.K1.m2-0", "ϑ00(2τ, z) = θ_{0,1}(τ, z)", || {
        Ok((mumford_lazy(Mumford::M00, int(2), int(1))?, theta(int(0), 1)?))
    });
    eq(out, "S3.char.K1.m2-1", "ϑ10(2τ, z) = θ_{1,1}(τ, z)", || {
        Ok((mumford_lazy(Mumford::M10, int(2), int(1))?, theta(int(1), 1)?))
    });
    for m2 in [1u32, 3] {
        let sign = if m2 == 1 { 1 } else { -1 };
        eq(
            out,
            &format!("S3.char.K4.m2-{m2}.proof"),
            "ch(4,m₂) = (i/2)/(η(τ/2)η(2τ))·ϑ10/ϑ01·{η(2τ)⁵/(η²η(4τ)²)ϑ00(2τ,2z) − 2η(4τ)²/η(2τ)·ϑ10(2τ,2z) ± ϑ01(2τ,2z)}",
            move || {
                let at2 = |l| mumford_lazy(l, int(2), int(2));
                let inner = etas(&[(int(2), 5), (int(1), -2), (int(4), -2)])
                    .mul(&at2(Mumford::M00)?)
                    .sub(&etas(&[(int(4), 2), (int(2), -1)]).mul(&at2(Mumford::M10)?).scale_rat(int(2)))
                    .add(&at2(Mumford::M01)?.scale_rat(int(sign)));
                let lhs = vt(Mumford::M10)?
                    .div(&vt(Mumford::M01)?)?
                    .mul(&inner)
                    .mul(&etas(&[(rat(1, 2), -1), (int(2), -1)]))
                    .scale(&CycloNum::i().scale(&rat(1, 2)));
                Ok((lhs, ch(4, m2)?))
            },
        );
    }

    eq(out, "S3.inversion.item1i", "ϑ00 = −η(τ/2)η(2τ){ch(2,0) − ch(2,2)}", || {
        let rhs = ch(2, 0)?.sub(&ch(2, 2)?).mul(&etas(&[(rat(1, 2), 1), (int(2), 1)])).neg();
        Ok((vt(Mumford::M00)?, rhs))
    });
    eq(out, "S3.inversion.item1ii", "ϑ01 = −η(τ)η(2τ)/η(τ/2)·{ch(2,0) + ch(2,2)}", || {
        let rhs = ch(2, 0)?
            .add(&ch(2, 2)?)
            .mul(&etas(&[(int(1), 1), (int(2), 1), (rat(1, 2), -1)]))
            .neg();
        Ok((vt(Mumford::M01)?, rhs))
    });
    eq(out, "S3.inversion.item2i", "ϑ01ϑ10 = −iη(τ/2)η(2τ){ch(4,1) + ch(4,3)}", || {
        let rhs = ch(4, 1)?
            .add(&ch(4, 3)?)
            .mul(&etas(&[(rat(1, 2), 1), (int(2), 1)]))
            .scale(&-CycloNum::i());
        Ok((vt(Mumford::M01)?.mul(&vt(Mumford::M10)?), rhs))
    });
    eq(out, "S3.inversion.item2ii", "ϑ00ϑ10 = −iη(τ/2)η(τ)²{ch(4,1) − ch(4,3)}", || {
        let rhs = ch(4, 1)?
            .sub(&ch(4, 3)?)
            .mul(&etas(&[(rat(1, 2), 1), (int(1), 2)]))
            .scale(&-CycloNum::i());
        Ok((vt(Mumford::M00)?.mul(&vt(Mumford::M10)?), rhs))
    });

    eq(out, "S3.prod.K1xK1.case1", "ch(1,0)·ch(1,1) = η(τ/2)η(2τ)/η(τ)²·ch(2,1)", || {
        Ok((ch(1, 0)?.mul(&ch(1, 1)?), coeff_b().mul(&ch(2, 1)?)))
    });
    eq(
        out,
        "S3.prod.K1xK1.case2",
        "ch(1,0)² = −½(A+B)ch(2,0) + ½(A−B)ch(2,2), A = η³/(η(τ/2)η(2τ)), B = η(τ/2)η(2τ)/η²",
        || {
            let (a, b) = (coeff_a(), coeff_b());
            let rhs = half_comb(&a, &b, true, -1)
                .mul(&ch(2, 0)?)
                .add(&half_comb(&a, &b, false, 1).mul(&ch(2, 2)?));
            Ok((ch(1, 0)?.pow(2), rhs))
        },
    );
    eq(out, "S3.prod.K1xK1.case3", "ch(1,1)² = ½(A−B)ch(2,0) − ½(A+B)ch(2,2)", || {
        let (a, b) = (coeff_a(), coeff_b());
        let rhs = half_comb(&a, &b, false, 1)
            .mul(&ch(2, 0)?)
            .add(&half_comb(&a, &b, true, -1).mul(&ch(2, 2)?));
        Ok((ch(1, 1)?.pow(2), rhs))
    });
    eq(
        out,
        "S3.prod.K2xK2.case1",
        "ch(2,1)·ch(2,0) = −½(C+B)ch(4,1) + ½(C−B)ch(4,3), C = η(τ)/η(τ/2)",
        || {
            let (c, b) = (coeff_c(), coeff_b());
            let rhs = half_comb(&c, &b, true, -1)
                .mul(&ch(4, 1)?)
                .add(&half_comb(&c, &b, false, 1).mul(&ch(4, 3)?));
            Ok((ch(2, 1)?.mul(&ch(2, 0)?), rhs))
        },
    );
    eq(out, "S3.prod.K2xK2.case2", "ch(2,1)·ch(2,2) = ½(C−B)ch(4,1) − ½(C+B)ch(4,3)", || {
        let (c, b) = (coeff_c(), coeff_b());
        let rhs = half_comb(&c, &b, false, 1)
            .mul(&ch(4, 1)?)
            .add(&half_comb(&c, &b, true, -1).mul(&ch(4, 3)?));
        Ok((ch(2, 1)?.mul(&ch(2, 2)?), rhs))
    });
}
