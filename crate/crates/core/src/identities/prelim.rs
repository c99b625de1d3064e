//! Theta multiplication formulas, Mumford relations, squares, shifted
//! arguments and ratios.

use super::{Goal, IdentityCase, Kind};
use crate::cyclo::CycloNum;
use crate::error::Result;
use crate::lazy::Lazy;
use crate::numerators::{theta, theta_at_zero};
use crate::rat::{fmt_short, int, rat, Rat};
use crate::theta::{eta_product_lazy, mumford_direct, mumford_lazy, theta_pm_lazy, Mumford, ThetaSpec};

const ORDER: i64 = 6;

fn eq<F>(out: &mut Vec<IdentityCase>, id: String, statement: String, build: F)
where
    F: Fn() -> Result<(Lazy, Lazy)> + Send + Sync + 'static,
{
    out.push(IdentityCase::new(id, Kind::Equality, statement, int(ORDER), move || {
        let (a, b) = build()?;
        Ok(Goal::Equal(a, b))
    }));
}

fn etas(f: &[(Rat, i64)]) -> Lazy {
    eta_product_lazy(f)
}

fn vt(l: Mumford, qs: i64, zs: i64) -> Result<Lazy> {
    mumford_lazy(l, int(qs), int(zs))
}

/// ϑ10(2τ, a·z + b·τ).
fn vt10_shifted(a: i64, b: Rat) -> Result<Lazy> {
    let part = |j| ThetaSpec::jm(int(j), 2).qscale(int(2)).zcoeff(int(a)).tshift(b).lazy();
    Ok(part(1)?.add(&part(-1)?))
}

/// θ_{0,M}(τ, a·z + b·τ).
fn theta0_shifted(mm: i64, a: i64, b: Rat) -> Result<Lazy> {
    ThetaSpec::jm(int(0), mm).zcoeff(int(a)).tshift(b).lazy()
}

const HALVES: [(i64, i64); 4] = [(0, 1), (1, 2), (1, 1), (3, 2)];

pub(super) fn register(out: &mut Vec<IdentityCase>) {
    multiplication(out);
    mumford_relations(out);
    squares(out);
    shifted(out);
}

fn multiplication(out: &mut Vec<IdentityCase>) {
    for n in 1..=3i64 {
        for m in 1..=3i64 {
            for (jn, jd) in HALVES {
                for (kn, kd) in HALVES {
                    let (j, k) = (rat(jn, jd), rat(kn, kd));
                    eq(
                        out,
                        format!("S2.mult-lemma.n{n}m{m}.j{}k{}", fmt_short(&j), fmt_short(&k)),
                        format!(
                            "θ_{{{j},{n}}}·θ_{{{k},{m}}} = Σ_r θ_{{2mnr+kn−jm,mn(m+n)}}(τ,0)·θ_{{j+k+2mr,m+n}}"
                        ),
                        move || {
                            let lhs = theta(j, n)?.mul(&theta(k, m)?);
                            let mut terms = Vec::new();
                            for r in 0..(m + n) {
                                let a = int(2 * m * n * r) + k * int(n) - j * int(m);
                                terms.push(
                                    theta_at_zero(a, m * n * (m + n))?
                                        .mul(&theta(j + k + int(2 * m * r), m + n)?),
                                );
                            }
                            Ok((lhs, Lazy::sum(&terms)))
                        },
                    );
                }
            }
        }
    }

    // specializations with a fixed first factor: (label, n, j, index maps)
    type Spec = (&'static str, i64, i64, fn(Rat, i64, i64) -> (Rat, Rat));
    let specs: [Spec; 6] = [
        ("theta01", 1, 0, |k, m, r| (k + int(2 * r), k - int(2 * m * r))),
        ("theta11", 1, 1, |k, m, r| (k + int(2 * r + 1), k - int((2 * r + 1) * m))),
        ("theta02", 2, 0, |k, m, r| (k + int(4 * r), k * int(2) - int(4 * m * r))),
        ("theta22", 2, 2, |k, m, r| (k + int(2 + 4 * r), k * int(2) - int(2 * m + 4 * m * r))),
        ("theta12", 2, 1, |k, m, r| (k + int(1 + 4 * r), k * int(2) - int(m + 4 * m * r))),
        ("theta-12", 2, -1, |k, m, r| (k + int(4 * r - 1), k * int(2) + int(m - 4 * m * r))),
    ];
    for (label, n, j, map) in specs {
        for m in 1..=3i64 {
            for (kn, kd) in HALVES {
                let k = rat(kn, kd);
                eq(
                    out,
                    format!("S2.mult-{label}.m{m}.k{}", fmt_short(&k)),
                    format!("θ_{{{j},{n}}}·θ_{{{k},{m}}} expanded over level {}", m + n),
                    move || {
                        let lhs = theta(int(j), n)?.mul(&theta(k, m)?);
                        let mut terms = Vec::new();
                        for r in 0..(m + n) {
                            let (a, b) = map(k, m, r);
                            terms.push(theta(a, m + n)?.mul(&theta_at_zero(b, n * m * (m + n))?));
                        }
                        Ok((lhs, Lazy::sum(&terms)))
                    },
                );
            }
        }
    }
    for m in 1..=3i64 {
        for (kn, kd) in HALVES {
            let k = rat(kn, kd);
            eq(
                out,
                format!("S2.mult-vartheta10.m{m}.k{}", fmt_short(&k)),
                format!("[θ_{{1,2}}+θ_{{−1,2}}]·θ_{{{k},{m}}} = Σ_{{r mod 2(m+2)}} θ_{{k−1+2r,m+2}}·θ_{{2k+m−2mr,2m(m+2)}}(τ,0)"),
                move || {
                    let lhs = theta(int(1), 2)?.add(&theta(int(-1), 2)?).mul(&theta(k, m)?);
                    let mut terms = Vec::new();
                    for r in 0..(2 * (m + 2)) {
                        terms.push(
                            theta(k + int(2 * r - 1), m + 2)?
                                .mul(&theta_at_zero(k * int(2) + int(m - 2 * m * r), 2 * m * (m + 2))?),
                        );
                    }
                    Ok((lhs, Lazy::sum(&terms)))
                },
            );
        }
    }
}

fn mumford_relations(out: &mut Vec<IdentityCase>) {
    for l in Mumford::ALL {
        eq(
            out,
            format!("S2.mumford-def.{}", l.label()),
            format!("ϑ{} from degree-2 Jacobi thetas equals its classical sum", l.label()),
            move || {
                let direct = Lazy::new(int(0), move |k| mumford_direct(l, k));
                Ok((vt(l, 1, 1)?, direct))
            },
        );
    }
    let (one, two, four) = (int(1), int(2), int(4));
    // η(2)[η(2)²/(η η(4))]² and 2η(2)[η(4)/η(2)]²
    let big = move || etas(&[(one, -2), (two, 5), (four, -2)]);
    let small = move || etas(&[(two, -1), (four, 2)]).scale_rat(int(2));
    for (item, a, b, sign) in [(1, Mumford::M00, Mumford::M00, 1), (3, Mumford::M01, Mumford::M01, -1)] {
        eq(
            out,
            format!("S2.mumford.item{item}"),
            format!(
                "ϑ{}² = η(2τ)[η(2τ)²/(η(τ)η(4τ))]² ϑ00(2τ,2z) {} 2η(2τ)[η(4τ)/η(2τ)]² ϑ10(2τ,2z)",
                a.label(),
                if sign > 0 { "+" } else { "−" }
            ),
            move || {
                let lhs = vt(a, 1, 1)?.mul(&vt(b, 1, 1)?);
                let t1 = big().mul(&vt(Mumford::M00, 2, 2)?);
                let t2 = small().mul(&vt(Mumford::M10, 2, 2)?);
                Ok((lhs, if sign > 0 { t1.add(&t2) } else { t1.sub(&t2) }))
            },
        );
    }
    eq(
        out,
        "S2.mumford.item2".into(),
        "ϑ00·ϑ01 = η(2τ)[η(τ)/η(2τ)]² ϑ01(2τ,2z)".into(),
        move || {
            let lhs = vt(Mumford::M00, 1, 1)?.mul(&vt(Mumford::M01, 1, 1)?);
            Ok((lhs, etas(&[(one, 2), (two, -1)]).mul(&vt(Mumford::M01, 2, 2)?)))
        },
    );

    // ratio forms
    let brace = move |sign: i64| -> Result<Lazy> {
        let a = etas(&[(one, -2), (two, 5), (four, -2)]).mul(&vt(Mumford::M00, 2, 2)?);
        let b = etas(&[(two, -1), (four, 2)]).scale_rat(int(2)).mul(&vt(Mumford::M10, 2, 2)?);
        Ok(if sign > 0 { a.add(&b) } else { a.sub(&b) })
    };
    for (item, den, sign) in [("1i", Mumford::M01, -1), ("1ii", Mumford::M00, 1)] {
        eq(
            out,
            format!("S2.mumford-ratio.item{item}"),
            format!("ϑ10/ϑ{} · {{…}} = ϑ{}ϑ10", den.label(), den.label()),
            move || {
                let lhs = vt(Mumford::M10, 1, 1)?.div(&vt(den, 1, 1)?)?.mul(&brace(sign)?);
                Ok((lhs, vt(den, 1, 1)?.mul(&vt(Mumford::M10, 1, 1)?)))
            },
        );
    }
    for (item, den, other) in [("2i", Mumford::M01, Mumford::M00), ("2ii", Mumford::M00, Mumford::M01)] {
        eq(
            out,
            format!("S2.mumford-ratio.item{item}"),
            format!(
                "ϑ10/ϑ{} · ϑ01(2τ,2z) = η(2τ)/η(τ)² ϑ{}ϑ10",
                den.label(),
                other.label()
            ),
            move || {
                let lhs = vt(Mumford::M10, 1, 1)?
                    .div(&vt(den, 1, 1)?)?
                    .mul(&vt(Mumford::M01, 2, 2)?);
                let rhs = etas(&[(two, 1), (one, -2)])
                    .mul(&vt(other, 1, 1)?)
                    .mul(&vt(Mumford::M10, 1, 1)?);
                Ok((lhs, rhs))
            },
        );
    }
}

fn squares(out: &mut Vec<IdentityCase>) {
    let (half, one, two) = (rat(1, 2), int(1), int(2));
    for (item, j, sign) in [(1, 0, 1), (2, 1, -1)] {
        eq(
            out,
            format!("S2.squares.item{item}"),
            format!(
                "θ_{{{j},1}}² = ½η(τ){{[η(τ)²/(η(τ/2)η(2τ))]² ϑ00 {} [η(τ/2)/η(τ)]² ϑ01}}",
                if sign > 0 { "+" } else { "−" }
            ),
            move || {
                let lhs = theta(int(j), 1)?.pow(2);
                let a = etas(&[(one, 5), (half, -2), (two, -2)]).mul(&vt(Mumford::M00, 1, 1)?);
                let b = etas(&[(one, -1), (half, 2)]).mul(&vt(Mumford::M01, 1, 1)?);
                let inner = if sign > 0 { a.add(&b) } else { a.sub(&b) };
                Ok((lhs, inner.scale_rat(half)))
            },
        );
    }
    eq(
        out,
        "S2.squares.item3".into(),
        "θ_{0,1}·θ_{1,1} = η(2τ)²/η(τ) ϑ10".into(),
        move || {
            let lhs = theta(int(0), 1)?.mul(&theta(int(1), 1)?);
            Ok((lhs, etas(&[(two, 2), (one, -1)]).mul(&vt(Mumford::M10, 1, 1)?)))
        },
    );
}

fn shifted(out: &mut Vec<IdentityCase>) {
    for m in 1..=3i64 {
        let mm = m + 1;
        let mr = int(m);
        for p in -1..=2i64 {
            let pr = int(p);
            // value items: θ_{0,M}(τ, −1/2 + m(4p±1)/(2M)·τ)
            for (tag, eps) in [("1i", 1i64), ("1ii", -1)] {
                let x = pr + rat(eps, 4);
                let jj = mr * (int(2 * p) + rat(eps, 2));
                let tshift = mr * int(4 * p + eps) / int(2 * mm);
                let pref = -(mr * mr / int(mm)) * x * x;
                let lhs = move || ThetaSpec::jm(int(0), mm).at_zero().tshift(tshift).cshift(rat(-1, 2)).lazy();
                eq(
                    out,
                    format!("S2.shift.item{tag}.m{m}.p{p}"),
                    format!("θ_{{0,{mm}}}(τ, −½ + m(4p{:+})τ/2(m+1)) = q^… e^{{πim(p{:+}/4)}} θ_{{{jj},{mm}}}(τ,−½)", eps, eps),
                    move || {
                        let rhs = ThetaSpec::jm(jj, mm)
                            .at_zero()
                            .cshift(rat(-1, 2))
                            .lazy()?
                            .shift(pref, int(0))
                            .scale(&CycloNum::phase(&(mr * x / int(2)))?);
                        Ok((lhs()?, rhs))
                    },
                );
                eq(
                    out,
                    format!("S2.shift.item{tag}-pm.m{m}.p{p}"),
                    format!(
                        "θ_{{0,{mm}}}(τ, −½ + …) = q^… θ^({})_{{{jj},{mm}}}(τ,0)",
                        if m % 2 == 0 { "−" } else { "+" }
                    ),
                    move || {
                        let rhs = theta_pm_lazy(m % 2 == 1, jj, int(mm))?.shift(pref, int(0));
                        Ok((lhs()?, rhs))
                    },
                );
            }
            // argument-shift items: θ_{0,M}(τ, ±z + b·τ)
            // (tag, z-sign, τ-shift, q-exponent, ζ-exponent, J)
            let items: [(&str, i64, Rat, Rat, Rat, Rat); 6] = {
                let c = |e: i64| int(4 * p + e);
                let q1 = |e: i64| -(c(e) * c(e)) / int(16 * mm);
                let y4 = pr - rat(1, 4) + rat(mm, 2);
                let y4m = pr - rat(1, 4) - rat(mm, 2);
                [
                    ("2i", 1, c(1) / int(2 * mm), q1(1), -c(1) / int(4), int(2 * p) + rat(1, 2)),
                    ("2ii", -1, c(1) / int(2 * mm), q1(1), c(1) / int(4), -(int(2 * p) + rat(1, 2))),
                    ("3i", 1, c(-1) / int(2 * mm), q1(-1), -c(-1) / int(4), int(2 * p) - rat(1, 2)),
                    ("3ii", -1, c(-1) / int(2 * mm), q1(-1), c(-1) / int(4), -(int(2 * p) - rat(1, 2))),
                    ("4i", 1, c(-1) / int(2 * mm) + int(1), -(y4 * y4) / int(mm), -y4, int(2 * p) - rat(1, 2) + int(mm)),
                    ("4ii", -1, c(-1) / int(2 * mm) - int(1), -(y4m * y4m) / int(mm), y4m, -(int(2 * p) - rat(1, 2) + int(mm))),
                ]
            };
            for (tag, a, b, qexp, zexp, jj) in items {
                eq(
                    out,
                    format!("S2.shift.item{tag}.m{m}.p{p}"),
                    format!("θ_{{0,{mm}}}(τ, {}z + {b}τ) = q^{{{qexp}}} ζ^{{{zexp}}} θ_{{{jj},{mm}}}(τ,z)", if a > 0 { "" } else { "−" }),
                    move || {
                        let lhs = theta0_shifted(mm, a, b)?;
                        Ok((lhs, theta(jj, mm)?.shift(qexp, zexp)))
                    },
                );
            }
        }
    }
    shifted_vartheta(out);
    ratios(out);
}

fn shifted_vartheta(out: &mut Vec<IdentityCase>) {
    for p in -1..=2i64 {
        let x = int(p) + rat(1, 4);
        let y = int(p) - rat(3, 4);
        let items: [(&str, Rat, Rat, Rat, Rat); 3] = [
            ("1", rat(1, 2) + int(2 * p), -(x * x), -x, rat(-1, 2)),
            ("2", -(rat(1, 2) + int(2 * p)), -(x * x), x, rat(1, 2)),
            ("3", -(rat(1, 2) + int(2 * p)) + int(2), -(y * y), y, rat(1, 2)),
        ];
        for (tag, b, qexp, zexp, j) in items {
            eq(
                out,
                format!("S2.shift-vartheta.item{tag}.p{p}"),
                format!("ϑ10(2τ, z + {b}τ) = q^{{{qexp}}} ζ^{{{zexp}}} θ_{{{j},1}}(τ,z)"),
                move || Ok((vt10_shifted(1, b)?, theta(j, 1)?.shift(qexp, zexp))),
            );
        }
    }
}

fn ratios(out: &mut Vec<IdentityCase>) {
    for m in 1..=3i64 {
        let mm = m + 1;
        let mr = int(m);
        for p in -1..=2i64 {
            let pr = int(p);
            let xp = pr + rat(1, 4);
            let xm = pr - rat(1, 4);
            let b1 = int(4 * p + 1) / int(2 * mm);
            let b2 = int(4 * p - 1) / int(2 * mm);
            let q1 = mr / int(mm) * xp * xp;
            let q2 = mr / int(mm) * xm * xm - mr / int(4);
            let jp = int(2 * p) + rat(1, 2);
            let jm = int(2 * p) - rat(1, 2) + int(mm);
            // (tag, numerator z-sign, numerator τ-shift, denominator τ-shift, q, ζ, J, θ_{±1/2,1})
            let items: [(&str, i64, Rat, Rat, Rat, Rat, Rat, Rat); 4] = [
                ("1i", 1, b1, rat(1, 2) + int(2 * p), q1, int(0), jp, rat(-1, 2)),
                ("1ii", -1, b1, -(rat(1, 2) + int(2 * p)), q1, int(0), -jp, rat(1, 2)),
                ("2i", 1, b2 + int(1), rat(1, 2) + int(2 * p), q2, -mr / int(2), jm, rat(-1, 2)),
                ("2ii", -1, b2 - int(1), -(rat(1, 2) + int(2 * p)) + int(2), q2, -mr / int(2), -jm, rat(1, 2)),
            ];
            for (tag, a, bn, bd, qexp, zexp, jj, jd) in items {
                eq(
                    out,
                    format!("S2.ratio.item{tag}.m{m}.p{p}"),
                    format!(
                        "θ_{{0,{mm}}}(τ, {}z + {bn}τ)/ϑ10(2τ, z + {bd}τ) = q^{{{qexp}}} ζ^{{{zexp}}} θ_{{{jj},{mm}}}/θ_{{{jd},1}}",
                        if a > 0 { "" } else { "−" }
                    ),
                    move || {
                        let lhs = theta0_shifted(mm, a, bn)?.div(&vt10_shifted(1, bd)?)?;
                        let rhs = theta(jj, mm)?.div(&theta(jd, 1)?)?.shift(qexp, zexp);
                        Ok((lhs, rhs))
                    },
                );
            }
        }
    }
}
