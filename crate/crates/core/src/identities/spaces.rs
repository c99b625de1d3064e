//! The spaces U^{[m,s]} and V^{[m,s]}: the ladder, membership and span
//! statements, theta and character closure, the derived denominator, and the
//! character-product branching cases.

use super::{Goal, IdentityCase, Kind};
use crate::error::Result;
use crate::lazy::Lazy;
use crate::numerators::{
    bracket, bracket_ab, bracket_mirror, character, d_k, derived_denominator, ladder_step, numerator,
    theta, theta_at_zero, u_basis, v_basis, ModuleLabel, Sector,
};
use crate::rat::{fmt_short, int, rat, Rat};
use crate::theta::{mumford_lazy, Mumford};

const ORDER: i64 = 4;

fn case<F>(out: &mut Vec<IdentityCase>, id: String, kind: Kind, statement: String, build: F)
where
    F: Fn() -> Result<Goal> + Send + Sync + 'static,
{
    out.push(IdentityCase::new(id, kind, statement, int(ORDER), build));
}

fn member<F>(out: &mut Vec<IdentityCase>, id: String, statement: String, build: F)
where
    F: Fn() -> Result<(Vec<Lazy>, Vec<Lazy>)> + Send + Sync + 'static,
{
    case(out, id, Kind::Membership, statement, move || {
        let (targets, basis) = build()?;
        Ok(Goal::Member { targets, basis })
    });
}

fn equal<F>(out: &mut Vec<IdentityCase>, id: String, statement: String, build: F)
where
    F: Fn() -> Result<(Lazy, Lazy)> + Send + Sync + 'static,
{
    case(out, id, Kind::Equality, statement, move || {
        let (a, b) = build()?;
        Ok(Goal::Equal(a, b))
    });
}

fn ch(m: u32, m2: u32) -> Result<Lazy> {
    character(ModuleLabel::new(m, m2)?)
}

fn vt(l: Mumford) -> Result<Lazy> {
    mumford_lazy(l, int(1), int(1))
}

fn half_sector(s: Sector) -> Rat {
    match s {
        Sector::Half => rat(1, 2),
        Sector::Integer => int(0),
    }
}

/// s + ½ as a sector.
fn shift_half(s: Sector) -> Sector {
    s.flip()
}

fn times(f: &Lazy, basis: &[Lazy]) -> Vec<Lazy> {
    basis.iter().map(|b| f.mul(b)).collect()
}

pub(super) fn register(out: &mut Vec<IdentityCase>) {
    ladder(out);
    membership_lemmas(out);
    u_equals_v(out);
    theta_closure_note(out);
    big_multiplication(out);
    closure_lemma(out);
    character_closure(out);
    derived(out);
    final_cases(out);
}

fn ladder(out: &mut Vec<IdentityCase>) {
    for m in [2u32, 3] {
        for s in [rat(1, 2), int(1), rat(3, 2)] {
            let id = format!("S5.ladder.m{m}.s{}", fmt_short(&s));
            if m == 2 && s == int(1) {
                // no integer-sector numerator at even level: only the step itself is checkable
                equal(out, id, "e^{−πi}q^{…}[θ_{2,2} − θ_{−2,2}] = 0".into(), move || {
                    Ok((ladder_step(m, s)?, Lazy::zero()))
                });
                continue;
            }
            equal(
                out,
                id,
                format!("F^{{[{m},{s}]}} − F^{{[{m},{}]}} = e^{{−πis}} q^{{−(s−m/4)²/m}} [θ_{{2s,m}} − θ_{{−2s,m}}]", s + int(1)),
                move || Ok((numerator(m, s)?.sub(&numerator(m, s + int(1))?), ladder_step(m, s)?)),
            );
        }
    }
    equal(out, "S5.ladder.m1.degenerate".into(), "F^{[1,½]} = F^{[1,3/2]}".into(), || {
        Ok((numerator(1, rat(1, 2))?, numerator(1, rat(3, 2))?))
    });
}

fn membership_lemmas(out: &mut Vec<IdentityCase>) {
    for m in 1..=3u32 {
        for p in -2..=2i64 {
            member(
                out,
                format!("S5.member.half.m{m}.p{p}"),
                format!("θ_{{2p+½,{0}}}/θ_{{−½,1}} − θ_{{−(2p+½),{0}}}/θ_{{½,1}} ∈ U^{{[{m},½]}}, p = {p}", m + 1),
                move || {
                    let t = bracket(int(2 * p) + rat(1, 2), m as i64 + 1)?;
                    Ok((vec![t], u_basis(m, Sector::Half)?))
                },
            );
        }
    }
    for m in [1u32, 3] {
        let mi = m as i64;
        for p in -2..=2i64 {
            member(
                out,
                format!("S5.member.integer.m{m}.p{p}"),
                format!("θ_{{2p+½+m,{0}}}/θ_{{−½,1}} − θ_{{−(2p+½+m),{0}}}/θ_{{½,1}} ∈ U^{{[{m},0]}}, p = {p}", m + 1),
                move || {
                    let t = bracket(int(2 * p + mi) + rat(1, 2), mi + 1)?;
                    Ok((vec![t], u_basis(m, Sector::Integer)?))
                },
            );
        }
        case(
            out,
            format!("S5.simpler.m{m}.span"),
            Kind::Span,
            format!("U^{{[{m},0]}} = span{{θ_{{−½,{0}}}/θ_{{−½,1}} − θ_{{½,{0}}}/θ_{{½,1}}, D_even}}", m + 1),
            move || {
                let mut alt = vec![bracket_mirror(rat(1, 2), mi + 1)?];
                alt.extend(u_basis(m, Sector::Integer)?.into_iter().skip(1));
                Ok(Goal::Span(alt, u_basis(m, Sector::Integer)?))
            },
        );
        for p in -1..=2i64 {
            member(
                out,
                format!("S5.simpler.m{m}.p{p}"),
                format!("θ_{{2p−½,{0}}}/θ_{{−½,1}} − θ_{{−(2p−½),{0}}}/θ_{{½,1}} ∈ U^{{[{m},0]}}, p = {p}", m + 1),
                move || {
                    let t = bracket(int(2 * p) - rat(1, 2), mi + 1)?;
                    Ok((vec![t], u_basis(m, Sector::Integer)?))
                },
            );
        }
    }
}

fn u_equals_v(out: &mut Vec<IdentityCase>) {
    let cases = [1u32, 2, 3, 4]
        .map(|m| (m, Sector::Half))
        .into_iter()
        .chain([(1, Sector::Integer), (3, Sector::Integer)]);
    for (m, sector) in cases {
        case(
            out,
            format!("S5.UeqV.m{m}.{sector}"),
            Kind::Span,
            format!("V^{{[{m},{}]}} = U^{{[{m},{}]}}", half_sector(sector), half_sector(sector)),
            move || Ok(Goal::Span(v_basis(m, sector)?, u_basis(m, sector)?)),
        );
    }
}

/// θ_{j,n}·[θ_{k,m} − θ_{−k,m}] ∈ U^{[m+n, (k+j)/2]} for the even-in-z θ_{j,n}.
fn theta_closure_note(out: &mut Vec<IdentityCase>) {
    for (n, js) in [(1i64, [0i64, 1]), (2, [0, 2])] {
        for j in js {
            for m in 2..=4i64 {
                for k in 1..m {
                    let target = Sector::of(rat(k + j, 2));
                    member(
                        out,
                        format!("S5.theta-closure.n{n}j{j}.m{m}.k{k}"),
                        format!("θ_{{{j},{n}}}·[θ_{{{k},{m}}} − θ_{{−{k},{m}}}] ∈ U^{{[{},{}]}}", m + n, half_sector(target)),
                        move || {
                            let t = theta(int(j), n)?.mul(&d_k(int(k), m)?);
                            Ok((vec![t], u_basis((m + n) as u32, target)?))
                        },
                    );
                }
            }
        }
    }
}

/// One item of the multiplication note: factor · B(a₀, b₀, m+1) =
/// Σ_r θ_{c(r), L}(τ,0) · B(a(r), b(r), M).
struct BigItem {
    tag: &'static str,
    factor: fn() -> Result<Lazy>,
    /// true: the left bracket is B(½, −½); false: the mirrored one
    plain: bool,
    /// number of residues r, as a function of m
    period: fn(i64) -> i64,
    /// level of the target brackets
    level: fn(i64) -> i64,
    /// level of the theta constants
    const_level: fn(i64) -> i64,
    /// (constant index, a, b) for each r
    index: fn(i64, i64) -> (Rat, Rat, Rat),
}

fn big_items() -> Vec<BigItem> {
    fn t01() -> Result<Lazy> {
        theta(int(0), 1)
    }
    fn t11() -> Result<Lazy> {
        theta(int(1), 1)
    }
    fn t02() -> Result<Lazy> {
        theta(int(0), 2)
    }
    fn t22() -> Result<Lazy> {
        theta(int(2), 2)
    }
    fn v10() -> Result<Lazy> {
        vt(Mumford::M10)
    }
    let p2 = |m: i64| m + 2;
    let p3 = |m: i64| m + 3;
    let p6 = |m: i64| 2 * (m + 3);
    let c2 = |m: i64| (m + 1) * (m + 2);
    let c3 = |m: i64| 2 * (m + 1) * (m + 3);
    vec![
        BigItem {
            tag: "1i",
            factor: t01,
            plain: true,
            period: p2,
            level: p2,
            const_level: c2,
            index: |m, r| (rat(1, 2) - int(2 * r * (m + 1)), rat(1, 2) + int(2 * r), rat(-1, 2) - int(2 * r)),
        },
        BigItem {
            tag: "1ii",
            factor: t01,
            plain: false,
            period: p2,
            level: p2,
            const_level: c2,
            index: |m, r| (rat(1, 2) + int(2 * r * (m + 1)), rat(-1, 2) + int(2 * r), rat(1, 2) - int(2 * r)),
        },
        BigItem {
            tag: "2i",
            factor: t11,
            plain: true,
            period: p2,
            level: p2,
            const_level: c2,
            index: |m, r| (rat(1, 2) - int((2 * r - 1) * (m + 1)), rat(-1, 2) + int(2 * r), rat(1, 2) - int(2 * r)),
        },
        BigItem {
            tag: "2ii",
            factor: t11,
            plain: false,
            period: p2,
            level: p2,
            const_level: c2,
            index: |m, r| (rat(1, 2) + int((2 * r + 1) * (m + 1)), rat(1, 2) + int(2 * r), rat(-1, 2) - int(2 * r)),
        },
        BigItem {
            tag: "3i",
            factor: t02,
            plain: true,
            period: p3,
            level: p3,
            const_level: c3,
            index: |m, r| (int(1 - 4 * r * (m + 1)), rat(1, 2) + int(4 * r), rat(-1, 2) - int(4 * r)),
        },
        BigItem {
            tag: "3ii",
            factor: t02,
            plain: false,
            period: p3,
            level: p3,
            const_level: c3,
            index: |m, r| (int(1 + 4 * r * (m + 1)), rat(-1, 2) + int(4 * r), rat(1, 2) - int(4 * r)),
        },
        BigItem {
            tag: "4i",
            factor: t22,
            plain: true,
            period: p3,
            level: p3,
            const_level: c3,
            index: |m, r| {
                let t = 2 * (2 * r + 1);
                (int(1 - t * (m + 1)), rat(1, 2) + int(t), rat(-1, 2) - int(t))
            },
        },
        BigItem {
            tag: "4ii",
            factor: t22,
            plain: false,
            period: p3,
            level: p3,
            const_level: c3,
            // the second index is read as ½ − 2(2r+1), matching the first
            index: |m, r| {
                let t = 2 * (2 * r + 1);
                (int(1 + t * (m + 1)), rat(-1, 2) + int(t), rat(1, 2) - int(t))
            },
        },
        BigItem {
            tag: "5i",
            factor: v10,
            plain: true,
            period: p6,
            level: p3,
            const_level: c3,
            // constant index 1 + (1−2r)(m+1); with −1 in place of 1 the identity fails
            index: |m, r| (int(1 + (1 - 2 * r) * (m + 1)), rat(-1, 2) + int(2 * r), rat(1, 2) - int(2 * r)),
        },
        BigItem {
            tag: "5ii",
            factor: v10,
            plain: false,
            period: p6,
            level: p3,
            const_level: c3,
            // likewise 1 + (1+2r)(m+1)
            index: |m, r| (int(1 + (1 + 2 * r) * (m + 1)), rat(1, 2) + int(2 * r), rat(-1, 2) - int(2 * r)),
        },
    ]
}

/// Right-hand side of one multiplication-note item; exposed so that the
/// literal reading of an index can be compared against the corrected one.
pub fn big_multiplication_rhs(
    period: i64,
    level: i64,
    const_level: i64,
    index: impl Fn(i64) -> (Rat, Rat, Rat),
) -> Result<Lazy> {
    let mut terms = Vec::new();
    for r in 0..period {
        let (c, a, b) = index(r);
        terms.push(theta_at_zero(c, const_level)?.mul(&bracket_ab(a, b, level)?));
    }
    Ok(Lazy::sum(&terms))
}

fn big_multiplication(out: &mut Vec<IdentityCase>) {
    for item in big_items() {
        for m in 1..=3i64 {
            let BigItem {
                factor,
                plain,
                period,
                level,
                const_level,
                index,
                ..
            } = item;
            let left = if plain { "B(½,−½)" } else { "B(−½,½)" };
            equal(
                out,
                format!("S5.bigmult.item{}.m{m}", item.tag),
                format!(
                    "f·{left}_{{{}}} = Σ_{{r mod {}}} θ_{{c(r),{}}}(τ,0)·B(a(r),b(r))_{{{}}}",
                    m + 1,
                    period(m),
                    const_level(m),
                    level(m)
                ),
                move || {
                    let h = rat(1, 2);
                    let br = if plain { bracket_ab(h, -h, m + 1)? } else { bracket_ab(-h, h, m + 1)? };
                    let lhs = factor()?.mul(&br);
                    let rhs = big_multiplication_rhs(period(m), level(m), const_level(m), |r| index(m, r))?;
                    Ok((lhs, rhs))
                },
            );
        }
    }
}

fn closure_lemma(out: &mut Vec<IdentityCase>) {
    use Sector::{Half, Integer};
    // (tag, factor, extra level, source sector, target sector, odd m only, even m only)
    type Factor = fn() -> Result<Lazy>;
    let items: Vec<(String, Factor, u32, Sector, Sector, bool, bool)> = vec![
        ("item1".into(), (|| theta(int(0), 1)) as Factor, 1, Half, Half, false, false),
        ("item2i".into(), || theta(int(1), 1), 1, Half, Integer, false, true),
        ("item2ii".into(), || theta(int(1), 1), 1, Integer, Half, true, false),
        ("item3i.j0".into(), || theta(int(0), 2), 2, Half, Half, false, false),
        ("item3i.j2".into(), || theta(int(2), 2), 2, Half, Half, false, false),
        ("item3ii.j0".into(), || theta(int(0), 2), 2, Integer, Integer, true, false),
        ("item3ii.j2".into(), || theta(int(2), 2), 2, Integer, Integer, true, false),
        ("item4i".into(), || vt(Mumford::M10), 2, Half, Integer, true, false),
        ("item4ii".into(), || vt(Mumford::M10), 2, Integer, Half, true, false),
        ("item5i.b0".into(), || Ok(vt(Mumford::M10)?.mul(&vt(Mumford::M00)?)), 4, Half, Integer, true, false),
        ("item5i.b1".into(), || Ok(vt(Mumford::M10)?.mul(&vt(Mumford::M01)?)), 4, Half, Integer, true, false),
        ("item5ii.b0".into(), || Ok(vt(Mumford::M10)?.mul(&vt(Mumford::M00)?)), 4, Integer, Half, true, false),
        ("item5ii.b1".into(), || Ok(vt(Mumford::M10)?.mul(&vt(Mumford::M01)?)), 4, Integer, Half, true, false),
    ];
    for (tag, factor, extra, from, to, odd_only, even_only) in items {
        for m in 1..=3u32 {
            if (odd_only && m % 2 == 0) || (even_only && m % 2 == 1) {
                continue;
            }
            member(
                out,
                format!("S5.closure.{tag}.m{m}"),
                format!(
                    "f·U^{{[{m},{}]}} ⊂ U^{{[{},{}]}}",
                    half_sector(from),
                    m + extra,
                    half_sector(to)
                ),
                move || Ok((times(&factor()?, &u_basis(m, from)?), u_basis(m + extra, to)?)),
            );
        }
    }
}

/// Level shift and target sector of ch·f for f in sector `s`, if the
/// hypotheses of the closure lemma hold.
fn character_action(label: ModuleLabel, m: u32, s: Sector) -> Option<(u32, Sector)> {
    let odd = m % 2 == 1;
    match (label.m, label.m2) {
        (1, 0) => (s == Sector::Half).then_some((1, Sector::Half)),
        // m + 2s odd
        (1, 1) => ((m + if s == Sector::Half { 1 } else { 0 }) % 2 == 1).then_some((1, shift_half(s))),
        (2, 0) | (2, 2) => (s == Sector::Half || odd).then_some((2, s)),
        (2, 1) => odd.then_some((2, shift_half(s))),
        (4, _) => odd.then_some((4, shift_half(s))),
        _ => None,
    }
}

fn character_closure(out: &mut Vec<IdentityCase>) {
    for label in ModuleLabel::SUPPORTED {
        for m in 1..=3u32 {
            for s in [Sector::Half, Sector::Integer] {
                if s == Sector::Integer && m % 2 == 0 {
                    continue;
                }
                let Some((extra, to)) = character_action(label, m, s) else {
                    continue;
                };
                for (space, basis) in [("U", u_basis as fn(u32, Sector) -> Result<Vec<Lazy>>), ("V", v_basis)] {
                    member(
                        out,
                        format!("S5.chclosure-{space}.{}-{}.m{m}.{s}", label.m, label.m2),
                        format!(
                            "ch({},{})·{space}^{{[{m},{}]}} ⊂ {space}^{{[{},{}]}}",
                            label.m,
                            label.m2,
                            half_sector(s),
                            m + extra,
                            half_sector(to)
                        ),
                        move || Ok((times(&character(label)?, &basis(m, s)?), basis(m + extra, to)?)),
                    );
                }
            }
        }
    }
}

fn derived(out: &mut Vec<IdentityCase>) {
    case(
        out,
        "S5.R0.zfree".into(),
        Kind::Zfree,
        "η·F^{[1,½]}/θ_{0,1} involves no power of ζ".into(),
        || Ok(Goal::ZFree(derived_denominator()?)),
    );
    member(out, "S5.R0.level1-half".into(), "R₀·ch(1,0) ∈ span{F^{[1,½]}}".into(), || {
        Ok((vec![derived_denominator()?.mul(&ch(1, 0)?)], v_basis(1, Sector::Half)?))
    });
    member(out, "S5.R0.level1-integer".into(), "R₀·ch(1,1) ∈ span{F^{[1,1]}}".into(), || {
        Ok((vec![derived_denominator()?.mul(&ch(1, 1)?)], v_basis(1, Sector::Integer)?))
    });
    case(
        out,
        "S5.R0.level2-half".into(),
        Kind::Span,
        "span{R₀·ch(2,0), R₀·ch(2,2)} = span{F^{[2,½]}, F^{[2,3/2]}}".into(),
        || {
            let r0 = derived_denominator()?;
            Ok(Goal::Span(
                vec![r0.mul(&ch(2, 0)?), r0.mul(&ch(2, 2)?)],
                v_basis(2, Sector::Half)?,
            ))
        },
    );
}

fn label(m: u32, m2: u32) -> ModuleLabel {
    ModuleLabel { m, m2 }
}

/// Products of characters land in the span of the characters one level up.
fn final_cases(out: &mut Vec<IdentityCase>) {
    let l = label;
    let pairs: [(u32, Vec<(ModuleLabel, ModuleLabel)>); 6] = [
        (1, vec![(l(1, 0), l(1, 0)), (l(1, 0), l(2, 0)), (l(1, 0), l(2, 2))]),
        (2, vec![(l(1, 1), l(1, 1)), (l(1, 1), l(2, 0)), (l(1, 1), l(2, 2))]),
        (
            3,
            vec![
                (l(2, 0), l(1, 0)),
                (l(2, 0), l(2, 0)),
                (l(2, 0), l(2, 2)),
                (l(2, 2), l(1, 0)),
                (l(2, 2), l(2, 2)),
            ],
        ),
        (4, vec![(l(2, 0), l(1, 1)), (l(2, 2), l(1, 1))]),
        (5, vec![(l(2, 1), l(1, 0)), (l(2, 1), l(1, 1))]),
        (
            6,
            vec![(l(4, 1), l(1, 0)), (l(4, 1), l(1, 1)), (l(4, 3), l(1, 0)), (l(4, 3), l(1, 1))],
        ),
    ];
    // through the numerators: R₀·ch·ch′ ∈ V^{[m+m′, (m₂+m₂′+1)/2]}
    for (c, list) in pairs {
        for (a, b) in list {
            let sector = Sector::of(rat((a.m2 + b.m2 + 1) as i64, 2));
            member(
                out,
                format!("S5.final.case{c}.{}-{}x{}-{}", a.m, a.m2, b.m, b.m2),
                format!(
                    "R₀·ch({a})·ch({b}) ∈ V^{{[{},{}]}}",
                    a.m + b.m,
                    half_sector(sector)
                ),
                move || {
                    let t = derived_denominator()?.mul(&character(a)?).mul(&character(b)?);
                    Ok((vec![t], v_basis(a.m + b.m, sector)?))
                },
            );
        }
    }
    // directly in the character basis
    let direct: [(u32, ModuleLabel, ModuleLabel); 6] = [
        (7, l(1, 0), l(1, 0)),
        (7, l(1, 0), l(1, 1)),
        (7, l(1, 1), l(1, 0)),
        (7, l(1, 1), l(1, 1)),
        (8, l(2, 1), l(2, 0)),
        (8, l(2, 1), l(2, 2)),
    ];
    for (c, a, b) in direct {
        let level = a.m + b.m;
        let parity = (a.m2 + b.m2) % 2;
        let targets: Vec<ModuleLabel> = ModuleLabel::SUPPORTED
            .into_iter()
            .filter(|t| t.m == level && t.m2 % 2 == parity)
            .collect();
        let names: Vec<String> = targets.iter().map(|t| format!("ch({t})")).collect();
        member(
            out,
            format!("S5.final.case{c}.{}-{}x{}-{}", a.m, a.m2, b.m, b.m2),
            format!("ch({a})·ch({b}) ∈ span{{{}}}", names.join(", ")),
            move || {
                let t = character(a)?.mul(&character(b)?);
                let basis = targets.iter().map(|&t| character(t)).collect::<Result<_>>()?;
                Ok((vec![t], basis))
            },
        );
    }
}
