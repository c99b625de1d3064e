//! Character numerators F^{[m,s]}, the U-space generators, the explicit
//! characters at levels 1, 2 and 4, and the derived denominator.
//!
//! Numerators are defined by their closed theta/eta expansions; nothing here
//! goes through an Appell–Lerch sum.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_traits::{Signed, Zero};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::lazy::Lazy;
use crate::rat::{int, rat, Rat};
use crate::series::Series;
use crate::theta::{eta_lazy, eta_product_lazy, mumford_lazy, theta_pm_lazy, Mumford, ThetaSpec};

/// Which U/V family: s ∈ ½ + ℤ or s ∈ ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Half,
    Integer,
}

impl Sector {
    pub fn of(s: Rat) -> Sector {
        if s.is_integer() {
            Sector::Integer
        } else {
            Sector::Half
        }
    }

    pub fn flip(self) -> Sector {
        match self {
            Sector::Half => Sector::Integer,
            Sector::Integer => Sector::Half,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Half => "half",
            Sector::Integer => "integer",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sector> {
        match s {
            "half" => Ok(Sector::Half),
            "integer" | "int" => Ok(Sector::Integer),
            _ => Err(Error::InvalidArgument(format!("unknown sector {s:?}"))),
        }
    }
}

/// A character label (m, m₂) with 0 ≤ m₂ ≤ m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleLabel {
    pub m: u32,
    pub m2: u32,
}

impl ModuleLabel {
    pub const SUPPORTED: [ModuleLabel; 7] = [
        ModuleLabel { m: 1, m2: 0 },
        ModuleLabel { m: 1, m2: 1 },
        ModuleLabel { m: 2, m2: 0 },
        ModuleLabel { m: 2, m2: 1 },
        ModuleLabel { m: 2, m2: 2 },
        ModuleLabel { m: 4, m2: 1 },
        ModuleLabel { m: 4, m2: 3 },
    ];

    pub fn new(m: u32, m2: u32) -> Result<Self> {
        if m == 0 || m2 > m {
            return Err(Error::InvalidArgument(format!(
                "label ({m}, {m2}) needs m >= 1 and 0 <= m2 <= m"
            )));
        }
        Ok(ModuleLabel { m, m2 })
    }

    pub fn is_supported(&self) -> bool {
        Self::SUPPORTED.contains(self)
    }

    /// Even m₂ pairs with the half sector, odd m₂ with the integer sector.
    pub fn sector(&self) -> Sector {
        if self.m2 % 2 == 0 {
            Sector::Half
        } else {
            Sector::Integer
        }
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.m, self.m2)
    }
}

impl FromStr for ModuleLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected m:m2, got {s:?}")))?;
        let m = a.trim().parse().map_err(|_| Error::Parse(format!("bad m in {s:?}")))?;
        let m2 = b.trim().parse().map_err(|_| Error::Parse(format!("bad m2 in {s:?}")))?;
        ModuleLabel::new(m, m2)
    }
}

fn cache() -> &'static RwLock<HashMap<String, Lazy>> {
    static CACHE: OnceLock<RwLock<HashMap<String, Lazy>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shares one lazily-expanded node per key across the whole process.
fn memo(key: String, build: impl FnOnce() -> Result<Lazy>) -> Result<Lazy> {
    if let Some(x) = cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(x.clone());
    }
    let node = build()?.cached();
    let mut w = cache().write().unwrap_or_else(|e| e.into_inner());
    Ok(w.entry(key).or_insert(node).clone())
}

fn sign(neg: bool) -> CycloNum {
    CycloNum::from_i64(if neg { -1 } else { 1 })
}

fn minus_i() -> CycloNum {
    -CycloNum::i()
}

pub fn theta(j: Rat, m: i64) -> Result<Lazy> {
    memo(format!("theta:{j}:{m}"), || ThetaSpec::jm(j, m).lazy())
}

/// [θ_{k,m} − θ_{−k,m}](τ, z).
pub fn d_k(k: Rat, m: i64) -> Result<Lazy> {
    memo(format!("D:{k}:{m}"), || Ok(theta(k, m)?.sub(&theta(-k, m)?)))
}

/// θ_{j,m}(τ, 0).
pub fn theta_at_zero(j: Rat, m: i64) -> Result<Lazy> {
    memo(format!("theta0:{j}:{m}"), || ThetaSpec::jm(j, m).at_zero().lazy())
}

/// 1/θ_{±1/2,1}, shared by every bracket.
fn inv_theta_half(j: Rat) -> Result<Lazy> {
    memo(format!("inv-theta:{j}:1"), || theta(j, 1)?.inv())
}

/// θ_{a,M}/θ_{−1/2,1} − θ_{b,M}/θ_{1/2,1}.
pub fn bracket_ab(a: Rat, b: Rat, mm: i64) -> Result<Lazy> {
    memo(format!("bracket:{a}:{b}:{mm}"), || {
        let left = theta(a, mm)?.mul(&inv_theta_half(rat(-1, 2))?);
        let right = theta(b, mm)?.mul(&inv_theta_half(rat(1, 2))?);
        Ok(left.sub(&right))
    })
}

/// θ_{J,M}/θ_{−1/2,1} − θ_{−J,M}/θ_{1/2,1}.
pub fn bracket(jj: Rat, mm: i64) -> Result<Lazy> {
    bracket_ab(jj, -jj, mm)
}

/// The mirrored bracket θ_{−J,M}/θ_{−1/2,1} − θ_{J,M}/θ_{1/2,1}.
pub fn bracket_mirror(jj: Rat, mm: i64) -> Result<Lazy> {
    bracket_ab(-jj, jj, mm)
}

/// Generators of U^{[m,½]} (bracket with J = ½ and D_k for odd k < m) or of
/// U^{[m,0]} (bracket with J = m + ½ and D_k for even k < m).
pub fn u_basis(m: u32, sector: Sector) -> Result<Vec<Lazy>> {
    let mi = m as i64;
    let (jj, first_k) = match sector {
        Sector::Half => (rat(1, 2), 1),
        Sector::Integer => (int(mi) + rat(1, 2), 2),
    };
    let mut out = vec![bracket(jj, mi + 1)?];
    let mut k = first_k;
    while k <= mi - 1 {
        out.push(d_k(int(k), mi)?);
        k += 2;
    }
    Ok(out)
}

/// Coefficient of D in the triple sums, for one odd k:
/// Σ_{j≥1} (−1)^j [ Σ_{r=1}^{j} (t = 2mr − k, phases (2mr+k, 2mr−k))
///                 − Σ_{r=0}^{j−1} (t = 2mr + k, phases (2mr−k, 2mr+k)) ]
/// of q^{j² − t²/4m} { q^{(j+P)t} e^{πi a/2} + q^{(j−P)t} e^{πi b/2} }, P = p + δ.
fn triple_coefficient(m: i64, k: i64, pp: Rat) -> Lazy {
    let mr = int(m);
    let pabs = pp.abs();
    // every exponent is at least j² − 2m|P|j ≥ −m²P²
    let floor = -(mr * pabs) * (mr * pabs);
    Lazy::new(floor, move |order| {
        let mut out = Series::zero(order);
        let mp = crate::rat::to_f64(&(mr * pabs));
        let j_max = (mp + (mp * mp + crate::rat::to_f64(&order)).max(0.0).sqrt()).ceil() as i64 + 1;
        for j in 1..=j_max {
            let jr = int(j);
            let bound = jr * jr - int(2) * mr * pabs * jr;
            let parity = if j % 2 == 0 { 1 } else { -1 };
            let mut emit = |t: i64, pa: i64, pb: i64, outer: i64| -> Result<()> {
                let tr = int(t);
                let base = jr * jr - tr * tr / (int(4) * mr);
                for (shift, ph) in [((jr + pp) * tr, pa), ((jr - pp) * tr, pb)] {
                    let e = base + shift;
                    if e < bound {
                        return Err(Error::Inconsistency(format!(
                            "triple-sum term q^{e} below its bound {bound} (m={m}, k={k}, j={j})"
                        )));
                    }
                    if e < order {
                        let c = CycloNum::phase(&rat(ph, 4))?.scale(&int(parity * outer));
                        out.add_term(e, Rat::zero(), c);
                    }
                }
                Ok(())
            };
            for r in 1..=j {
                emit(2 * m * r - k, 2 * m * r + k, 2 * m * r - k, 1)?;
            }
            for r in 0..j {
                emit(2 * m * r + k, 2 * m * r - k, 2 * m * r + k, -1)?;
            }
        }
        Ok(out)
    })
    .cached()
}

/// Σ_{k odd < m} C_k · D_{k+offset}, the mock part of both numerator families.
fn triple_sum(m: i64, pp: Rat, offset: i64) -> Result<Lazy> {
    let mut terms = Vec::new();
    let mut k = 1;
    while k <= m - 1 {
        terms.push(triple_coefficient(m, k, pp).mul(&d_k(int(k + offset), m)?));
        k += 2;
    }
    Ok(Lazy::sum(&terms))
}

fn check_level(m: u32) -> Result<i64> {
    if m == 0 {
        return Err(Error::InvalidArgument("level m must be positive".into()));
    }
    Ok(m as i64)
}

fn check_p(p: i64) -> Result<()> {
    if p < 0 {
        return Err(Error::InvalidArgument(format!(
            "shift p must be non-negative, got {p}"
        )));
    }
    Ok(())
}

/// The pieces of the half-sector expansion at shift p:
/// F = N / θ^{(±)}_{m(2p+½),m+1}(τ,0) + tail.
pub struct HalfParts {
    pub numerator: Lazy,
    pub denominator: Lazy,
    pub tail: Lazy,
}

pub fn numerator_half_parts(m: u32, p: i64) -> Result<HalfParts> {
    let mi = check_level(m)?;
    check_p(p)?;
    let pp = int(p) + rat(1, 4);
    let sgn = sign((mi * p) % 2 != 0);
    let eta3 = eta_product_lazy(&[(int(2), 3)]);
    let br = bracket(int(2 * p) + rat(1, 2), mi + 1)?;
    let head = eta3.mul(&br).scale(&minus_i());
    let pref = -(int(mi) / int(mi + 1)) * pp * pp;
    let mock = triple_sum(mi, pp, 0)?.shift(pref, Rat::zero());
    let numerator = head.add(&mock).scale(&sgn);
    // + for odd m, the sign-twisted theta for even m
    let denominator = theta_pm_lazy(mi % 2 == 1, int(mi) * (int(2 * p) + rat(1, 2)), int(mi + 1))?;
    let mut tail_terms = Vec::new();
    for k in 1..=(p * mi) {
        let e = -(int(k) - rat(1, 2) + rat(mi, 4)) * (int(k) - rat(1, 2) + rat(mi, 4)) / int(mi);
        tail_terms.push(
            d_k(int(2 * k - 1), mi)?
                .shift(e, Rat::zero())
                .scale(&sign(k % 2 == 1)),
        );
    }
    let tail = Lazy::sum(&tail_terms).scale(&minus_i());
    Ok(HalfParts {
        numerator,
        denominator,
        tail,
    })
}

/// F^{[m,½]} from its closed expansion at shift p ≥ 0.
pub fn numerator_half(m: u32, p: i64) -> Result<Lazy> {
    memo(format!("Fhalf:{m}:{p}"), || {
        let parts = numerator_half_parts(m, p)?;
        Ok(parts.numerator.div(&parts.denominator)?.add(&parts.tail))
    })
}

/// F^{[m,0]} (odd m) from its closed expansion at shift p ≥ 0.
pub fn numerator_int(m: u32, p: i64) -> Result<Lazy> {
    let mi = check_level(m)?;
    if mi % 2 == 0 {
        return Err(Error::IntegerSectorEvenLevel(m));
    }
    check_p(p)?;
    memo(format!("Fint:{m}:{p}"), || {
        let pp = int(p) - rat(1, 4);
        let outer = CycloNum::phase(&rat(-mi, 4))?.scale(&int(if (mi * p) % 2 == 0 { 1 } else { -1 }));
        let eta3 = eta_product_lazy(&[(int(2), 3)]);
        let br = bracket(int(2 * p) - rat(1, 2) + int(mi + 1), mi + 1)?;
        let head = eta3.mul(&br).scale(&minus_i());
        let pref = -(int(mi) / int(mi + 1)) * pp * pp;
        let mock = triple_sum(mi, pp, mi)?.shift(pref, Rat::zero());
        let theta0 = theta_at_zero(int(mi) * (int(2 * p) - rat(1, 2)), mi + 1)?;
        let quotient = head.add(&mock).scale(&outer).div(&theta0)?;

        let mut extra = Vec::new();
        let psign = if (mi * p) % 2 == 0 { 1 } else { -1 };
        for k in 1..=((mi - 1) / 2) {
            let x = int(p) + rat(1, 4) - rat(k, mi);
            let e = -int(mi) * x * x;
            extra.push(
                d_k(int(2 * k), mi)?
                    .shift(e, Rat::zero())
                    .scale(&CycloNum::from_i64(psign * if k % 2 == 0 { 1 } else { -1 })),
            );
        }
        for k in 1..=(p * mi) {
            let x = int(k) + rat(mi, 4);
            let e = -x * x / int(mi);
            extra.push(
                d_k(int(2 * k), mi)?
                    .shift(e, Rat::zero())
                    .scale(&sign(k % 2 == 1)),
            );
        }
        Ok(quotient.add(&Lazy::sum(&extra)))
    })
}

/// e^{−πis} q^{−(s − m/4)²/m} [θ_{2s,m} − θ_{−2s,m}], the step F^{[m,s]} − F^{[m,s+1]}.
pub fn ladder_step(m: u32, s: Rat) -> Result<Lazy> {
    let mi = check_level(m)?;
    if !(s * int(2)).is_integer() {
        return Err(Error::InvalidArgument(format!("s must lie in ½ℤ, got {s}")));
    }
    let x = s - rat(mi, 4);
    let e = -x * x / int(mi);
    Ok(d_k(s * int(2), mi)?
        .shift(e, Rat::zero())
        .scale(&CycloNum::phase(&(-s / int(2)))?))
}

/// F^{[m,s]} for s ∈ ½ℤ, reached from the base case by the ladder.
pub fn numerator(m: u32, s: Rat) -> Result<Lazy> {
    check_level(m)?;
    if !(s * int(2)).is_integer() {
        return Err(Error::InvalidArgument(format!("s must lie in ½ℤ, got {s}")));
    }
    let (base_s, base) = match Sector::of(s) {
        Sector::Half => (rat(1, 2), numerator_half(m, 0)?),
        Sector::Integer => (int(0), numerator_int(m, 0)?),
    };
    memo(format!("F:{m}:{s}"), || {
        let mut acc = base;
        let mut cur = base_s;
        while cur < s {
            acc = acc.sub(&ladder_step(m, cur)?);
            cur += int(1);
        }
        while cur > s {
            cur -= int(1);
            acc = acc.add(&ladder_step(m, cur)?);
        }
        Ok(acc)
    })
}

/// The numerators spanning V^{[m,½]} (s = ½, 3/2, … ≤ (m+1)/2) or
/// V^{[m,0]} (s = 1, 2, … ≤ (m+1)/2).
pub fn v_basis(m: u32, sector: Sector) -> Result<Vec<Lazy>> {
    let top = rat(m as i64 + 1, 2);
    let mut s = match sector {
        Sector::Half => rat(1, 2),
        Sector::Integer => int(1),
    };
    let mut out = Vec::new();
    while s <= top {
        out.push(numerator(m, s)?);
        s += int(1);
    }
    Ok(out)
}

/// The explicit characters at levels 1, 2 and 4.
pub fn character(label: ModuleLabel) -> Result<Lazy> {
    if !label.is_supported() {
        return Err(Error::UnsupportedCharacter {
            m: label.m,
            m2: label.m2,
        });
    }
    memo(format!("ch:{label}"), || {
        let (one, two, half) = (int(1), int(2), rat(1, 2));
        let mu = |l| mumford_lazy(l, one, one);
        let i = CycloNum::i();
        Ok(match (label.m, label.m2) {
            (1, 0) => theta(int(0), 1)?
                .mul(&eta_lazy(one, -1))
                .neg(),
            (1, 1) => theta(int(1), 1)?
                .mul(&eta_lazy(one, -1))
                .scale(&minus_i()),
            (2, m2 @ (0 | 2)) => {
                let a = eta_product_lazy(&[(half, 1), (one, -1), (two, -1)]).mul(&mu(Mumford::M01)?);
                let b = eta_product_lazy(&[(half, -1), (two, -1)]).mul(&mu(Mumford::M00)?);
                let inner = if m2 == 0 { a.add(&b) } else { a.sub(&b) };
                inner.scale_rat(rat(-1, 2))
            }
            (2, 1) => eta_product_lazy(&[(two, 1), (half, -1), (one, -1)])
                .mul(&mu(Mumford::M10)?)
                .scale(&i),
            (4, m2 @ (1 | 3)) => {
                let a = mu(Mumford::M01)?.mul(&mu(Mumford::M10)?);
                let b = eta_product_lazy(&[(two, 1), (one, -2)])
                    .mul(&mu(Mumford::M00)?)
                    .mul(&mu(Mumford::M10)?);
                let inner = if m2 == 1 { a.add(&b) } else { a.sub(&b) };
                inner
                    .mul(&eta_product_lazy(&[(half, -1), (two, -1)]))
                    .scale(&i.scale(&half))
            }
            _ => unreachable!("guarded by is_supported"),
        })
    })
}

/// R₀ := −η(τ) F^{[1,½]} / θ_{0,1}; agrees with the N=3 denominator up to a
/// z-free factor, which is all span statements can see.
pub fn derived_denominator() -> Result<Lazy> {
    memo("R0".to_string(), || {
        numerator_half(1, 0)?
            .mul(&eta_lazy(int(1), 1))
            .div(&theta(int(0), 1)?)
            .map(|x| x.neg())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(u_basis(1, Sector::Half).unwrap().len(), 1);
        assert_eq!(u_basis(4, Sector::Half).unwrap().len(), 3);
        assert_eq!(u_basis(3, Sector::Integer).unwrap().len(), 2);
        assert_eq!(v_basis(2, Sector::Half).unwrap().len(), 2);
        assert_eq!(v_basis(3, Sector::Half).unwrap().len(), 2);
        assert_eq!(v_basis(3, Sector::Integer).unwrap().len(), 2);
    }

    #[test]
    fn label_parsing() {
        let l: ModuleLabel = "2:1".parse().unwrap();
        assert_eq!(l, ModuleLabel { m: 2, m2: 1 });
        assert!("3:5".parse::<ModuleLabel>().is_err());
        assert!(matches!(
            character(ModuleLabel { m: 3, m2: 1 }),
            Err(Error::UnsupportedCharacter { m: 3, m2: 1 })
        ));
    }

    #[test]
    fn integer_sector_needs_odd_level() {
        assert!(matches!(numerator_int(2, 0), Err(Error::IntegerSectorEvenLevel(2))));
        assert!(matches!(numerator(4, int(1)), Err(Error::IntegerSectorEvenLevel(4))));
        assert!(numerator_half(1, -1).is_err());
    }

    #[test]
    fn level_one_ladder_step_vanishes() {
        let s = ladder_step(1, rat(1, 2)).unwrap().eval(int(6)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn character_10_leading_terms() {
        // −θ_{0,1}/η = −q^{−1/24}(1 + …)
        let s = character(ModuleLabel { m: 1, m2: 0 }).unwrap().eval(int(2)).unwrap();
        assert_eq!(s.ord(), rat(-1, 24));
        assert_eq!(s.coeff(&rat(-1, 24), &int(0)), CycloNum::from_i64(-1));
    }
}
