//! Truncated bivariate Laurent–Puiseux series in q and ζ over ℚ(ζ₈).
//!
//! Terms are grouped into q-layers; each layer is a finite Laurent polynomial
//! in ζ with rational exponents. Every series carries a finite `cutoff`: all
//! coefficients with q-exponent below it are exact, nothing at or above it is
//! stored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::rat::{self, fmt_pq, Rat};

/// A ζ-Laurent polynomial: ζ-exponent ↦ nonzero coefficient.
pub type Layer = BTreeMap<Rat, CycloNum>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    layers: BTreeMap<Rat, Layer>,
    cutoff: Rat,
}

/// One term c·q^α·ζ^β.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub coeff: CycloNum,
    pub qexp: Rat,
    pub zexp: Rat,
}

fn layer_add_into(dst: &mut Layer, src: &Layer, negate: bool) {
    for (z, c) in src {
        match dst.get_mut(z) {
            Some(d) => {
                if negate {
                    *d -= c;
                } else {
                    *d += c;
                }
                if d.is_zero() {
                    dst.remove(z);
                }
            }
            None => {
                dst.insert(*z, if negate { -c } else { c.clone() });
            }
        }
    }
}

/// dst += a·b (as ζ-polynomials).
fn layer_fma(dst: &mut Layer, a: &Layer, b: &Layer) {
    for (za, ca) in a {
        for (zb, cb) in b {
            let z = *za + *zb;
            let p = ca * cb;
            match dst.get_mut(&z) {
                Some(d) => {
                    *d += &p;
                    if d.is_zero() {
                        dst.remove(&z);
                    }
                }
                None => {
                    dst.insert(z, p);
                }
            }
        }
    }
}

impl Series {
    pub fn zero(cutoff: Rat) -> Self {
        Series {
            layers: BTreeMap::new(),
            cutoff,
        }
    }

    pub fn one(cutoff: Rat) -> Self {
        Self::monomial(CycloNum::one(), Rat::zero(), Rat::zero(), cutoff)
    }

    pub fn monomial(coeff: CycloNum, qexp: Rat, zexp: Rat, cutoff: Rat) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(qexp, zexp, coeff);
        s
    }

    pub fn from_terms<I>(terms: I, cutoff: Rat) -> Self
    where
        I: IntoIterator<Item = (Rat, Rat, CycloNum)>,
    {
        let mut s = Self::zero(cutoff);
        for (q, z, c) in terms {
            s.add_term(q, z, c);
        }
        s
    }

    /// Accumulates c·q^qexp·ζ^zexp; silently drops terms at or beyond the cutoff.
    pub fn add_term(&mut self, qexp: Rat, zexp: Rat, c: CycloNum) {
        if c.is_zero() || qexp >= self.cutoff {
            return;
        }
        let layer = self.layers.entry(qexp).or_default();
        match layer.get_mut(&zexp) {
            Some(d) => {
                *d += &c;
                if d.is_zero() {
                    layer.remove(&zexp);
                }
            }
            None => {
                layer.insert(zexp, c);
            }
        }
        if layer.is_empty() {
            self.layers.remove(&qexp);
        }
    }

    pub fn cutoff(&self) -> Rat {
        self.cutoff
    }

    /// Smallest q-exponent present; equals the cutoff for an empty series.
    pub fn ord(&self) -> Rat {
        self.layers.keys().next().copied().unwrap_or(self.cutoff)
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.layers.values().map(BTreeMap::len).sum()
    }

    pub fn layers(&self) -> &BTreeMap<Rat, Layer> {
        &self.layers
    }

    pub fn layer(&self, qexp: &Rat) -> Option<&Layer> {
        self.layers.get(qexp)
    }

    pub fn leading_layer(&self) -> Option<(Rat, &Layer)> {
        self.layers.iter().next().map(|(q, l)| (*q, l))
    }

    pub fn coeff(&self, qexp: &Rat, zexp: &Rat) -> CycloNum {
        self.layers
            .get(qexp)
            .and_then(|l| l.get(zexp))
            .cloned()
            .unwrap_or_default()
    }

    /// Terms in ascending (qexp, zexp) order.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, Rat, &CycloNum)> + '_ {
        self.layers
            .iter()
            .flat_map(|(q, l)| l.iter().map(move |(z, c)| (*q, *z, c)))
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms()
            .map(|(qexp, zexp, c)| Monomial {
                coeff: c.clone(),
                qexp,
                zexp,
            })
            .collect()
    }

    /// Lowers the cutoff (never raises it).
    pub fn truncate(&self, order: Rat) -> Self {
        if order >= self.cutoff {
            return self.clone();
        }
        Series {
            layers: self
                .layers
                .range(..order)
                .map(|(q, l)| (*q, l.clone()))
                .collect(),
            cutoff: order,
        }
    }

    pub fn is_zfree(&self) -> bool {
        self.layers
            .values()
            .all(|l| l.keys().all(|z| z.is_zero()))
    }

    /// All ζ-exponents that occur, ascending.
    pub fn zexps(&self) -> BTreeSet<Rat> {
        self.layers.values().flat_map(|l| l.keys().copied()).collect()
    }

    /// The z-free coefficient series of ζ^β.
    pub fn zcomponent(&self, beta: &Rat) -> Series {
        let mut out = Series::zero(self.cutoff);
        for (q, l) in &self.layers {
            if let Some(c) = l.get(beta) {
                out.layers.insert(*q, Layer::from([(Rat::zero(), c.clone())]));
            }
        }
        out
    }

    /// Specialization at z = 0 (sums each layer); the result is z-free.
    pub fn at_z0(&self) -> Series {
        let mut out = Series::zero(self.cutoff);
        for (q, l) in &self.layers {
            let s = l.values().fold(CycloNum::zero(), |acc, c| &acc + c);
            out.add_term(*q, Rat::zero(), s);
        }
        out
    }

    /// Multiplies by the scalar c.
    pub fn scale(&self, c: &CycloNum) -> Series {
        if c.is_zero() {
            return Series::zero(self.cutoff);
        }
        if c.is_one() {
            return self.clone();
        }
        Series {
            layers: self
                .layers
                .iter()
                .map(|(q, l)| (*q, l.iter().map(|(z, x)| (*z, x * c)).collect()))
                .collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Series {
        self.scale(&CycloNum::from_rat(r))
    }

    /// Multiplies by q^a·ζ^b; the cutoff moves by a.
    pub fn shift(&self, a: Rat, b: Rat) -> Series {
        Series {
            layers: self
                .layers
                .iter()
                .map(|(q, l)| {
                    let l = if b.is_zero() {
                        l.clone()
                    } else {
                        l.iter().map(|(z, c)| (*z + b, c.clone())).collect()
                    };
                    (*q + a, l)
                })
                .collect(),
            cutoff: self.cutoff + a,
        }
    }

    /// Argument rescaling τ ↦ cq·τ, z ↦ cz·z.
    pub fn s_scale(&self, cq: Rat, cz: Rat) -> Result<Series> {
        if !cq.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "q-scale must be positive, got {}",
                fmt_pq(&cq)
            )));
        }
        let mut out = Series::zero(self.cutoff * cq);
        for (q, z, c) in self.terms() {
            out.add_term(q * cq, z * cz, c.clone());
        }
        Ok(out)
    }

    /// The substitution z ↦ z + c for a constant c (ζ^β picks up e^{2πiβc}).
    pub fn shift_z_const(&self, c: &Rat) -> Result<Series> {
        let mut out = Series::zero(self.cutoff);
        for (q, l) in &self.layers {
            for (z, x) in l {
                out.add_term(*q, *z, x * &CycloNum::phase(&(*z * *c))?);
            }
        }
        Ok(out)
    }

    fn add_impl(&self, other: &Series, negate: bool) -> Series {
        let cutoff = rat::min(self.cutoff, other.cutoff);
        let mut layers: BTreeMap<Rat, Layer> = self
            .layers
            .range(..cutoff)
            .map(|(q, l)| (*q, l.clone()))
            .collect();
        for (q, l) in other.layers.range(..cutoff) {
            let dst = layers.entry(*q).or_default();
            layer_add_into(dst, l, negate);
            if dst.is_empty() {
                layers.remove(q);
            }
        }
        Series { layers, cutoff }
    }

    fn mul_impl(&self, other: &Series) -> Series {
        let cutoff = rat::min(self.cutoff + other.ord(), other.cutoff + self.ord());
        let mut layers: BTreeMap<Rat, Layer> = BTreeMap::new();
        for (qa, la) in &self.layers {
            for (qb, lb) in &other.layers {
                let q = *qa + *qb;
                if q >= cutoff {
                    break;
                }
                layer_fma(layers.entry(q).or_default(), la, lb);
            }
        }
        layers.retain(|_, l| !l.is_empty());
        Series { layers, cutoff }
    }

    /// Multiplicative inverse; the leading layer must be a single monomial.
    /// The result is trusted below `cutoff − 2·ord`.
    pub fn inv(&self) -> Result<Series> {
        let Some((q0, lead)) = self.leading_layer() else {
            return Err(Error::DivisionByZero);
        };
        if lead.len() != 1 {
            return Err(Error::NonUnitLeading(render_layer_body(lead)));
        }
        let (z0, c0) = lead.iter().next().map(|(z, c)| (*z, c.clone())).unwrap();
        let c0_inv = c0.inv()?;
        // u = a / (c0 q^q0 ζ^z0) has leading layer exactly 1
        let u = self.shift(-q0, -z0).scale(&c0_inv);
        let ucut = u.cutoff;
        let steps: Vec<(Rat, &Layer)> = u.layers.iter().skip(1).map(|(q, l)| (*q, l)).collect();
        let mut v: BTreeMap<Rat, Layer> = BTreeMap::new();
        let mut pending: BTreeSet<Rat> = BTreeSet::from([Rat::zero()]);
        while let Some(e) = pending.pop_first() {
            if e >= ucut {
                break;
            }
            // v_e = [e = 0] − Σ_{d>0} u_d · v_{e−d}
            let mut acc = Layer::new();
            if e.is_zero() {
                acc.insert(Rat::zero(), CycloNum::one());
            }
            for (d, ud) in &steps {
                if *d > e {
                    break;
                }
                if let Some(prev) = v.get(&(e - *d)) {
                    let mut t = Layer::new();
                    layer_fma(&mut t, ud, prev);
                    layer_add_into(&mut acc, &t, true);
                }
            }
            if !acc.is_empty() {
                for (d, _) in &steps {
                    let next = e + *d;
                    if next < ucut {
                        pending.insert(next);
                    }
                }
                v.insert(e, acc);
            }
        }
        let inv_u = Series {
            layers: v,
            cutoff: ucut,
        };
        Ok(inv_u.shift(-q0, -z0).scale(&c0_inv))
    }

    /// a^e for e ≥ 1 by repeated multiplication (cutoffs propagate per step).
    pub fn pow(&self, e: u32) -> Series {
        assert!(e >= 1, "pow requires a positive exponent");
        let mut acc = self.clone();
        for _ in 1..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact comparison of all terms with q-exponent below `order`.
    /// Returns the smallest (qexp, zexp) where the two series differ, if any.
    pub fn equal_up_to(&self, other: &Series, order: Rat) -> Result<Option<(Rat, Rat)>> {
        let avail = rat::min(self.cutoff, other.cutoff);
        if order > avail {
            return Err(Error::InsufficientOrder {
                requested: order,
                available: avail,
            });
        }
        Ok((self - other)
            .terms()
            .next()
            .filter(|(q, _, _)| *q < order)
            .map(|(q, z, _)| (q, z)))
    }

    /// Canonical flat rendering: `coeff * q^(p/r) * z^(s/t)` joined by ` + `.
    pub fn to_canonical_string(&self) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        self.terms()
            .map(|(q, z, c)| {
                format!(
                    "{} * q^({}) * z^({})",
                    paren_if_compound(c),
                    fmt_pq(&q),
                    fmt_pq(&z)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            terms: self
                .terms()
                .map(|(q, z, c)| (fmt_pq(&q), fmt_pq(&z), c.component_strings()))
                .collect(),
            cutoff: fmt_pq(&self.cutoff),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Series> {
        let mut s = Series::zero(rat::parse_rat(&j.cutoff)?);
        for (q, z, c) in &j.terms {
            s.add_term(
                rat::parse_rat(q)?,
                rat::parse_rat(z)?,
                CycloNum::parse_components(c)?,
            );
        }
        Ok(s)
    }
}

/// JSON wire form: `{"terms": [[q, z, [c0,c1,c2,c3]], …], "cutoff": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub terms: Vec<(String, String, [String; 4])>,
    pub cutoff: String,
}

fn paren_if_compound(c: &CycloNum) -> String {
    let s = c.to_string();
    if s[1..].contains(['+', '-']) {
        format!("({s})")
    } else {
        s
    }
}

fn fmt_exp(var: &str, e: &Rat) -> String {
    if e.is_one() && var == "q" {
        "q".to_string()
    } else if e.is_integer() {
        format!("{var}^{}", e.numer())
    } else {
        format!("{var}^({}/{})", e.numer(), e.denom())
    }
}

/// Splits c into (negative?, magnitude string) when c is a rational;
/// compound values are parenthesized and never treated as negative.
fn coeff_parts(c: &CycloNum) -> (bool, Option<String>) {
    if c.is_rational() {
        let r = &c.components()[0];
        let mag = r.abs();
        let s = if mag.is_one() {
            None
        } else if mag.is_integer() {
            Some(mag.numer().to_string())
        } else {
            Some(format!("{}/{}", mag.numer(), mag.denom()))
        };
        (r.is_negative(), s)
    } else {
        let s = c.to_string();
        if !s[1..].contains(['+', '-']) && s.starts_with('-') {
            (true, Some(s[1..].to_string()))
        } else {
            (false, Some(paren_if_compound(c)))
        }
    }
}

fn render_term(q: Option<&str>, z: &Rat, c: &CycloNum) -> (bool, String) {
    let (neg, mag) = coeff_parts(c);
    let zpart = (!z.is_zero()).then(|| fmt_exp("z", z));
    let parts: Vec<String> = [mag, q.map(str::to_string), zpart].into_iter().flatten().collect();
    let body = if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    };
    (neg, body)
}

fn render_layer_body(l: &Layer) -> String {
    let mut out = String::new();
    for (i, (z, c)) in l.iter().rev().enumerate() {
        let (neg, body) = render_term(None, z, c);
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push('-'),
            (_, false) => out.push('+'),
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Series {
    /// Layered form, e.g. `1 + q*(z^1+z^-1) + q^4*(z^2+z^-2)`;
    /// ζ-exponents descend inside each layer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (q, l)) in self.layers.iter().enumerate() {
            let qs = (!q.is_zero()).then(|| fmt_exp("q", q));
            let (neg, body) = if l.len() == 1 {
                let (z, c) = l.iter().next().unwrap();
                render_term(qs.as_deref(), z, c)
            } else {
                let inner = render_layer_body(l);
                match qs {
                    Some(qs) => (false, format!("{qs}*({inner})")),
                    None => (false, inner),
                }
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Series> for &'a Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                $body(self, rhs)
            }
        }
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Series, b: &Series| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &Series, b: &Series| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &Series, b: &Series| a.mul_impl(b));

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&CycloNum::from_i64(-1))
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
