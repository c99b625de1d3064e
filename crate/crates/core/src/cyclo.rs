//! Exact arithmetic in the cyclotomic field ℚ(ζ₈) = ℚ[w]/(w⁴ + 1).
//!
//! A value is stored as four numerators over one positive common denominator,
//! reduced so that the five integers are coprime. Values whose integers fit in
//! an `i64` use a small inline representation; everything else falls back to
//! `BigInt`. Both forms are canonical, so derived equality is field equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { n: [i64; 4], d: i64 },
    Big { n: Box<[BigInt; 4]>, d: BigInt },
}

/// An element c0 + c1·w + c2·w² + c3·w³ of ℚ(ζ₈), w = e^{2πi/8}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNum(Repr);

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum(Repr::Small { n: [0; 4], d: 1 })
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        CycloNum(Repr::Small { n: [v, 0, 0, 0], d: 1 })
    }

    /// The basis element w^k (any integer k).
    pub fn w_pow(k: i64) -> Self {
        let k = k.rem_euclid(8);
        let sign = if k >= 4 { -1 } else { 1 };
        let mut n = [0i64; 4];
        n[(k % 4) as usize] = sign;
        CycloNum(Repr::Small { n, d: 1 })
    }

    /// The imaginary unit i = w².
    pub fn i() -> Self {
        Self::w_pow(2)
    }

    pub fn from_rat(r: &Rat) -> Self {
        Self::from_i128([*r.numer() as i128, 0, 0, 0], *r.denom() as i128)
    }

    pub fn from_bigrational(r: &BigRational) -> Self {
        Self::from_big(
            [r.numer().clone(), BigInt::zero(), BigInt::zero(), BigInt::zero()],
            r.denom().clone(),
        )
    }

    /// Builds c0 + c1 w + c2 w² + c3 w³ from rational components.
    pub fn from_components(c: [BigRational; 4]) -> Self {
        let d = c
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let n = c.map(|x| x.numer() * (&d / x.denom()));
        Self::from_big(n, d)
    }

    /// e^{2πi r}; requires 8r ∈ ℤ.
    pub fn phase(r: &Rat) -> Result<Self> {
        let eighths = *r * Rat::from_integer(8);
        if !eighths.is_integer() {
            return Err(Error::PhaseNotRepresentable(*r));
        }
        Ok(Self::w_pow(*eighths.numer()))
    }

    fn from_i128(mut n: [i128; 4], mut d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        if d < 0 {
            d = -d;
            for x in n.iter_mut() {
                *x = -*x;
            }
        }
        let g = n.iter().fold(d, |g, &x| gcd_i128(g, x));
        if g > 1 {
            d /= g;
            for x in n.iter_mut() {
                *x /= g;
            }
        }
        if n.iter().all(|&x| x == 0) {
            return Self::zero();
        }
        let fits = |x: i128| x >= i64::MIN as i128 && x <= i64::MAX as i128;
        if fits(d) && n.iter().all(|&x| fits(x)) {
            CycloNum(Repr::Small {
                n: n.map(|x| x as i64),
                d: d as i64,
            })
        } else {
            Self::from_big(n.map(BigInt::from), BigInt::from(d))
        }
    }

    fn from_big(mut n: [BigInt; 4], mut d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        if d.is_negative() {
            d = -d;
            for x in n.iter_mut() {
                *x = -&*x;
            }
        }
        if n.iter().all(|x| x.is_zero()) {
            return Self::zero();
        }
        let g = n.iter().fold(d.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            d = &d / &g;
            for x in n.iter_mut() {
                *x = &*x / &g;
            }
        }
        if let (Some(dd), Some(n0), Some(n1), Some(n2), Some(n3)) = (
            d.to_i64(),
            n[0].to_i64(),
            n[1].to_i64(),
            n[2].to_i64(),
            n[3].to_i64(),
        ) {
            return CycloNum(Repr::Small {
                n: [n0, n1, n2, n3],
                d: dd,
            });
        }
        CycloNum(Repr::Big {
            n: Box::new(n),
            d,
        })
    }

    fn big_parts(&self) -> ([BigInt; 4], BigInt) {
        match &self.0 {
            Repr::Small { n, d } => (n.map(BigInt::from), BigInt::from(*d)),
            Repr::Big { n, d } => ((**n).clone(), d.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small { n: [0, 0, 0, 0], .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Small { n: [1, 0, 0, 0], d: 1 })
    }

    /// True when the value lies in ℚ.
    pub fn is_rational(&self) -> bool {
        match &self.0 {
            Repr::Small { n, .. } => n[1] == 0 && n[2] == 0 && n[3] == 0,
            Repr::Big { n, .. } => n[1].is_zero() && n[2].is_zero() && n[3].is_zero(),
        }
    }

    pub fn components(&self) -> [BigRational; 4] {
        let (n, d) = self.big_parts();
        n.map(|x| BigRational::new(x, d.clone()))
    }

    /// Components rendered as `p/q` strings (denominator always present).
    pub fn component_strings(&self) -> [String; 4] {
        self.components()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
    }

    pub fn parse_components(parts: &[String]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Parse("expected four components".into()));
        }
        let mut out = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for (slot, s) in out.iter_mut().zip(parts) {
            *slot = s
                .trim()
                .parse::<BigRational>()
                .map_err(|_| Error::Parse(format!("bad component {s:?}")))?;
        }
        Ok(Self::from_components(out))
    }

    /// Field automorphism w ↦ w^k for odd k.
    pub fn galois(&self, k: i64) -> Self {
        debug_assert!(k % 2 != 0);
        let (n, d) = self.big_parts();
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (j, c) in n.into_iter().enumerate() {
            let e = (j as i64 * k).rem_euclid(8);
            let idx = (e % 4) as usize;
            if e >= 4 {
                out[idx] -= c;
            } else {
                out[idx] += c;
            }
        }
        Self::from_big(out, d)
    }

    /// Complex conjugation (w ↦ w⁻¹ = w⁷).
    pub fn conj(&self) -> Self {
        self.galois(7)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a⁻¹ = σ3(a)σ5(a)σ7(a) / N(a), with N(a) = a·σ3(a)σ5(a)σ7(a) ∈ ℚ
        let cofactor = &(&self.galois(3) * &self.galois(5)) * &self.galois(7);
        let norm = self * &cofactor;
        debug_assert!(norm.is_rational());
        let nr = norm.components()[0].clone();
        Ok(cofactor.scale_big(&nr.recip()))
    }

    pub fn scale_big(&self, r: &BigRational) -> Self {
        let (n, d) = self.big_parts();
        Self::from_big(n.map(|x| x * r.numer()), d * r.denom())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        match &self.0 {
            Repr::Small { n, d } => {
                let (rn, rd) = (*r.numer() as i128, *r.denom() as i128);
                Self::from_i128(n.map(|x| x as i128 * rn), *d as i128 * rd)
            }
            Repr::Big { .. } => self.scale_big(&BigRational::new(
                BigInt::from(*r.numer()),
                BigInt::from(*r.denom()),
            )),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let sgn: i128 = if negate_other { -1 } else { 1 };
        if let (Repr::Small { n: a, d: da }, Repr::Small { n: b, d: db }) = (&self.0, &other.0) {
            if da == db {
                let n = [0, 1, 2, 3].map(|k| a[k] as i128 + sgn * b[k] as i128);
                return Self::from_i128(n, *da as i128);
            }
            let (da, db) = (*da as i128, *db as i128);
            let mut n = [0i128; 4];
            let mut ok = true;
            for k in 0..4 {
                match (a[k] as i128)
                    .checked_mul(db)
                    .zip((b[k] as i128).checked_mul(da))
                    .and_then(|(x, y)| x.checked_add(sgn * y))
                {
                    Some(v) => n[k] = v,
                    None => ok = false,
                }
            }
            if let (true, Some(d)) = (ok, da.checked_mul(db)) {
                return Self::from_i128(n, d);
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let sg = BigInt::from(sgn);
        let n = [0, 1, 2, 3].map(|k| &a[k] * &db + &sg * &b[k] * &da);
        Self::from_big(n, da * db)
    }
}

impl Default for CycloNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.add_impl(rhs, true)
    }
}

impl Add for CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: CycloNum) -> CycloNum {
        self.add_impl(&rhs, false)
    }
}

impl Sub for CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: CycloNum) -> CycloNum {
        self.add_impl(&rhs, true)
    }
}

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        *self = self.add_impl(rhs, false);
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        *self = self.add_impl(rhs, true);
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        match &self.0 {
            Repr::Small { n, d } if n.iter().all(|&x| x != i64::MIN) => CycloNum(Repr::Small {
                n: n.map(|x| -x),
                d: *d,
            }),
            _ => {
                let (n, d) = self.big_parts();
                CycloNum::from_big(n.map(|x| -x), d)
            }
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if let (Repr::Small { n: a, d: da }, Repr::Small { n: b, d: db }) = (&self.0, &rhs.0) {
            // fast path: rational scalars (the common case) skip the convolution
            if b[1] == 0 && b[2] == 0 && b[3] == 0 && *db == 1 && a[1..].iter().all(|&x| x == 0) && *da == 1 {
                if let Some(v) = a[0].checked_mul(b[0]) {
                    return CycloNum(Repr::Small { n: [v, 0, 0, 0], d: 1 });
                }
            }
            let mut n = [0i128; 4];
            let mut ok = true;
            'outer: for i in 0..4 {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..4 {
                    if b[j] == 0 {
                        continue;
                    }
                    let p = a[i] as i128 * b[j] as i128;
                    let k = i + j;
                    let r = if k >= 4 {
                        n[k - 4].checked_sub(p)
                    } else {
                        n[k].checked_add(p)
                    };
                    match r {
                        Some(v) => n[k % 4] = v,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return CycloNum::from_i128(n, *da as i128 * *db as i128);
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = rhs.big_parts();
        let mut n = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for i in 0..4 {
            for j in 0..4 {
                let p = &a[i] * &b[j];
                let k = i + j;
                if k >= 4 {
                    n[k - 4] -= p;
                } else {
                    n[k] += p;
                }
            }
        }
        CycloNum::from_big(n, da * db)
    }
}

impl Mul for CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: CycloNum) -> CycloNum {
        &self * &rhs
    }
}

impl fmt::Display for CycloNum {
    /// `c0 + c1*w + c2*w^2 + c3*w^3`, zero terms elided, unit coefficients bare.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["", "w", "w^2", "w^3"];
        let mut first = true;
        for (k, c) in self.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mag_s = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            let body = match (k, mag.is_one()) {
                (0, _) => mag_s,
                (_, true) => names[k].to_string(),
                _ => format!("{}*{}", mag_s, names[k]),
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn cn(c: [i64; 4]) -> CycloNum {
        CycloNum::from_i128(c.map(|x| x as i128), 1)
    }

    #[test]
    fn phase_examples() {
        assert_eq!(CycloNum::phase(&rat(1, 2)).unwrap(), CycloNum::from_i64(-1));
        assert_eq!(CycloNum::phase(&rat(1, 4)).unwrap(), CycloNum::i());
        assert_eq!(CycloNum::phase(&rat(1, 8)).unwrap(), CycloNum::w_pow(1));
        assert_eq!(CycloNum::phase(&rat(9, 8)).unwrap(), CycloNum::w_pow(1));
        assert_eq!(CycloNum::phase(&rat(-3, 8)).unwrap(), CycloNum::w_pow(5));
        assert!(matches!(
            CycloNum::phase(&rat(1, 16)),
            Err(Error::PhaseNotRepresentable(_))
        ));
    }

    #[test]
    fn product_examples() {
        let a = cn([1, 0, 1, 0]);
        let b = cn([1, 0, -1, 0]);
        assert_eq!(&a * &b, CycloNum::from_i64(2));
        assert_eq!(&CycloNum::w_pow(1) * &CycloNum::w_pow(3), CycloNum::from_i64(-1));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(CycloNum::w_pow(1).inv().unwrap(), -CycloNum::w_pow(3));
        assert_eq!(
            CycloNum::from_i64(2).inv().unwrap(),
            CycloNum::from_rat(&rat(1, 2))
        );
        // (1 + w²)⁻¹ = (1 − w²)/2
        let x = cn([1, 0, 1, 0]);
        let expect = cn([1, 0, -1, 0]).scale(&rat(1, 2));
        assert_eq!(x.inv().unwrap(), expect);
        assert_eq!(&x * &expect, CycloNum::one());
        assert_eq!(CycloNum::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_is_unique() {
        let x = cn([3, -1, 2, 5]).scale(&rat(7, 3));
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z, CycloNum::zero());
    }

    #[test]
    fn display() {
        assert_eq!(CycloNum::zero().to_string(), "0");
        assert_eq!(cn([1, 0, -1, 0]).scale(&rat(1, 2)).to_string(), "1/2 - 1/2*w^2");
        assert_eq!(CycloNum::w_pow(7).to_string(), "-w^3");
        assert_eq!(cn([0, 2, 0, 0]).to_string(), "2*w");
    }

    #[test]
    fn big_fallback_roundtrip() {
        let big = CycloNum::from_i64(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big { .. }));
        let back = &sq * &big.inv().unwrap();
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));
        let s = &sq - &sq;
        assert!(s.is_zero());
    }

    #[test]
    fn components_roundtrip() {
        let x = cn([1, -2, 3, 0]).scale(&rat(-5, 6));
        let parts = x.component_strings();
        assert_eq!(parts[0], "-5/6");
        let y = CycloNum::parse_components(&parts.to_vec()).unwrap();
        assert_eq!(x, y);
        assert_eq!(CycloNum::from_rat(&int(4)), CycloNum::from_i64(4));
    }

    fn arb_cyclo() -> impl Strategy<Value = CycloNum> {
        (prop::array::uniform4(-9i64..=9), 1i64..=6)
            .prop_map(|(n, d)| CycloNum::from_i128(n.map(|x| x as i128), d as i128))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), CycloNum::one());
            }
        }

        #[test]
        fn phases_multiply(x in -16i64..16, y in -16i64..16) {
            let (r, s) = (rat(x, 8), rat(y, 8));
            let pr = CycloNum::phase(&r).unwrap();
            let ps = CycloNum::phase(&s).unwrap();
            prop_assert_eq!(&pr * &ps, CycloNum::phase(&(r + s)).unwrap());
            prop_assert_eq!(pr.pow(8), CycloNum::one());
        }
    }
}
