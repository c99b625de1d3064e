//! Exact rational exponents and indices.
//!
//! Exponents of q and ζ, theta indices and degrees are all small rationals,
//! so a machine-word ratio is plenty.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Renders as `p/q` with the denominator always present (`3/1`).
pub fn fmt_pq(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders integers bare and everything else as `p/q`.
pub fn fmt_short(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    } else if let Some((whole, frac)) = s.split_once('.') {
        // finite decimals only, e.g. "0.5" or "-1.25"
        let neg = whole.starts_with('-');
        let w: i64 = if whole == "-" || whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return Err(bad());
        }
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let scale = 10i64.pow(frac.len() as u32);
        let mag = w.abs() * scale + f;
        Ok(Rat::new(if neg { -mag } else { mag }, scale))
    } else {
        Ok(Rat::from_integer(s.parse().map_err(|_| bad())?))
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn floor_i64(r: &Rat) -> i64 {
    Integer::div_floor(r.numer(), r.denom())
}

pub fn ceil_i64(r: &Rat) -> i64 {
    -Integer::div_floor(&-r.numer(), r.denom())
}

/// Greatest common divisor of two positive rationals: the largest g with a/g, b/g ∈ ℤ.
pub fn gcd_rat(a: &Rat, b: &Rat) -> Rat {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let n = a.numer().abs() * b.denom();
    let m = b.numer().abs() * a.denom();
    Rat::new(n.gcd(&m), a.denom() * b.denom())
}

pub fn min(a: Rat, b: Rat) -> Rat {
    if a < b {
        a
    } else {
        b
    }
}

pub fn max(a: Rat, b: Rat) -> Rat {
    if a > b {
        a
    } else {
        b
    }
}
