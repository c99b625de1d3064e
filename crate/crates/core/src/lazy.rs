//! Order-driven series expressions.
//!
//! A [`Lazy`] is a recipe that, asked for order K, produces a series exact
//! below q^K. Products, quotients and rescalings work out for themselves how
//! far each operand must be expanded, so callers only ever state the order
//! they want to compare at.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::rat::{self, int, Rat};
use crate::series::Series;

type Builder = dyn Fn(Rat) -> Result<Series> + Send + Sync;

#[derive(Clone)]
pub struct Lazy {
    /// A lower bound for the q-order of the represented series.
    ord: Rat,
    build: Arc<Builder>,
}

impl fmt::Debug for Lazy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lazy(ord >= {})", self.ord)
    }
}

/// How far past the lower bound we look for the leading term of a divisor.
const PROBE_STEPS: [i64; 6] = [1, 2, 4, 8, 16, 32];

impl Lazy {
    /// Wraps a builder. `build(K)` must return a series trusted at least below K,
    /// and `ord` must not exceed the true order.
    pub fn new<F>(ord: Rat, build: F) -> Self
    where
        F: Fn(Rat) -> Result<Series> + Send + Sync + 'static,
    {
        Lazy {
            ord,
            build: Arc::new(build),
        }
    }

    pub fn ord_bound(&self) -> Rat {
        self.ord
    }

    /// Exact expansion below q^order (the returned cutoff equals `order`).
    pub fn eval(&self, order: Rat) -> Result<Series> {
        let s = (self.build)(order)?;
        if s.cutoff() < order {
            return Err(Error::InsufficientOrder {
                requested: order,
                available: s.cutoff(),
            });
        }
        Ok(s.truncate(order))
    }

    pub fn zero() -> Self {
        Lazy::new(Rat::zero(), |k| Ok(Series::zero(k)))
    }

    pub fn one() -> Self {
        Self::monomial(CycloNum::one(), Rat::zero(), Rat::zero())
    }

    pub fn monomial(c: CycloNum, qexp: Rat, zexp: Rat) -> Self {
        Lazy::new(qexp, move |k| {
            Ok(Series::monomial(c.clone(), qexp, zexp, k))
        })
    }

    /// A fixed, already-truncated series; orders beyond its cutoff are refused.
    pub fn fixed(s: Series) -> Self {
        let s = Arc::new(s);
        Lazy::new(s.ord(), move |k| {
            if k > s.cutoff() {
                Err(Error::InsufficientOrder {
                    requested: k,
                    available: s.cutoff(),
                })
            } else {
                Ok(s.truncate(k))
            }
        })
    }

    pub fn add(&self, other: &Lazy) -> Lazy {
        let (a, b) = (self.clone(), other.clone());
        Lazy::new(rat::min(a.ord, b.ord), move |k| Ok(&a.eval(k)? + &b.eval(k)?))
    }

    pub fn sub(&self, other: &Lazy) -> Lazy {
        let (a, b) = (self.clone(), other.clone());
        Lazy::new(rat::min(a.ord, b.ord), move |k| Ok(&a.eval(k)? - &b.eval(k)?))
    }

    pub fn neg(&self) -> Lazy {
        self.scale(&CycloNum::from_i64(-1))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Lazy>>(items: I) -> Lazy {
        let items: Vec<Lazy> = items.into_iter().cloned().collect();
        if items.is_empty() {
            return Lazy::zero();
        }
        let ord = items.iter().map(|x| x.ord).min().unwrap();
        Lazy::new(ord, move |k| {
            let mut acc = Series::zero(k);
            for x in &items {
                acc = &acc + &x.eval(k)?;
            }
            Ok(acc)
        })
    }

    pub fn scale(&self, c: &CycloNum) -> Lazy {
        let (a, c) = (self.clone(), c.clone());
        Lazy::new(a.ord, move |k| Ok(a.eval(k)?.scale(&c)))
    }

    pub fn scale_rat(&self, r: Rat) -> Lazy {
        self.scale(&CycloNum::from_rat(&r))
    }

    /// Multiplication by q^a ζ^b.
    pub fn shift(&self, qa: Rat, zb: Rat) -> Lazy {
        let a = self.clone();
        Lazy::new(a.ord + qa, move |k| Ok(a.eval(k - qa)?.shift(qa, zb)))
    }

    pub fn mul(&self, other: &Lazy) -> Lazy {
        let (a, b) = (self.clone(), other.clone());
        Lazy::new(a.ord + b.ord, move |k| {
            let sa = a.eval(k - b.ord)?;
            if sa.is_empty() {
                // a vanishes below k − ord(b), so the product vanishes below k
                return Ok(Series::zero(k));
            }
            // the actual order of `a` is usually far better than its bound
            let oa = rat::max(sa.ord(), a.ord);
            let sb = b.eval(k - oa)?;
            if sb.is_empty() {
                return Ok(Series::zero(k));
            }
            Ok(&sa * &sb)
        })
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Lazy>>(items: I) -> Lazy {
        items
            .into_iter()
            .fold(Lazy::one(), |acc, x| acc.mul(x))
    }

    pub fn pow(&self, e: u32) -> Lazy {
        (0..e).fold(Lazy::one(), |acc, _| acc.mul(self))
    }

    /// Locates the exact order of a nonzero series by expanding past its bound.
    pub fn exact_ord(&self) -> Result<Rat> {
        for step in PROBE_STEPS {
            let s = self.eval(self.ord + int(step))?;
            if !s.is_empty() {
                return Ok(s.ord());
            }
        }
        Err(Error::VanishingDenominator(
            self.ord + int(*PROBE_STEPS.last().unwrap()),
        ))
    }

    pub fn inv(&self) -> Result<Lazy> {
        let o = self.exact_ord()?;
        let a = self.clone();
        Ok(Lazy::new(-o, move |k| a.eval(k + o + o)?.inv()))
    }

    pub fn div(&self, other: &Lazy) -> Result<Lazy> {
        Ok(self.mul(&other.inv()?))
    }

    /// τ ↦ cq·τ, z ↦ cz·z.
    pub fn s_scale(&self, cq: Rat, cz: Rat) -> Result<Lazy> {
        if !cq.is_positive() {
            return Err(Error::InvalidArgument("q-scale must be positive".into()));
        }
        let a = self.clone();
        Ok(Lazy::new(a.ord * cq, move |k| a.eval(k / cq)?.s_scale(cq, cz)))
    }

    /// z ↦ z + c for a constant c.
    pub fn shift_z_const(&self, c: Rat) -> Lazy {
        let a = self.clone();
        Lazy::new(a.ord, move |k| a.eval(k)?.shift_z_const(&c))
    }

    pub fn zcomponent(&self, beta: Rat) -> Lazy {
        let a = self.clone();
        Lazy::new(a.ord, move |k| Ok(a.eval(k)?.zcomponent(&beta)))
    }

    pub fn at_z0(&self) -> Lazy {
        let a = self.clone();
        Lazy::new(a.ord, move |k| Ok(a.eval(k)?.at_z0()))
    }

    /// Memoizes the deepest expansion computed so far.
    pub fn cached(&self) -> Lazy {
        let a = self.clone();
        let memo: Arc<Mutex<Option<Series>>> = Arc::new(Mutex::new(None));
        Lazy::new(a.ord, move |k| {
            let mut slot = memo.lock().unwrap_or_else(|e| e.into_inner());
            if let Some(s) = slot.as_ref() {
                if s.cutoff() >= k {
                    return Ok(s.truncate(k));
                }
            }
            let s = a.eval(k)?;
            *slot = Some(s.clone());
            Ok(s)
        })
    }
}

impl std::ops::Add for &Lazy {
    type Output = Lazy;
    fn add(self, rhs: &Lazy) -> Lazy {
        Lazy::add(self, rhs)
    }
}

impl std::ops::Sub for &Lazy {
    type Output = Lazy;
    fn sub(self, rhs: &Lazy) -> Lazy {
        Lazy::sub(self, rhs)
    }
}

impl std::ops::Mul for &Lazy {
    type Output = Lazy;
    fn mul(self, rhs: &Lazy) -> Lazy {
        Lazy::mul(self, rhs)
    }
}

impl std::ops::Neg for &Lazy {
    type Output = Lazy;
    fn neg(self) -> Lazy {
        Lazy::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    /// 1 − q^step, built fresh at any order.
    fn one_minus(step: i64) -> Lazy {
        Lazy::one().sub(&Lazy::monomial(CycloNum::one(), int(step), int(0)))
    }

    #[test]
    fn quotient_reaches_requested_order() {
        let shifted = one_minus(1).shift(rat(-5, 2), rat(1, 2));
        let q = Lazy::one().div(&shifted).unwrap();
        let s = q.eval(int(6)).unwrap();
        assert_eq!(s.cutoff(), int(6));
        // q^{5/2} ζ^{-1/2} (1 + q + q² + …) below q⁶
        assert_eq!(s.num_terms(), 4);
        assert_eq!(s.ord(), rat(5, 2));
    }

    #[test]
    fn vanishing_denominator_is_reported() {
        let z = one_minus(1).sub(&one_minus(1));
        assert!(matches!(z.inv(), Err(Error::VanishingDenominator(_))));
    }

    #[test]
    fn cache_truncates_consistently() {
        let a = one_minus(1).pow(3).cached();
        let big = a.eval(int(5)).unwrap();
        let small = a.eval(int(2)).unwrap();
        assert_eq!(big.truncate(int(2)), small);
    }

    #[test]
    fn mul_uses_actual_orders() {
        // the bound of `a` is −10 but its true order is 0
        let a = Lazy::new(int(-10), |k| Ok(Series::one(k)));
        let b = one_minus(2);
        let p = a.mul(&b).eval(int(4)).unwrap();
        assert_eq!(p, one_minus(2).eval(int(4)).unwrap());
    }
}
