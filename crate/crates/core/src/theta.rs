//! Jacobi thetas with affine arguments, sign-twisted thetas, eta products and
//! the four Mumford thetas.
//!
//! θ_{j,m}(τ,z) = Σ_{n ∈ j/2m + ℤ} q^{m n²} ζ^{m n}.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::lazy::Lazy;
use crate::rat::{self, ceil_i64, floor_i64, int, rat, Rat};
use crate::series::Series;

/// θ_{j,m}(c1·τ, a·z + b·τ + c), optionally sign-twisted along the coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    pub j: Rat,
    pub m: Rat,
    pub qscale: Rat,
    pub zcoeff: Rat,
    pub tshift: Rat,
    pub cshift: Rat,
    /// Weights the term n = j/2m + k by (−1)^k.
    pub twisted: bool,
}

impl ThetaSpec {
    pub fn new(j: Rat, m: Rat) -> Self {
        ThetaSpec {
            j,
            m,
            qscale: int(1),
            zcoeff: int(1),
            tshift: int(0),
            cshift: int(0),
            twisted: false,
        }
    }

    /// Shorthand for integer/half-integer indices given as (num, den).
    pub fn jm(j: Rat, m: i64) -> Self {
        Self::new(j, int(m))
    }

    pub fn qscale(mut self, c1: Rat) -> Self {
        self.qscale = c1;
        self
    }

    pub fn zcoeff(mut self, a: Rat) -> Self {
        self.zcoeff = a;
        self
    }

    pub fn tshift(mut self, b: Rat) -> Self {
        self.tshift = b;
        self
    }

    pub fn cshift(mut self, c: Rat) -> Self {
        self.cshift = c;
        self
    }

    /// The slice z = 0.
    pub fn at_zero(self) -> Self {
        self.zcoeff(int(0))
    }

    pub fn twisted(mut self, t: bool) -> Self {
        self.twisted = t;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.m.is_positive() {
            return Err(Error::InvalidArgument(format!("theta degree must be positive, got {}", self.m)));
        }
        if !self.qscale.is_positive() {
            return Err(Error::DivergentTruncation(format!(
                "q-scale {} leaves the exponent unbounded below",
                self.qscale
            )));
        }
        // m·n·c must be an eighth of an integer on the whole coset
        let base = self.m * self.n0() * self.cshift;
        let step = self.m * self.cshift;
        for x in [base, step] {
            if !(x * int(8)).is_integer() {
                return Err(Error::PhaseNotRepresentable(x));
            }
        }
        Ok(())
    }

    fn n0(&self) -> Rat {
        self.j / (int(2) * self.m)
    }

    fn exponent(&self, n: Rat) -> Rat {
        self.qscale * self.m * n * n + self.m * n * self.tshift
    }

    /// Coset offsets k (n = n0 + k) whose exponent lies below `order`.
    fn k_range(&self, order: Rat) -> std::ops::RangeInclusive<i64> {
        // exponent = A (n − v)² − A v² with A = c1·m and vertex v = −b/(2 c1)
        let a = rat::to_f64(&(self.qscale * self.m));
        let v = -self.tshift / (int(2) * self.qscale);
        let vf = rat::to_f64(&v);
        let rhs = rat::to_f64(&order) / a + vf * vf;
        let r = if rhs > 0.0 { rhs.sqrt() } else { 0.0 };
        let n0 = rat::to_f64(&self.n0());
        // one index of slack on each side; the exact filter happens per term
        let lo = (vf - r - n0).floor() as i64 - 1;
        let hi = (vf + r - n0).ceil() as i64 + 1;
        lo..=hi
    }

    /// Exact minimum of the exponent over the coset.
    pub fn ord(&self) -> Rat {
        let v = -self.tshift / (int(2) * self.qscale);
        let kv = v - self.n0();
        [floor_i64(&kv), ceil_i64(&kv)]
            .into_iter()
            .map(|k| self.exponent(self.n0() + int(k)))
            .min()
            .unwrap()
    }

    pub fn expand(&self, order: Rat) -> Result<Series> {
        self.validate()?;
        let n0 = self.n0();
        let mut out = Series::zero(order);
        for k in self.k_range(order) {
            let n = n0 + int(k);
            let e = self.exponent(n);
            if e >= order {
                continue;
            }
            let mut c = CycloNum::phase(&(self.m * n * self.cshift))?;
            if self.twisted && k.rem_euclid(2) == 1 {
                c = -c;
            }
            out.add_term(e, self.zcoeff * self.m * n, c);
        }
        Ok(out)
    }

    pub fn lazy(&self) -> Result<Lazy> {
        self.validate()?;
        let spec = *self;
        Ok(Lazy::new(spec.ord(), move |k| spec.expand(k)).cached())
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theta{}_{{{},{}}}({}*tau, {}*z + {}*tau + {})",
            if self.twisted { "(-)" } else { "" },
            self.j,
            self.m,
            self.qscale,
            self.zcoeff,
            self.tshift,
            self.cshift
        )
    }
}

pub fn theta(spec: &ThetaSpec, order: Rat) -> Result<Series> {
    spec.expand(order)
}

/// θ_{j,m}(τ,z) with plain arguments.
pub fn theta_jm(j: Rat, m: Rat) -> Result<Lazy> {
    ThetaSpec::new(j, m).lazy()
}

/// θ^{(±)}_{j,m}(τ, 0) = Σ_k (±1)^k q^{m (j/2m + k)²}.
pub fn theta_pm(plus: bool, j: Rat, m: Rat, order: Rat) -> Result<Series> {
    ThetaSpec::new(j, m).at_zero().twisted(!plus).expand(order)
}

pub fn theta_pm_lazy(plus: bool, j: Rat, m: Rat) -> Result<Lazy> {
    ThetaSpec::new(j, m).at_zero().twisted(!plus).lazy()
}

/// Π_i η(c_i τ)^{e_i} = q^{Σ c_i e_i / 24} Π_i Π_{n≥1} (1 − q^{c_i n})^{e_i}.
///
/// The product part is expanded densely in x = q^g, g = gcd(c_i), with
/// arbitrary-precision integer coefficients; negative powers are handled by
/// multiplying with geometric series, so no series division is involved.
pub fn eta_product(factors: &[(Rat, i64)], order: Rat) -> Result<Series> {
    if factors.iter().any(|(c, _)| !c.is_positive()) {
        return Err(Error::InvalidArgument("eta scale must be positive".into()));
    }
    let lead: Rat = factors
        .iter()
        .fold(Rat::zero(), |acc, (c, e)| acc + *c * int(*e) / int(24));
    let mut out = Series::zero(order);
    if lead >= order {
        return Ok(out);
    }
    let g = factors
        .iter()
        .fold(Rat::zero(), |acc, (c, _)| rat::gcd_rat(&acc, c));
    if g.is_zero() {
        out.add_term(lead, Rat::zero(), CycloNum::one());
        return Ok(out);
    }
    // need x-degrees d with lead + g·d < order
    let top = ceil_i64(&((order - lead) / g)) as usize;
    let mut poly: Vec<BigInt> = vec![BigInt::zero(); top];
    poly[0] = BigInt::one();
    for (c, e) in factors {
        let step = (*c / g).to_integer() as usize;
        let mut n = 1;
        while n * step < top {
            let d = n * step;
            if *e >= 0 {
                for _ in 0..*e {
                    for i in (d..top).rev() {
                        let t = poly[i - d].clone();
                        poly[i] -= t;
                    }
                }
            } else {
                for _ in 0..(-*e) {
                    for i in d..top {
                        let t = poly[i - d].clone();
                        poly[i] += t;
                    }
                }
            }
            n += 1;
        }
    }
    for (d, coef) in poly.into_iter().enumerate() {
        if !coef.is_zero() {
            out.add_term(
                lead + g * int(d as i64),
                Rat::zero(),
                CycloNum::from_bigrational(&BigRational::from_integer(coef)),
            );
        }
    }
    Ok(out)
}

/// η(c τ)^e.
pub fn eta(c: Rat, e: i64, order: Rat) -> Result<Series> {
    eta_product(&[(c, e)], order)
}

pub fn eta_product_lazy(factors: &[(Rat, i64)]) -> Lazy {
    let factors = factors.to_vec();
    let lead = factors
        .iter()
        .fold(Rat::zero(), |acc, (c, e)| acc + *c * int(*e) / int(24));
    Lazy::new(lead, move |k| eta_product(&factors, k)).cached()
}

pub fn eta_lazy(c: Rat, e: i64) -> Lazy {
    eta_product_lazy(&[(c, e)])
}

/// Mumford theta characteristics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mumford {
    M00,
    M01,
    M10,
    M11,
}

impl Mumford {
    pub const ALL: [Mumford; 4] = [Mumford::M00, Mumford::M01, Mumford::M10, Mumford::M11];

    pub fn label(&self) -> &'static str {
        match self {
            Mumford::M00 => "00",
            Mumford::M01 => "01",
            Mumford::M10 => "10",
            Mumford::M11 => "11",
        }
    }

    fn chars(&self) -> (Rat, Rat) {
        match self {
            Mumford::M00 => (int(0), int(0)),
            Mumford::M01 => (int(0), int(1)),
            Mumford::M10 => (int(1), int(0)),
            Mumford::M11 => (int(1), int(1)),
        }
    }
}

impl FromStr for Mumford {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Mumford::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown Mumford label {s:?}")))
    }
}

/// ϑ_ab(qscale·τ, zscale·z) as a combination of degree-2 Jacobi thetas:
/// ϑ00 = θ_{0,2} + θ_{2,2}, ϑ01 = θ_{0,2} − θ_{2,2},
/// ϑ10 = θ_{1,2} + θ_{−1,2}, ϑ11 = i(θ_{1,2} − θ_{−1,2}).
pub fn mumford_lazy(label: Mumford, qscale: Rat, zscale: Rat) -> Result<Lazy> {
    let th = |j: i64| {
        ThetaSpec::new(int(j), int(2))
            .qscale(qscale)
            .zcoeff(zscale)
            .lazy()
    };
    Ok(match label {
        Mumford::M00 => th(0)?.add(&th(2)?),
        Mumford::M01 => th(0)?.sub(&th(2)?),
        Mumford::M10 => th(1)?.add(&th(-1)?),
        Mumford::M11 => th(1)?.sub(&th(-1)?).scale(&CycloNum::i()),
    }
    .cached())
}

pub fn mumford(label: Mumford, qscale: Rat, zscale: Rat, order: Rat) -> Result<Series> {
    mumford_lazy(label, qscale, zscale)?.eval(order)
}

/// ϑ_ab straight from its classical sum Σ_{N ∈ a/2+ℤ} q^{N²/2} e^{2πi N (z + b/2)},
/// independent of the Jacobi-theta code path.
pub fn mumford_direct(label: Mumford, order: Rat) -> Result<Series> {
    let (a, b) = label.chars();
    let mut out = Series::zero(order);
    let half = rat(1, 2);
    let bound = if order.is_positive() {
        (2.0 * rat::to_f64(&order)).sqrt().ceil() as i64 + 2
    } else {
        2
    };
    for k in -bound..=bound {
        let n = a * half + int(k);
        let e = n * n * half;
        if e < order {
            out.add_term(e, n, CycloNum::phase(&(n * b * half))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: i64) -> Rat {
        rat(n, 2)
    }

    #[test]
    fn theta_01_small() {
        let s = theta(&ThetaSpec::jm(int(0), 1), int(5)).unwrap();
        assert_eq!(s.to_string(), "1 + q*(z^1+z^-1) + q^4*(z^2+z^-2)");
    }

    #[test]
    fn theta_11_small() {
        let s = theta(&ThetaSpec::jm(int(1), 1), int(3)).unwrap();
        assert_eq!(
            s.to_string(),
            "q^(1/4)*(z^(1/2)+z^(-1/2)) + q^(9/4)*(z^(3/2)+z^(-3/2))"
        );
    }

    #[test]
    fn periodicity_and_reflection() {
        for m in 1..=3 {
            for j2 in -6..=6 {
                let j = h(j2);
                let a = theta(&ThetaSpec::jm(j, m), int(8)).unwrap();
                let b = theta(&ThetaSpec::jm(j + int(2 * m), m), int(8)).unwrap();
                assert_eq!(a, b);
                let r = theta(&ThetaSpec::jm(-j, m).zcoeff(int(-1)), int(8)).unwrap();
                assert_eq!(a, r);
            }
        }
    }

    #[test]
    fn twisted_theta_constant() {
        let s = theta_pm(false, int(0), int(1), int(5)).unwrap();
        let expect = Series::from_terms(
            [(0, 1), (1, -2), (4, 2)].map(|(q, c)| (int(q), int(0), CycloNum::from_i64(c))),
            int(5),
        );
        assert_eq!(s, expect);
        // the + twist is the plain theta at z = 0
        let p = theta_pm(true, h(3), int(2), int(9)).unwrap();
        assert_eq!(p, theta(&ThetaSpec::jm(h(3), 2), int(9)).unwrap().at_z0());
    }

    #[test]
    fn tshift_ord_matches_expansion() {
        let spec = ThetaSpec::jm(int(0), 3).tshift(rat(5, 4)).cshift(rat(-1, 2));
        let s = theta(&spec, int(6)).unwrap();
        assert_eq!(s.ord(), spec.ord());
    }

    #[test]
    fn unrepresentable_phase_rejected() {
        let spec = ThetaSpec::jm(int(1), 1).cshift(rat(1, 8));
        assert!(matches!(theta(&spec, int(3)), Err(Error::PhaseNotRepresentable(_))));
    }

    #[test]
    fn eta_inverse_pair() {
        let a = eta(int(1), -1, int(10)).unwrap();
        let b = eta(int(1), 1, int(10)).unwrap();
        assert_eq!(&a * &b, Series::one((&a * &b).cutoff()));
    }

    #[test]
    fn eta_half_scale_leading_term() {
        let s = eta(rat(1, 2), 1, int(3)).unwrap();
        assert_eq!(s.ord(), rat(1, 48));
        let r = eta(int(1), 1, int(6)).unwrap().s_scale(rat(1, 2), int(1)).unwrap();
        assert_eq!(s, r);
    }

    #[test]
    fn mumford_constants() {
        let s = mumford(Mumford::M00, int(1), int(1), int(5)).unwrap().at_z0();
        let expect = Series::from_terms(
            [(int(0), 1), (h(1), 2), (int(2), 2), (h(9), 2)]
                .map(|(q, c)| (q, int(0), CycloNum::from_i64(c))),
            int(5),
        );
        assert_eq!(s, expect);
        let s = mumford(Mumford::M01, int(1), int(1), int(5)).unwrap().at_z0();
        let expect = Series::from_terms(
            [(int(0), 1), (h(1), -2), (int(2), 2), (h(9), -2)]
                .map(|(q, c)| (q, int(0), CycloNum::from_i64(c))),
            int(5),
        );
        assert_eq!(s, expect);
    }

    #[test]
    fn mumford_matches_direct_sum() {
        for l in Mumford::ALL {
            assert_eq!(
                mumford(l, int(1), int(1), int(12)).unwrap(),
                mumford_direct(l, int(12)).unwrap(),
                "label {}",
                l.label()
            );
        }
    }

    #[test]
    fn mumford_10_not_invertible() {
        let s = mumford(Mumford::M10, int(1), int(1), int(4)).unwrap();
        assert!(matches!(s.inv(), Err(Error::NonUnitLeading(_))));
    }
}
