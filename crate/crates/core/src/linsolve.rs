//! Decomposition of a series over a basis with z-free coefficients.
//!
//! Splitting every series into its ζ-components turns `target = Σ cᵢ·bᵢ` into
//! one linear equation per ζ-exponent, with unknowns in the field of
//! truncated Laurent series in q. Gauss–Jordan elimination over that field
//! (pivoting on the entry of smallest q-order, so inversions lose the least
//! precision) yields candidate coefficients; an independent residual
//! `target − Σ cᵢ·bᵢ` then either certifies them or exhibits a witness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lazy::Lazy;
use crate::rat::{self, fmt_pq, int, Rat};
use crate::series::{Series, SeriesJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Exact,
    NotInSpan,
    UnderDetermined,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// One z-free series per basis element (free variables set to zero).
    pub coefficients: Vec<Series>,
    pub residual: Series,
    pub status: Status,
    /// Residual is certified empty (or its witness trusted) below this order.
    pub certified_order: Rat,
    pub rank: usize,
    /// Smallest (q, ζ) exponent pair of the residual, when nonzero.
    pub witness: Option<(Rat, Rat)>,
}

#[derive(Serialize, Deserialize)]
pub struct DecompositionJson {
    pub status: Status,
    pub certified_order: String,
    pub rank: usize,
    pub coefficients: Vec<SeriesJson>,
    pub residual: SeriesJson,
    pub witness: Option<[String; 2]>,
}

impl Decomposition {
    pub fn in_span(&self) -> bool {
        self.status != Status::NotInSpan
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            status: self.status,
            certified_order: fmt_pq(&self.certified_order),
            rank: self.rank,
            coefficients: self.coefficients.iter().map(Series::to_json).collect(),
            residual: self.residual.to_json(),
            witness: self.witness.map(|(q, z)| [fmt_pq(&q), fmt_pq(&z)]),
        }
    }
}

/// One equation: Σ entries[i]·cᵢ = rhs, all z-free.
#[derive(Clone)]
struct Row {
    entries: Vec<Series>,
    rhs: Series,
}

impl Row {
    /// row ← row − f·other
    fn axpy(&mut self, f: &Series, other: &Row) {
        for (e, o) in self.entries.iter_mut().zip(&other.entries) {
            *e = &*e - &(f * o);
        }
        self.rhs = &self.rhs - &(f * &other.rhs);
    }

    fn scale_by(&mut self, f: &Series) {
        for e in self.entries.iter_mut() {
            *e = &*e * f;
        }
        self.rhs = &self.rhs * f;
    }

    fn min_ord(&self) -> Option<Rat> {
        self.entries.iter().filter(|e| !e.is_empty()).map(Series::ord).min()
    }
}

fn z_free_component(s: &Series, beta: &Rat) -> Series {
    s.zcomponent(beta).shift(Rat::from_integer(0), -*beta)
}

/// Expresses `target` over `basis` and certifies the result below `order`.
pub fn decompose(target: &Series, basis: &[Series], order: Rat) -> Result<Decomposition> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("decomposition needs a nonempty basis".into()));
    }
    let avail = basis
        .iter()
        .map(Series::cutoff)
        .fold(target.cutoff(), rat::min);
    if order > avail {
        return Err(Error::InsufficientOrder {
            requested: order,
            available: avail,
        });
    }
    let n = basis.len();
    let mut betas = target.zexps();
    for b in basis {
        betas.extend(b.zexps());
    }
    let mut rows: Vec<(Rat, Rat, Row)> = betas
        .iter()
        .filter_map(|beta| {
            let row = Row {
                entries: basis.iter().map(|b| z_free_component(b, beta)).collect(),
                rhs: z_free_component(target, beta),
            };
            row.min_ord().map(|o| (o, *beta, row))
        })
        .collect();
    rows.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    // Gauss–Jordan: each pivot row is normalised to 1 in its pivot column
    // and that column is cleared from every other pivot row.
    let mut pivots: Vec<(usize, Row)> = Vec::new();
    for (_, _, mut row) in rows {
        if pivots.len() == n {
            break;
        }
        for (col, p) in &pivots {
            let f = row.entries[*col].clone();
            if !f.is_empty() {
                row.axpy(&f, p);
            }
        }
        let best = (0..n)
            .filter(|c| pivots.iter().all(|(pc, _)| pc != c))
            .filter(|c| !row.entries[*c].is_empty())
            .min_by_key(|c| (row.entries[*c].ord(), *c));
        let Some(col) = best else { continue };
        let inv = row.entries[col].inv()?;
        row.scale_by(&inv);
        for (_, p) in pivots.iter_mut() {
            let f = p.entries[col].clone();
            if !f.is_empty() {
                p.axpy(&f, &row);
            }
        }
        pivots.push((col, row));
    }

    let rank = pivots.len();
    let mut coefficients: Vec<Series> = vec![Series::zero(order); n];
    for (col, p) in pivots {
        coefficients[col] = p.rhs;
    }
    // independent re-multiplication check
    let mut residual = target.clone();
    for (c, b) in coefficients.iter().zip(basis) {
        residual = &residual - &(c * b);
    }
    let certified_order = rat::min(order, residual.cutoff());
    let residual = residual.truncate(certified_order);
    let witness = residual.terms().next().map(|(q, z, _)| (q, z));
    if witness.is_none() && certified_order < order {
        return Err(Error::InsufficientOrder {
            requested: order,
            available: certified_order,
        });
    }
    let status = match (witness, rank == n) {
        (Some(_), _) => Status::NotInSpan,
        (None, true) => Status::Exact,
        (None, false) => Status::UnderDetermined,
    };
    Ok(Decomposition {
        coefficients: coefficients.into_iter().map(|c| c.truncate(order)).collect(),
        residual,
        status,
        certified_order,
        rank,
        witness,
    })
}

/// How many times the working order is raised before giving up.
const MAX_ATTEMPTS: usize = 8;

/// Evaluates the inputs deep enough that the decomposition is certified
/// below `order`, raising the working order whenever precision runs out.
pub fn decompose_lazy(target: &Lazy, basis: &[Lazy], order: Rat) -> Result<Decomposition> {
    let mut work = order + int(1);
    let mut retried = false;
    let mut reached = Rat::from_integer(0);
    for _ in 0..MAX_ATTEMPTS {
        let t = target.eval(work)?;
        let b: Vec<Series> = basis.iter().map(|x| x.eval(work)).collect::<Result<_>>()?;
        match decompose(&t, &b, order) {
            Ok(d) if d.status == Status::NotInSpan && d.rank < b.len() && !retried => {
                // the missing pivot may be hidden by truncation; look deeper once
                retried = true;
                work += int(2);
            }
            Ok(d) => return Ok(d),
            Err(Error::InsufficientOrder { available, .. }) => {
                reached = available;
                work += rat::max(order - available, int(1)) + int(1);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::InfeasibleOrder {
        requested: order,
        max: reached,
    })
}

/// Membership of `target` in the span of `basis`, with a witness when it fails.
pub fn membership(target: &Lazy, basis: &[Lazy], order: Rat) -> Result<(bool, Option<(Rat, Rat)>)> {
    let d = decompose_lazy(target, basis, order)?;
    Ok((d.in_span(), d.witness))
}

/// Mutual membership; returns the first witness of failure, if any.
pub fn span_equal(a: &[Lazy], b: &[Lazy], order: Rat) -> Result<(bool, Option<(Rat, Rat)>)> {
    for (xs, ys) in [(a, b), (b, a)] {
        for x in xs {
            let (ok, w) = membership(x, ys, order)?;
            if !ok {
                return Ok((false, w));
            }
        }
    }
    Ok((true, None))
}
