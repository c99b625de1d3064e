//! Registry of executable identity checks and the runner that certifies them.
//!
//! Every case builds its operands lazily, so constructing the registry is
//! cheap and failures while building are reported per case.

mod characters;
mod numerator_checks;
mod prelim;
mod spaces;

pub use spaces::big_multiplication_rhs;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lazy::Lazy;
use crate::linsolve::{decompose_lazy, span_equal};
use crate::rat::{fmt_pq, fmt_short, int, Rat};

/// Orders above this are refused rather than attempted.
pub const MAX_ORDER: i64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Equality,
    PIndependence,
    Membership,
    Span,
    Zfree,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Equality => "equality",
            Kind::PIndependence => "p-independence",
            Kind::Membership => "membership",
            Kind::Span => "span",
            Kind::Zfree => "zfree",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a case asserts once its operands are built.
pub enum Goal {
    /// lhs = rhs.
    Equal(Lazy, Lazy),
    /// All members agree with the first.
    AllEqual(Vec<Lazy>),
    /// Every target lies in the z-free span of the basis.
    Member { targets: Vec<Lazy>, basis: Vec<Lazy> },
    /// The two families span the same space.
    Span(Vec<Lazy>, Vec<Lazy>),
    /// The series involves no power of ζ.
    ZFree(Lazy),
}

type Builder = dyn Fn() -> Result<Goal> + Send + Sync;

#[derive(Clone)]
pub struct IdentityCase {
    pub id: String,
    pub kind: Kind,
    /// Human-readable form of the statement being checked.
    pub statement: String,
    pub default_order: Rat,
    build: Arc<Builder>,
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCase")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("default_order", &self.default_order)
            .finish()
    }
}

impl IdentityCase {
    pub fn new<F>(id: impl Into<String>, kind: Kind, statement: impl Into<String>, order: Rat, build: F) -> Self
    where
        F: Fn() -> Result<Goal> + Send + Sync + 'static,
    {
        IdentityCase {
            id: id.into(),
            kind,
            statement: statement.into(),
            default_order: order,
            build: Arc::new(build),
        }
    }

    pub fn goal(&self) -> Result<Goal> {
        (self.build)()
    }

    /// The same case with `delta` added to the left-hand side of an equality;
    /// used to confirm that injected faults are caught.
    pub fn perturbed(&self, delta: Lazy) -> IdentityCase {
        let inner = self.build.clone();
        let mut out = self.clone();
        out.id = format!("{}+perturbed", self.id);
        out.build = Arc::new(move || match inner()? {
            Goal::Equal(a, b) => Ok(Goal::Equal(a.add(&delta), b)),
            Goal::AllEqual(mut xs) => {
                if let Some(first) = xs.first_mut() {
                    *first = first.add(&delta);
                }
                Ok(Goal::AllEqual(xs))
            }
            _ => Err(Error::InvalidArgument("only equalities can be perturbed".into())),
        });
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub id: String,
    pub kind: Kind,
    pub status: Outcome,
    pub certified_order: Rat,
    pub first_mismatch: Option<(Rat, Rat)>,
    pub wall_ms: Option<u64>,
    /// Error text for `Outcome::Error`.
    pub message: Option<String>,
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("id", &self.id)?;
        m.serialize_entry("kind", &self.kind)?;
        m.serialize_entry("status", &self.status)?;
        m.serialize_entry("certified_order", &fmt_pq(&self.certified_order))?;
        m.serialize_entry(
            "first_mismatch",
            &self.first_mismatch.map(|(q, z)| [fmt_pq(&q), fmt_pq(&z)]),
        )?;
        m.serialize_entry("wall_ms", &self.wall_ms)?;
        if let Some(msg) = &self.message {
            m.serialize_entry("message", msg)?;
        }
        m.end()
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Outcome::Pass
    }

    /// One line: status, id, order and mismatch or error.
    pub fn to_text(&self) -> String {
        let mut line = format!(
            "{:<5} {} [{}] order {}",
            self.status.name().to_uppercase(),
            self.id,
            self.kind,
            fmt_short(&self.certified_order)
        );
        if let Some((q, z)) = self.first_mismatch {
            line.push_str(&format!(" first mismatch at q^{} z^{}", fmt_short(&q), fmt_short(&z)));
        }
        if let Some(msg) = &self.message {
            line.push_str(&format!(" ({msg})"));
        }
        if let Some(ms) = self.wall_ms {
            line.push_str(&format!(" {ms} ms"));
        }
        line
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(reports: &[Report]) -> Summary {
        reports.iter().fold(Summary::default(), |mut s, r| {
            match r.status {
                Outcome::Pass => s.pass += 1,
                Outcome::Fail => s.fail += 1,
                Outcome::Error => s.error += 1,
            }
            s
        })
    }

    pub fn all_pass(&self) -> bool {
        self.fail == 0 && self.error == 0
    }
}

/// Order selection: a global override, then per-section overrides keyed by
/// id prefix (e.g. "S2"), then the case default.
#[derive(Clone, Debug, Default)]
pub struct OrderPolicy {
    pub global: Option<Rat>,
    pub sections: BTreeMap<String, Rat>,
}

impl OrderPolicy {
    pub fn fixed(order: Rat) -> Self {
        OrderPolicy {
            global: Some(order),
            sections: BTreeMap::new(),
        }
    }

    pub fn order_for(&self, case: &IdentityCase) -> Rat {
        let section = case.id.split('.').next().unwrap_or_default();
        self.sections
            .get(section)
            .copied()
            .or(self.global)
            .unwrap_or(case.default_order)
    }
}

/// The registry, sorted by id.
pub fn registry() -> &'static [IdentityCase] {
    static REG: OnceLock<Vec<IdentityCase>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut all = Vec::new();
        prelim::register(&mut all);
        characters::register(&mut all);
        numerator_checks::register(&mut all);
        spaces::register(&mut all);
        all.sort_by(|a, b| a.id.cmp(&b.id));
        all
    })
}

pub fn find(id: &str) -> Result<&'static IdentityCase> {
    registry()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// (id, kind, default order, statement) for every case.
pub fn list_identities() -> Vec<(String, Kind, Rat, String)> {
    registry()
        .iter()
        .map(|c| (c.id.clone(), c.kind, c.default_order, c.statement.clone()))
        .collect()
}

fn check(goal: Goal, order: Rat) -> Result<Option<(Rat, Rat)>> {
    match goal {
        Goal::Equal(a, b) => a.eval(order)?.equal_up_to(&b.eval(order)?, order),
        Goal::AllEqual(xs) => {
            let Some((first, rest)) = xs.split_first() else {
                return Ok(None);
            };
            let base = first.eval(order)?;
            for x in rest {
                if let Some(w) = base.equal_up_to(&x.eval(order)?, order)? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
        Goal::Member { targets, basis } => {
            for t in &targets {
                let d = decompose_lazy(t, &basis, order)?;
                if !d.in_span() {
                    return Ok(d.witness);
                }
            }
            Ok(None)
        }
        Goal::Span(a, b) => Ok(span_equal(&a, &b, order)?.1),
        Goal::ZFree(x) => Ok(x
            .eval(order)?
            .terms()
            .find(|(_, z, _)| *z != Rat::from_integer(0))
            .map(|(q, z, _)| (q, z))),
    }
}

/// Runs one case at `order`.
pub fn run_case(case: &IdentityCase, order: Rat, timings: bool) -> Report {
    let start = Instant::now();
    let result = if order > int(MAX_ORDER) {
        Err(Error::InfeasibleOrder {
            requested: order,
            max: int(MAX_ORDER),
        })
    } else if order <= int(0) {
        Err(Error::InvalidArgument(format!("order must be positive, got {order}")))
    } else {
        case.goal().and_then(|g| check(g, order))
    };
    let wall_ms = timings.then(|| start.elapsed().as_millis() as u64);
    let (status, first_mismatch, message, certified_order) = match result {
        Ok(None) => (Outcome::Pass, None, None, order),
        Ok(Some(w)) => (Outcome::Fail, Some(w), None, order),
        Err(e) => (Outcome::Error, None, Some(e.to_string()), int(0)),
    };
    Report {
        id: case.id.clone(),
        kind: case.kind,
        status,
        certified_order,
        first_mismatch,
        wall_ms,
        message,
    }
}

pub fn run_identity(id: &str, order: Option<Rat>, timings: bool) -> Result<Report> {
    let case = find(id)?;
    Ok(run_case(case, order.unwrap_or(case.default_order), timings))
}

/// Runs the selected cases on `jobs` worker threads; reports come back sorted by id.
pub fn run_cases(cases: &[&IdentityCase], policy: &OrderPolicy, jobs: usize, timings: bool) -> Vec<Report> {
    let work = || -> Vec<Report> {
        cases
            .par_iter()
            .map(|c| run_case(c, policy.order_for(c), timings))
            .collect()
    };
    let mut reports = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    reports
}

pub fn run_all(policy: &OrderPolicy, jobs: usize, timings: bool) -> Vec<Report> {
    let cases: Vec<&IdentityCase> = registry().iter().collect();
    run_cases(&cases, policy, jobs, timings)
}

/// Cases whose id starts with `prefix`.
pub fn select(prefix: &str) -> Vec<&'static IdentityCase> {
    registry().iter().filter(|c| c.id.starts_with(prefix)).collect()
}
