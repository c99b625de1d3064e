//! Command-line front end: series expansion, identity verification,
//! character branching and the identity listing.
//!
//! [`run`] is the whole program; `main` only wires it to the process.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qtheta_core::branching::{branch, Branching};
use qtheta_core::identities::{self, OrderPolicy, Report, Summary};
use qtheta_core::numerators::{self, character, u_basis, v_basis};
use qtheta_core::rat::{fmt_pq, fmt_short, int, parse_rat};
use qtheta_core::theta::{eta_product_lazy, mumford_lazy};
use qtheta_core::{Error, Lazy, ModuleLabel, Mumford, Rat, Sector, Series, ThetaSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qtheta", version, about = "Exact q-series for theta functions, numerators and N=3 characters")]
struct Cli {
    /// Truncation order (rational, e.g. 6 or 13/2)
    #[arg(long, global = true)]
    order: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML or JSON configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for verification
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a series
    Expand {
        #[command(subcommand)]
        kind: ExpandKind,
    },
    /// Check registered identities
    Verify(VerifyArgs),
    /// Decompose a product of two characters over the characters one level up
    Branch {
        /// m:m2
        #[arg(long)]
        left: String,
        /// m:m2
        #[arg(long)]
        right: String,
    },
    /// List registered identities
    List {
        /// Only ids with this prefix
        #[arg(long)]
        prefix: Option<String>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity id (repeatable)
    #[arg(long, conflicts_with_all = ["all", "prefix"])]
    id: Vec<String>,
    /// Every registered identity
    #[arg(long)]
    all: bool,
    /// Every identity whose id starts with this prefix
    #[arg(long, conflicts_with = "all")]
    prefix: Option<String>,
    /// Record wall time per case (reports are then no longer reproducible)
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum ExpandKind {
    /// θ_{j,m}(c·τ, a·z + b·τ + c0)
    Theta {
        #[arg(long)]
        j: String,
        #[arg(long)]
        m: String,
        #[arg(long, default_value = "1")]
        qscale: String,
        #[arg(long, default_value = "1")]
        zcoeff: String,
        #[arg(long, default_value = "0")]
        tshift: String,
        #[arg(long, default_value = "0")]
        cshift: String,
        /// Evaluate at z = 0
        #[arg(long)]
        at_zero: bool,
        /// Weight the k-th term by (−1)^k
        #[arg(long)]
        twisted: bool,
    },
    /// η(scale·τ)^power
    Eta {
        #[arg(long, default_value = "1")]
        scale: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
    },
    /// Mumford ϑ_{ab}(qscale·τ, zscale·z)
    Mumford {
        /// 00, 01, 10 or 11
        #[arg(long)]
        label: String,
        #[arg(long, default_value = "1")]
        qscale: String,
        #[arg(long, default_value = "1")]
        zscale: String,
    },
    /// Numerator F^{[m,s]}, or its closed form at a given shift p
    Numerator {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: String,
        #[arg(long)]
        p: Option<i64>,
    },
    /// Character of the module with label (m, m2)
    Character {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        m2: u32,
    },
    /// Generators of U^{[m,s]} (or V^{[m,s]} with --v)
    Ubasis {
        #[arg(long)]
        m: u32,
        /// half or integer
        #[arg(long, default_value = "half")]
        sector: String,
        #[arg(long)]
        v: bool,
    },
}

/// File configuration; command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub default_order: Option<String>,
    pub output_format: Option<Format>,
    pub parallelism: Option<usize>,
    /// Verification orders per id prefix, e.g. `S2 = "8"`.
    #[serde(default)]
    pub section_orders: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let cfg: Config = if is_json {
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        };
        if let Some(o) = &cfg.default_order {
            positive_order(o)?;
        }
        if cfg.parallelism == Some(0) {
            bail!("parallelism must be positive");
        }
        Ok(cfg)
    }
}

/// Errors that are the caller's fault map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn positive_order(s: &str) -> Result<Rat> {
    let r = parse_rat(s).map_err(|e| usage(e.to_string()))?;
    if r <= int(0) {
        return Err(usage(format!("order must be positive, got {s}")));
    }
    Ok(r)
}

fn rat_arg(name: &str, s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| usage(format!("--{name}: {e}")))
}

struct Settings {
    order: Option<Rat>,
    format: Format,
    jobs: usize,
    sections: BTreeMap<String, Rat>,
}

/// Runs the program on `args` (including the program name), writing the
/// result to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if is_usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    if e.downcast_ref::<Usage>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::InvalidArgument(_)
                | Error::Parse(_)
                | Error::UnknownIdentity(_)
                | Error::UnsupportedCharacter { .. }
                | Error::BasisUnavailable(_)
                | Error::IntegerSectorEvenLevel(_)
                | Error::InfeasibleOrder { .. }
        )
    )
}

fn settings(cli: &Cli) -> Result<Settings> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| usage(format!("{e:#}")))?,
        None => Config::default(),
    };
    let order = match (&cli.order, &cfg.default_order) {
        (Some(o), _) | (None, Some(o)) => Some(positive_order(o)?),
        (None, None) => None,
    };
    let mut sections = BTreeMap::new();
    for (k, v) in &cfg.section_orders {
        sections.insert(k.clone(), positive_order(v)?);
    }
    let jobs = cli.jobs.or(cfg.parallelism).unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    if jobs == 0 {
        return Err(usage("--jobs must be positive"));
    }
    Ok(Settings {
        order,
        format: cli.format.or(cfg.output_format).unwrap_or(Format::Text),
        jobs,
        sections,
    })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let st = settings(&cli)?;
    match cli.command {
        Command::Expand { kind } => {
            let order = st.order.unwrap_or(int(10));
            let rendered = expand(&kind, order)?;
            print_series(out, st.format, &rendered)?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => verify(&args, &st, cli.order.is_some(), out),
        Command::Branch { left, right } => {
            let l: ModuleLabel = left.parse()?;
            let r: ModuleLabel = right.parse()?;
            let b = branch(l, r, st.order.unwrap_or(int(6)))?;
            print_branching(out, st.format, &b)?;
            Ok(EXIT_OK)
        }
        Command::List { prefix } => {
            list(out, st.format, prefix.as_deref().unwrap_or(""))?;
            Ok(EXIT_OK)
        }
    }
}

/// (label, series) pairs to print.
type Rendered = Vec<(String, Series)>;

fn eval(x: &Lazy, order: Rat) -> Result<Series> {
    Ok(x.eval(order)?)
}

fn expand(kind: &ExpandKind, order: Rat) -> Result<Rendered> {
    Ok(match kind {
        ExpandKind::Theta {
            j,
            m,
            qscale,
            zcoeff,
            tshift,
            cshift,
            at_zero,
            twisted,
        } => {
            let mut spec = ThetaSpec::new(rat_arg("j", j)?, rat_arg("m", m)?)
                .qscale(rat_arg("qscale", qscale)?)
                .zcoeff(rat_arg("zcoeff", zcoeff)?)
                .tshift(rat_arg("tshift", tshift)?)
                .cshift(rat_arg("cshift", cshift)?)
                .twisted(*twisted);
            if *at_zero {
                spec = spec.at_zero();
            }
            vec![(spec.to_string(), eval(&spec.lazy()?, order)?)]
        }
        ExpandKind::Eta { scale, power } => {
            let c = rat_arg("scale", scale)?;
            if c <= int(0) {
                return Err(usage("--scale must be positive"));
            }
            vec![(
                format!("eta({}*tau)^{power}", fmt_short(&c)),
                eval(&eta_product_lazy(&[(c, *power)]), order)?,
            )]
        }
        ExpandKind::Mumford { label, qscale, zscale } => {
            let l = match label.as_str() {
                "00" => Mumford::M00,
                "01" => Mumford::M01,
                "10" => Mumford::M10,
                "11" => Mumford::M11,
                other => return Err(usage(format!("--label must be 00, 01, 10 or 11, got {other}"))),
            };
            let x = mumford_lazy(l, rat_arg("qscale", qscale)?, rat_arg("zscale", zscale)?)?;
            vec![(format!("vartheta_{label}"), eval(&x, order)?)]
        }
        ExpandKind::Numerator { m, s, p } => {
            let s = rat_arg("s", s)?;
            let x = match p {
                None => numerators::numerator(*m, s)?,
                Some(p) if s == qtheta_core::rat::rat(1, 2) => numerators::numerator_half(*m, *p)?,
                Some(p) if s == int(0) => numerators::numerator_int(*m, *p)?,
                Some(_) => return Err(usage("--p applies only to s = 1/2 and s = 0")),
            };
            vec![(format!("F[{m},{}]", fmt_short(&s)), eval(&x, order)?)]
        }
        ExpandKind::Character { m, m2 } => {
            let label = ModuleLabel::new(*m, *m2)?;
            vec![(format!("ch({label})"), eval(&character(label)?, order)?)]
        }
        ExpandKind::Ubasis { m, sector, v } => {
            let sec: Sector = sector.parse()?;
            let (name, basis) = if *v { ("V", v_basis(*m, sec)?) } else { ("U", u_basis(*m, sec)?) };
            basis
                .iter()
                .enumerate()
                .map(|(i, b)| Ok((format!("{name}[{m},{sec}]#{i}"), eval(b, order)?)))
                .collect::<Result<_>>()?
        }
    })
}

#[derive(Serialize)]
struct NamedSeries<'a> {
    name: &'a str,
    series: qtheta_core::SeriesJson,
}

fn print_series(out: &mut dyn Write, format: Format, items: &Rendered) -> Result<()> {
    match format {
        Format::Text => {
            if let [(_, s)] = items.as_slice() {
                writeln!(out, "{s}")?;
            } else {
                for (name, s) in items {
                    writeln!(out, "{name}: {s}")?;
                }
            }
        }
        Format::Json => {
            let v: Vec<NamedSeries> = items
                .iter()
                .map(|(n, s)| NamedSeries {
                    name: n,
                    series: s.to_json(),
                })
                .collect();
            if v.len() == 1 {
                writeln!(out, "{}", serde_json::to_string_pretty(&v[0].series)?)?;
            } else {
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            }
        }
        Format::Markdown => {
            writeln!(out, "| series | expansion | cutoff |")?;
            writeln!(out, "|---|---|---|")?;
            for (name, s) in items {
                writeln!(out, "| `{name}` | `{s}` | {} |", fmt_short(&s.cutoff()))?;
            }
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs, st: &Settings, explicit_order: bool, out: &mut dyn Write) -> Result<i32> {
    let cases: Vec<&identities::IdentityCase> = if args.all {
        identities::registry().iter().collect()
    } else if let Some(p) = &args.prefix {
        let v = identities::select(p);
        if v.is_empty() {
            return Err(usage(format!("no identity id starts with {p:?}")));
        }
        v
    } else if !args.id.is_empty() {
        args.id.iter().map(|id| identities::find(id)).collect::<qtheta_core::Result<_>>()?
    } else {
        return Err(usage("verify needs --id, --prefix or --all"));
    };
    // an explicit --order beats per-section settings; a config default does not
    let policy = OrderPolicy {
        global: if explicit_order { st.order } else { None },
        sections: st.sections.clone(),
    };
    let reports = identities::run_cases(&cases, &policy, st.jobs, args.timings);
    print_reports(out, st.format, &reports)?;
    Ok(if Summary::of(&reports).all_pass() { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct ReportStream<'a> {
    reports: &'a [Report],
    summary: Summary,
}

fn print_reports(out: &mut dyn Write, format: Format, reports: &[Report]) -> Result<()> {
    let summary = Summary::of(reports);
    match format {
        Format::Text => {
            for r in reports {
                writeln!(out, "{}", r.to_text())?;
            }
            writeln!(out, "summary: {} pass, {} fail, {} error", summary.pass, summary.fail, summary.error)?;
        }
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&ReportStream { reports, summary })?)?;
        }
        Format::Markdown => {
            writeln!(out, "| id | kind | status | certified order | first mismatch |")?;
            writeln!(out, "|---|---|---|---|---|")?;
            for r in reports {
                let mm = r
                    .first_mismatch
                    .map(|(q, z)| format!("q^{} z^{}", fmt_short(&q), fmt_short(&z)))
                    .unwrap_or_default();
                writeln!(
                    out,
                    "| `{}` | {} | {} | {} | {} |",
                    r.id,
                    r.kind,
                    r.status.name(),
                    fmt_short(&r.certified_order),
                    mm
                )?;
            }
            writeln!(out)?;
            writeln!(out, "**{} pass, {} fail, {} error**", summary.pass, summary.fail, summary.error)?;
        }
    }
    Ok(())
}

fn print_branching(out: &mut dyn Write, format: Format, b: &Branching) -> Result<()> {
    let d = &b.decomposition;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&b.to_json())?)?,
        Format::Text | Format::Markdown => {
            let md = format == Format::Markdown;
            writeln!(
                out,
                "{}ch({})·ch({}) over level {}: status {}, certified order {}",
                if md { "## " } else { "" },
                b.left,
                b.right,
                b.left.m + b.right.m,
                serde_json::to_value(d.status)?.as_str().unwrap_or_default(),
                fmt_short(&d.certified_order)
            )?;
            for (label, c) in b.basis.iter().zip(&d.coefficients) {
                if md {
                    writeln!(out, "- b[{label}] = `{c}` (exact below q^{})", fmt_short(&c.cutoff()))?;
                } else {
                    writeln!(out, "b[{label}] = {c}  (exact below q^{})", fmt_short(&c.cutoff()))?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ListEntry {
    id: String,
    kind: identities::Kind,
    default_order: String,
    statement: String,
}

fn list(out: &mut dyn Write, format: Format, prefix: &str) -> Result<()> {
    let entries: Vec<ListEntry> = identities::list_identities()
        .into_iter()
        .filter(|(id, ..)| id.starts_with(prefix))
        .map(|(id, kind, order, statement)| ListEntry {
            id,
            kind,
            default_order: fmt_pq(&order),
            statement,
        })
        .collect();
    match format {
        Format::Text => {
            for e in &entries {
                writeln!(out, "{}\t{}\t{}\t{}", e.id, e.kind, fmt_short(&parse_rat(&e.default_order)?), e.statement)?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&entries)?)?,
        Format::Markdown => {
            writeln!(out, "| id | kind | default order | statement |")?;
            writeln!(out, "|---|---|---|---|")?;
            for e in &entries {
                writeln!(
                    out,
                    "| `{}` | {} | {} | {} |",
                    e.id,
                    e.kind,
                    fmt_short(&parse_rat(&e.default_order)?),
                    e.statement.replace('|', "\\|")
                )?;
            }
        }
    }
    Ok(())
}
