//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.
//!
//! Comparisons are exact on trusted terms. A failing criterion is reported,
//! never hidden, and the process still exits 0 so the workspace test run
//! completes; read the printed lines for the verdict.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qtheta_cli::run;
use qtheta_core::identities::{self, OrderPolicy, Report};
use qtheta_core::linsolve::DecompositionJson;
use qtheta_core::rat::{int, rat};
use qtheta_core::theta::{eta, eta_product};
use qtheta_core::{CycloNum, Rat, Series};

type Verdict = Result<String, String>;

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("qtheta").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

/// Runs every case whose id starts with one of `prefixes`; passes iff all do.
fn all_pass(prefixes: &[&str], order: Option<i64>) -> (Vec<Report>, Duration) {
    let cases: Vec<_> = prefixes.iter().flat_map(|p| identities::select(p)).collect();
    let policy = order.map_or_else(OrderPolicy::default, |o| OrderPolicy::fixed(int(o)));
    let start = Instant::now();
    let reports = identities::run_cases(&cases, &policy, 4, false);
    (reports, start.elapsed())
}

fn judge(reports: &[Report]) -> Verdict {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| match (&r.message, r.first_mismatch) {
            (Some(m), _) => format!("{} error: {m}", r.id),
            (None, Some((q, z))) => format!("{} fails at q^{q} z^{z}", r.id),
            (None, None) => format!("{} {}", r.id, r.status.name()),
        })
        .collect();
    if reports.is_empty() {
        Err("no cases selected".into())
    } else if bad.is_empty() {
        Ok(format!("{} cases", reports.len()))
    } else {
        Err(format!("{}/{} not passing: {}", bad.len(), reports.len(), bad.join("; ")))
    }
}

fn ac1() -> Verdict {
    let (reports, t) = all_pass(&["S2."], Some(6));
    let verdict = judge(&reports)?;
    if t > Duration::from_secs(300) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{verdict} at order 6 in {} ms", t.as_millis()))
}

fn ac2() -> Verdict {
    judge(&all_pass(&["S3.char.K1."], Some(8)).0).map(|v| v + " at order 8")
}

fn eq(factors: &[(Rat, i64)]) -> Series {
    eta_product(factors, int(6)).expect("eta quotient")
}

fn ac3() -> Verdict {
    let (h, one, two) = (rat(1, 2), int(1), int(2));
    let a = eq(&[(one, 3), (h, -1), (two, -1)]);
    let b = eq(&[(h, 1), (two, 1), (one, -2)]);
    let c = eq(&[(one, 1), (h, -1)]);
    let half = |s: Series| s.scale_rat(&rat(1, 2));
    let (ab_p, ab_m) = (half(&a + &b), half(&a - &b));
    let (cb_p, cb_m) = (half(&c + &b), half(&c - &b));
    let cases: [(&str, &str, Vec<Series>); 5] = [
        ("1:0", "1:1", vec![b.clone()]),
        ("1:0", "1:0", vec![-&ab_p, ab_m.clone()]),
        ("1:1", "1:1", vec![ab_m, -&ab_p]),
        ("2:1", "2:0", vec![-&cb_p, cb_m.clone()]),
        ("2:1", "2:2", vec![cb_m, -&cb_p]),
    ];
    if b.ord() != rat(1, 48) {
        return Err(format!("oracle leading exponent {}", b.ord()));
    }
    for (l, r, want) in &cases {
        let (code, out) = cli(&["branch", "--left", l, "--right", r, "--order", "6", "--format", "json"]);
        if code != 0 {
            return Err(format!("branch {l} x {r} exited {code}"));
        }
        let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let d: DecompositionJson = serde_json::from_value(v["decomposition"].clone()).map_err(|e| e.to_string())?;
        let got: Vec<Series> = d
            .coefficients
            .iter()
            .map(Series::from_json)
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if &got != want {
            return Err(format!("{l} x {r}: coefficients differ from the eta quotients"));
        }
    }
    Ok("5 products match to order 6".into())
}

fn ac4() -> Verdict {
    judge(&all_pass(&["S4.pindep."], Some(4)).0)
}

fn ac5() -> Verdict {
    judge(&all_pass(&["S5.ladder."], None).0)
}

fn ac6() -> Verdict {
    judge(&all_pass(&["S5.UeqV."], Some(4)).0)
}

fn ac7() -> Verdict {
    judge(&all_pass(&["S5.R0.zfree", "S5.R0.level2-half"], Some(4)).0)
}

fn ac8() -> Verdict {
    judge(&all_pass(&["S5.closure.", "S5.theta-closure.", "S5.chclosure-"], Some(4)).0)
}

/// q^{1/24} Σ_k (−1)^k q^{k(3k−1)/2}.
fn pentagonal(order: Rat) -> Series {
    let mut s = Series::zero(order);
    for k in -10i64..=10 {
        let e = rat(1, 24) + int(k * (3 * k - 1) / 2);
        if e < order {
            s.add_term(e, int(0), CycloNum::from_i64(if k % 2 == 0 { 1 } else { -1 }));
        }
    }
    s
}

/// Σ_{n≥0} (−1)^n (2n+1) q^{(2n+1)²/8}.
fn jacobi_cube(order: Rat) -> Series {
    let mut s = Series::zero(order);
    for n in 0i64..20 {
        let e = rat((2 * n + 1) * (2 * n + 1), 8);
        if e < order {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            s.add_term(e, int(0), CycloNum::from_i64(sign * (2 * n + 1)));
        }
    }
    s
}

fn ac9() -> Verdict {
    let order = int(24);
    let e1 = eta(int(1), 1, order).map_err(|e| e.to_string())?;
    let e3 = eta(int(1), 3, order).map_err(|e| e.to_string())?;
    if e1 != pentagonal(order) {
        return Err("eta differs from the pentagonal series".into());
    }
    if e3 != jacobi_cube(order) {
        return Err("eta^3 differs from the Jacobi series".into());
    }
    Ok(format!("{} + {} terms agree to order 24", e1.num_terms(), e3.num_terms()))
}

fn ac10() -> Verdict {
    let first = cli(&["verify", "--all", "--format", "json"]);
    let again = cli(&["verify", "--all", "--format", "json"]);
    let serial = cli(&["verify", "--all", "--format", "json", "--jobs", "1"]);
    let wide = cli(&["verify", "--all", "--format", "json", "--jobs", "8"]);
    if first != again {
        return Err("two runs differ".into());
    }
    if serial != wide {
        return Err("--jobs 1 and --jobs 8 differ".into());
    }
    let v: serde_json::Value = serde_json::from_str(&first.1).map_err(|e| e.to_string())?;
    Ok(format!(
        "{} bytes identical across 4 runs (summary {}, exit {})",
        first.1.len(),
        v["summary"],
        first.0
    ))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Verdict); 10] = [
        ("AC1", "multiplication, Mumford, squares, shifted-argument and ratio identities", ac1),
        ("AC2", "level-one theta coincidences", ac2),
        ("AC3", "branching coefficients equal eta quotients", ac3),
        ("AC4", "numerator shift independence", ac4),
        ("AC5", "ladder consistency", ac5),
        ("AC6", "U = V span equalities", ac6),
        ("AC7", "derived denominator", ac7),
        ("AC8", "theta and character closure", ac8),
        ("AC9", "eta oracle cross-checks", ac9),
        ("AC10", "deterministic reports", ac10),
    ];
    let mut failed = 0;
    for (tag, what, check) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match verdict {
            Ok(detail) => println!("[PASS] {tag} {what}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {tag} {what}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
}
