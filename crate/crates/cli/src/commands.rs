use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use num_rational::BigRational;
use rado_lab::coloring::{lemma1_coloring, linear_infinite_coloring, parity_coloring};
use rado_lab::continuous::{verify_discrete_blocks, verify_interval_chain, verify_lemma4_chain, VerificationReport};
use rado_lab::proofs::{fixture_corpus, verify_chain, ForcingChain};
use rado_lab::search::{explore_negative_c, rado_brute_report, BruteReport, ProgressEvent};
use rado_lab::{evaluate, find_mono_solution, Coloring, EquationParams, RadoValue};
use serde_json::{json, Value};

use crate::output::{value_json, Report, TableRow, EXIT_BUDGET, EXIT_FAILED};
use crate::{BudgetArgs, ColoringKind, ContinuousKind, EquationArgs};

fn params_of(eq: &EquationArgs) -> anyhow::Result<EquationParams> {
    Ok(EquationParams::new(eq.m, eq.c, eq.a)?)
}

fn params_json(p: &EquationParams) -> Value {
    json!({"m": p.m, "c": p.c, "a": p.a})
}

fn progress(event: ProgressEvent) {
    eprintln!("progress: n={} nodes={} depth={}", event.n, event.nodes, event.depth);
}

pub fn formula(eq: &EquationArgs) -> anyhow::Result<Report> {
    let p = params_of(eq)?;
    let v = evaluate(p)?;
    Ok(Report::new("formula", params_json(&p), value_json(&v), v.to_string()))
}

fn brute_report(command: &'static str, r: &BruteReport) -> Report {
    let p = r.params;
    let mut report = Report::new(command, params_json(&p), value_json(&r.value), r.value.to_string());
    report.budget_used = json!({
        "nodes": r.total_nodes,
        "refutation_nodes": r.refutation_nodes,
        "limit": r.exhausted.as_ref().map(|e| e.limit),
    });
    if let Ok(f) = evaluate(p) {
        report.diagnostics.push(format!("formula: {f}"));
        if let (Some(a), Some(b)) = (f.finite(), r.value.finite()) {
            if a != b {
                report.diagnostics.push(format!("search disagrees with the formula ({b} vs {a})"));
                report.exit = EXIT_FAILED;
            }
        }
    }
    if let Some(ex) = &r.exhausted {
        report
            .diagnostics
            .push(format!("budget exhausted at n={} after {} nodes ({:?})", ex.n, ex.nodes, ex.limit));
    }
    if let Some(cert) = &r.certificate {
        let sound = find_mono_solution(cert, &p).is_none();
        report.certificate = Some(json!({
            "n": cert.n(),
            "coloring": cert.to_compact(),
            "solution_free": sound,
        }));
    }
    if matches!(r.value, RadoValue::UnknownAbove(_)) {
        report.exit = EXIT_BUDGET;
    }
    report
}

fn certificate_document(r: &BruteReport) -> Value {
    let cert = r.certificate.as_ref().expect("brute always returns a certificate");
    json!({
        "params": params_json(&r.params),
        "value": value_json(&r.value),
        "coloring": cert.to_document(),
        "solution_free": find_mono_solution(cert, &r.params).is_none(),
    })
}

fn write_json(path: &Path, v: &Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn brute(eq: &EquationArgs, b: &BudgetArgs, certificate: Option<PathBuf>) -> anyhow::Result<Report> {
    let p = params_of(eq)?;
    let budget = b.budget(1000)?;
    let start = Instant::now();
    let observer: &(dyn Fn(ProgressEvent) + Sync) = &progress;
    let r = rado_brute_report(&p, &budget, b.progress.then_some(observer));
    if b.progress {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    let path = certificate.unwrap_or_else(|| PathBuf::from(format!("certificate-m{}-c{}-a{}.json", p.m, p.c, p.a)));
    write_json(&path, &certificate_document(&r))?;
    let mut report = brute_report("brute", &r);
    if let Some(cert) = report.certificate.as_mut() {
        cert["path"] = json!(path.display().to_string());
    }
    report.diagnostics.push(format!("certificate written to {}", path.display()));
    Ok(report)
}

pub fn explore(m: u32, c: i64, b: &BudgetArgs) -> anyhow::Result<Report> {
    let budget = b.budget(1000)?;
    let r = explore_negative_c(m, c, &budget)?;
    Ok(brute_report("explore", &r))
}

/// `4`, or the inclusive range `2..6`.
pub fn parse_range(s: &str) -> anyhow::Result<Vec<i64>> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (s, s),
    };
    let lo: i64 = lo.parse().with_context(|| format!("bad range start in {s:?}"))?;
    let hi: i64 = hi.parse().with_context(|| format!("bad range end in {s:?}"))?;
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok((lo..=hi).collect())
}

pub fn table(m_range: &str, c_range: &str, a: u32, b: &BudgetArgs) -> anyhow::Result<Report> {
    let ms = parse_range(m_range)?;
    let cs = parse_range(c_range)?;
    let budget = b.budget(100)?;
    let mut rows = Vec::new();
    for &m in &ms {
        let m = u32::try_from(m).context("m must be positive")?;
        for &c in &cs {
            let p = EquationParams::new(m, c, a)?;
            let formula = evaluate(p).ok();
            let start = Instant::now();
            let r = rado_brute_report(&p, &budget, None);
            let seconds = start.elapsed().as_secs_f64();
            let agree = match (formula, r.value) {
                (Some(RadoValue::Finite(f)), RadoValue::Finite(g)) => Some(f == g),
                (Some(RadoValue::Finite(f)), RadoValue::UnknownAbove(k)) => (k >= f).then_some(false),
                (Some(RadoValue::Infinite(_)), RadoValue::Finite(_)) => Some(false),
                (Some(RadoValue::Infinite(_)), RadoValue::UnknownAbove(_)) => Some(true),
                _ => None,
            };
            rows.push(TableRow {
                m,
                c,
                a,
                formula: formula.map_or_else(|| "n/a".into(), |v| v.to_string()),
                brute: r.value.to_string(),
                agree,
                nodes: r.total_nodes,
                seconds,
            });
        }
    }
    let mut text = format!("{:>4} {:>4} {:>3}  {:<20} {:<20} {:<6} {:>8}\n", "m", "c", "a", "formula", "search", "agree", "nodes");
    for r in &rows {
        let agree = r.agree.map_or("-", |x| if x { "yes" } else { "NO" });
        let _ = writeln!(
            text,
            "{:>4} {:>4} {:>3}  {:<20} {:<20} {:<6} {:>8}",
            r.m, r.c, r.a, r.formula, r.brute, agree, r.nodes
        );
    }
    let disagreements: Vec<&TableRow> = rows.iter().filter(|r| r.agree == Some(false)).collect();
    let mut report = Report::new(
        "table",
        json!({"m": ms, "c": cs, "a": a, "max_n": budget.max_n}),
        json!({"rows": rows, "disagreements": disagreements.len()}),
        text,
    );
    for r in &disagreements {
        report
            .diagnostics
            .push(format!("disagreement at m={} c={}: formula {}, search {}", r.m, r.c, r.formula, r.brute));
    }
    if !disagreements.is_empty() {
        report.exit = EXIT_FAILED;
    }
    report.budget_used = json!({"nodes": rows.iter().map(|r| r.nodes).sum::<u64>()});
    report.rows = Some(rows);
    Ok(report)
}

pub fn check_coloring(eq: &EquationArgs, file: Option<PathBuf>, inline: Option<String>) -> anyhow::Result<Report> {
    let p = params_of(eq)?;
    let text = match (file, inline) {
        (Some(path), _) => std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?,
        (None, Some(s)) => s,
        (None, None) => bail!("give --file or --coloring"),
    };
    let x = Coloring::parse(&text)?;
    let witness = find_mono_solution(&x, &p);
    let summary = match &witness {
        None => format!("no monochromatic solution on [1,{}]", x.n()),
        Some(w) => format!("monochromatic {} solution {:?}", w.color, w.tuple()),
    };
    let mut report = Report::new(
        "check-coloring",
        json!({"m": p.m, "c": p.c, "a": p.a, "n": x.n()}),
        json!({"solution_free": witness.is_none(), "witness": witness}),
        summary,
    );
    if witness.is_some() {
        report.exit = EXIT_FAILED;
    }
    Ok(report)
}

fn chain_text(chain: &ForcingChain, report: &rado_lab::proofs::ChainReport) -> String {
    let mut text = String::new();
    for (i, step) in report.steps.iter().enumerate() {
        let s = &chain.steps[i];
        let verdict = if step.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(text, "step {}: {:?} => {} is {}: {verdict}", i + 1, s.tuple, s.value, s.color);
        for msg in &step.messages {
            let _ = writeln!(text, "  {msg}");
        }
    }
    let verdict = if report.contradiction.passed() { "ok" } else { "FAIL" };
    let _ = writeln!(text, "contradiction {:?}: {verdict}", chain.contradiction);
    for msg in &report.contradiction.messages {
        let _ = writeln!(text, "  {msg}");
    }
    let _ = write!(text, "{}", report.outcome().to_string().replacen("fail:", "FAIL ", 1).replace("pass", "PASS"));
    text
}

pub fn chain_verify(file: &Path) -> anyhow::Result<Report> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let chain = ForcingChain::from_json(&text)?;
    let report = verify_chain(&chain)?;
    let expected = chain.expected.as_ref().map(|e| e.to_string());
    let mut out = Report::new(
        "chain verify",
        json!({"file": file.display().to_string(), "m": chain.params.m, "c": chain.params.c, "a": chain.params.a}),
        json!({
            "outcome": report.outcome().to_string(),
            "expected": expected,
            "meets_expected": chain.expected.as_ref().map(|e| report.meets(e)),
            "report": report,
        }),
        chain_text(&chain, &report),
    );
    if let Some(note) = &chain.note {
        out.diagnostics.push(format!("note: {note}"));
    }
    if !report.passed() {
        out.exit = EXIT_FAILED;
    }
    Ok(out)
}

pub fn chain_corpus() -> anyhow::Result<Report> {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut mismatches = 0;
    for chain in fixture_corpus() {
        let report = verify_chain(&chain)?;
        let expected = chain.expected.clone().expect("fixtures are tagged");
        let meets = report.meets(&expected);
        mismatches += usize::from(!meets);
        let name = chain.name.clone().unwrap_or_default();
        let case = chain.case.clone().unwrap_or_default();
        let _ = writeln!(
            text,
            "{:<8} {:<22} {:<32} {}",
            case,
            name,
            report.outcome().to_string(),
            if meets { "as tagged" } else { "MISMATCH" }
        );
        rows.push(json!({
            "name": name,
            "case": case,
            "outcome": report.outcome().to_string(),
            "expected": expected.to_string(),
            "meets_expected": meets,
        }));
    }
    let mut report = Report::new("chain corpus", json!({}), json!({"fixtures": rows, "mismatches": mismatches}), text);
    if mismatches > 0 {
        report.exit = EXIT_FAILED;
    }
    Ok(report)
}

fn parse_rational(s: &str) -> anyhow::Result<BigRational> {
    s.trim().parse().map_err(|_| anyhow::anyhow!("not a rational number: {s:?}"))
}

fn as_integer<T: TryFrom<i64>>(q: &BigRational) -> Option<T> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.to_integer()).ok().and_then(|v| T::try_from(v).ok())
}

pub fn continuous_verify(c: &str, a: &str, k_max: u32, kind: ContinuousKind) -> anyhow::Result<Report> {
    let (cq, aq) = (parse_rational(c)?, parse_rational(a)?);
    let one = BigRational::from_integer(1.into());
    let mut runs: Vec<(&str, VerificationReport)> = Vec::new();
    let mut skipped = Vec::new();
    let want = |k: ContinuousKind| kind == k || kind == ContinuousKind::All;

    if want(ContinuousKind::Intervals) {
        if aq > one || kind == ContinuousKind::Intervals {
            runs.push(("intervals", verify_interval_chain(&cq, &aq, k_max)?));
        } else {
            skipped.push("intervals: needs a > 1".to_string());
        }
    }
    if want(ContinuousKind::Translation) {
        runs.push(("translation", verify_lemma4_chain(&cq, k_max)?));
    }
    if want(ContinuousKind::Blocks) {
        let ints = as_integer::<i64>(&cq).zip(as_integer::<u32>(&aq));
        let divisible = ints.is_some_and(|(ci, ai)| ai >= 2 && ci % (ai as i64 - 1) == 0);
        match ints {
            Some((ci, ai)) if !divisible || kind == ContinuousKind::Blocks => {
                runs.push(("blocks", verify_discrete_blocks(ci, ai, k_max)?));
            }
            Some(_) => skipped.push("blocks: (a-1) divides c".to_string()),
            None if kind == ContinuousKind::Blocks => bail!("integer blocks need integer c and a"),
            None => skipped.push("blocks: needs integer c and a".to_string()),
        }
    }

    let passed = runs.iter().all(|(_, r)| r.passed());
    let mut text = String::new();
    for (name, r) in &runs {
        let failed: Vec<u32> = r.failed_steps().map(|s| s.k).collect();
        if failed.is_empty() {
            let _ = writeln!(text, "{name}: PASS ({} steps)", r.checks.len());
        } else {
            let _ = writeln!(text, "{name}: FAIL at k = {failed:?}");
            for s in r.failed_steps() {
                for f in &s.failures {
                    let _ = writeln!(text, "  k={}: {f}", s.k);
                }
            }
        }
    }
    let _ = write!(text, "{}", if passed { "PASS" } else { "FAIL" });
    let results: Vec<Value> = runs
        .iter()
        .map(|(name, r)| json!({"check": name, "passed": r.passed(), "report": r}))
        .collect();
    let mut report = Report::new(
        "continuous verify",
        json!({"c": cq.to_string(), "a": aq.to_string(), "k_max": k_max}),
        json!({"passed": passed, "checks": results}),
        text,
    );
    report.diagnostics = skipped.into_iter().map(|s| format!("skipped {s}")).collect();
    if !passed {
        report.exit = EXIT_FAILED;
    }
    Ok(report)
}

pub fn coloring(kind: ColoringKind, m: Option<u32>, c: Option<i64>, a: u32, n: Option<u64>) -> anyhow::Result<Report> {
    let need_c = || c.context("--c is required");
    let need_n = || n.context("--n is required");
    let (x, params) = match kind {
        ColoringKind::Lemma1 => {
            let m = m.context("--m is required")?;
            let c = need_c()?;
            (lemma1_coloring(m, c, a)?, Some(EquationParams::new(m, c, a)?))
        }
        ColoringKind::Parity => (parity_coloring(need_n()?), None),
        ColoringKind::Linear => {
            let c = need_c()?;
            (linear_infinite_coloring(c, a, need_n()?)?, Some(EquationParams::new(1, c, a)?))
        }
    };
    let check = params.map(|p| find_mono_solution(&x, &p).is_none());
    let mut report = Report::new(
        "coloring",
        json!({"kind": format!("{kind:?}").to_lowercase(), "m": m, "c": c, "a": a, "n": x.n()}),
        json!({"coloring": x.to_document(), "compact": x.to_compact(), "solution_free": check}),
        x.to_compact(),
    );
    if check == Some(false) {
        report.exit = EXIT_FAILED;
    }
    Ok(report)
}
