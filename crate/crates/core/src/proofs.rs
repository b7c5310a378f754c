//! Forcing chains: an assumed partial coloring, a list of solutions each of
//! which forces one value's color, and a final monochromatic solution.
//!
//! A step `(x1, ..., xm | x0) => v is g` is sound when every entry other
//! than `v` already has the color opposite to `g`; giving `v` that color too
//! would make the tuple monochromatic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::checker::is_solution;
use crate::coloring::Color;
use crate::error::{domain, RadoError, Result};
use crate::formula::{evaluate, EquationParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    /// A tuple is not a solution of the equation.
    Arithmetic,
    /// A step's other entries are not all known and opposite to the forced
    /// color, or the forced value already has the other color.
    Premise,
    /// A value exceeds the closed-form Rado number.
    Range,
    /// The final tuple is not monochromatic in known colors.
    Contradiction,
}

impl FailureKind {
    pub fn label(self) -> &'static str {
        match self {
            FailureKind::Arithmetic => "arithmetic",
            FailureKind::Premise => "premise",
            FailureKind::Range => "range",
            FailureKind::Contradiction => "contradiction",
        }
    }
}

impl FromStr for FailureKind {
    type Err = RadoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "arithmetic" => Ok(FailureKind::Arithmetic),
            "premise" => Ok(FailureKind::Premise),
            "range" => Ok(FailureKind::Range),
            "contradiction" => Ok(FailureKind::Contradiction),
            other => Err(RadoError::MalformedChain(format!("unknown failure kind {other:?}"))),
        }
    }
}

/// `"pass"` or `"fail:<kind>[,<kind>...]"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail(BTreeSet<FailureKind>),
}

impl FromStr for Expectation {
    type Err = RadoError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "pass" {
            return Ok(Expectation::Pass);
        }
        let Some(kinds) = s.strip_prefix("fail:") else {
            return Err(RadoError::MalformedChain(format!("bad expectation {s:?}")));
        };
        let kinds = kinds.split(',').map(str::parse).collect::<Result<BTreeSet<_>>>()?;
        if kinds.is_empty() {
            return Err(RadoError::MalformedChain("fail: needs at least one kind".into()));
        }
        Ok(Expectation::Fail(kinds))
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Pass => f.write_str("pass"),
            Expectation::Fail(kinds) => {
                let labels: Vec<_> = kinds.iter().map(|k| k.label()).collect();
                write!(f, "fail:{}", labels.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    /// `[x1, ..., xm, x0]`.
    pub tuple: Vec<u64>,
    pub value: u64,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingChain {
    pub params: EquationParams,
    pub assumptions: BTreeMap<u64, Color>,
    pub steps: Vec<ChainStep>,
    pub contradiction: Vec<u64>,
    pub expected: Option<Expectation>,
    pub name: Option<String>,
    pub case: Option<String>,
    /// The Rado number the source table claims.
    pub claimed: Option<u64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ForcingDocument {
    value: u64,
    color: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct StepDocument {
    tuple: Vec<u64>,
    forces: ForcingDocument,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ChainDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    case: Option<String>,
    m: u32,
    c: i64,
    a: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    claimed: Option<u64>,
    assumptions: BTreeMap<String, String>,
    steps: Vec<StepDocument>,
    contradiction: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn parse_color(s: &str) -> Result<Color> {
    match s {
        "red" => Ok(Color::Red),
        "blue" => Ok(Color::Blue),
        other => Err(RadoError::MalformedChain(format!("unknown color {other:?}"))),
    }
}

impl ForcingChain {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ChainDocument =
            serde_json::from_str(text).map_err(|e| RadoError::MalformedChain(e.to_string()))?;
        let params = EquationParams::new(doc.m, doc.c, doc.a)
            .map_err(|e| RadoError::MalformedChain(e.to_string()))?;
        let mut assumptions = BTreeMap::new();
        for (k, v) in &doc.assumptions {
            let key: u64 = k
                .trim()
                .parse()
                .ok()
                .filter(|&x| x > 0)
                .ok_or_else(|| RadoError::MalformedChain(format!("assumption key {k:?} is not a positive integer")))?;
            assumptions.insert(key, parse_color(v)?);
        }
        let steps = doc
            .steps
            .iter()
            .map(|s| {
                Ok(ChainStep {
                    tuple: s.tuple.clone(),
                    value: s.forces.value,
                    color: parse_color(&s.forces.color)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let expected = doc.expected.as_deref().map(str::parse).transpose()?;
        let chain = ForcingChain {
            params,
            assumptions,
            steps,
            contradiction: doc.contradiction,
            expected,
            name: doc.name,
            case: doc.case,
            claimed: doc.claimed,
            note: doc.note,
        };
        chain.check_structure()?;
        Ok(chain)
    }

    pub fn to_json(&self) -> String {
        let doc = ChainDocument {
            name: self.name.clone(),
            case: self.case.clone(),
            m: self.params.m,
            c: self.params.c,
            a: self.params.a,
            claimed: self.claimed,
            assumptions: self.assumptions.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            steps: self
                .steps
                .iter()
                .map(|s| StepDocument {
                    tuple: s.tuple.clone(),
                    forces: ForcingDocument { value: s.value, color: s.color.to_string() },
                })
                .collect(),
            contradiction: self.contradiction.clone(),
            expected: self.expected.as_ref().map(|e| e.to_string()),
            note: self.note.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("chain serializes")
    }

    fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.params.to_string())
    }

    fn check_structure(&self) -> Result<()> {
        let arity = self.params.lhs_len() + 1;
        let check_tuple = |what: &str, t: &[u64]| {
            if t.len() != arity {
                return Err(RadoError::MalformedChain(format!(
                    "{what} has {} entries, expected {arity}",
                    t.len()
                )));
            }
            if t.contains(&0) {
                return Err(RadoError::MalformedChain(format!("{what} contains 0")));
            }
            Ok(())
        };
        for (i, step) in self.steps.iter().enumerate() {
            check_tuple(&format!("step {}", i + 1), &step.tuple)?;
            if !step.tuple.contains(&step.value) {
                return Err(RadoError::MalformedChain(format!(
                    "step {} forces {}, which is not in its tuple",
                    i + 1,
                    step.value
                )));
            }
        }
        check_tuple("contradiction", &self.contradiction)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleCheck {
    pub tuple: Vec<u64>,
    pub failures: Vec<FailureKind>,
    pub messages: Vec<String>,
}

impl TupleCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, kind: FailureKind, msg: String) {
        if !self.failures.contains(&kind) {
            self.failures.push(kind);
        }
        if !self.messages.contains(&msg) {
            self.messages.push(msg);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub name: String,
    /// The closed-form Rado number used for range checks, when finite.
    pub bound: Option<u64>,
    pub steps: Vec<TupleCheck>,
    pub contradiction: TupleCheck,
}

impl ChainReport {
    pub fn failures(&self) -> BTreeSet<FailureKind> {
        self.steps
            .iter()
            .chain(std::iter::once(&self.contradiction))
            .flat_map(|t| t.failures.iter().copied())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn outcome(&self) -> Expectation {
        let f = self.failures();
        if f.is_empty() {
            Expectation::Pass
        } else {
            Expectation::Fail(f)
        }
    }

    pub fn meets(&self, expected: &Expectation) -> bool {
        self.outcome() == *expected
    }
}

fn show(t: &[u64]) -> String {
    let (xs, x0) = t.split_at(t.len() - 1);
    let xs: Vec<_> = xs.iter().map(u64::to_string).collect();
    format!("({} | {})", xs.join(","), x0[0])
}

fn check_common(params: &EquationParams, bound: Option<u64>, t: &[u64], out: &mut TupleCheck) {
    let (xs, x0) = t.split_at(t.len() - 1);
    if !is_solution(xs, x0[0], params).unwrap_or(false) {
        out.fail(FailureKind::Arithmetic, format!("{} is not a solution", show(t)));
    }
    if let Some(r) = bound {
        if let Some(&big) = t.iter().filter(|&&x| x > r).max() {
            out.fail(FailureKind::Range, format!("{big} exceeds R = {r}"));
        }
    }
}

/// Replay a chain. Forcings are recorded even when their step fails, so one
/// bad step does not cascade into spurious failures later on.
pub fn verify_chain(chain: &ForcingChain) -> Result<ChainReport> {
    chain.check_structure()?;
    let params = &chain.params;
    let bound = evaluate(*params).ok().and_then(|v| v.finite());
    let mut known = chain.assumptions.clone();
    let mut steps = Vec::with_capacity(chain.steps.len());

    for (i, step) in chain.steps.iter().enumerate() {
        let mut check = TupleCheck { tuple: step.tuple.clone(), failures: vec![], messages: vec![] };
        check_common(params, bound, &step.tuple, &mut check);
        let other = step.color.opposite();
        for &x in step.tuple.iter().filter(|&&x| x != step.value) {
            match known.get(&x) {
                Some(&c) if c == other => {}
                Some(&c) => check.fail(
                    FailureKind::Premise,
                    format!("step {}: {x} is {c}, needs {other} to force {}", i + 1, step.value),
                ),
                None => check.fail(
                    FailureKind::Premise,
                    format!("step {}: {x} has no known color", i + 1),
                ),
            }
        }
        if let Some(&c) = known.get(&step.value) {
            if c != step.color {
                check.fail(
                    FailureKind::Premise,
                    format!("step {}: {} is already {c}", i + 1, step.value),
                );
            }
        }
        known.insert(step.value, step.color);
        steps.push(check);
    }

    let t = &chain.contradiction;
    let mut closing = TupleCheck { tuple: t.clone(), failures: vec![], messages: vec![] };
    check_common(params, bound, t, &mut closing);
    let colors: BTreeSet<Option<Color>> = t.iter().map(|x| known.get(x).copied()).collect();
    if colors.contains(&None) {
        let unknown: Vec<_> = t.iter().filter(|x| !known.contains_key(x)).map(u64::to_string).collect();
        closing.fail(
            FailureKind::Contradiction,
            format!("{} has uncolored entries {}", show(t), unknown.join(",")),
        );
    } else if colors.len() > 1 {
        closing.fail(FailureKind::Contradiction, format!("{} is not monochromatic", show(t)));
    }

    Ok(ChainReport { name: chain.label(), bound, steps, contradiction: closing })
}

/// Chain refuting `1..=s` Red with `s + 1` Blue, for `m` and `c` even.
///
/// With `k = (m-2)/2` and `x = s*k + m + c - 1`: all ones force `(m+c)/2`
/// Blue; `(1, 2 x k, s x k, x | x)` forces `x` Blue; then
/// `(s+1 x (m-2), (m+c)/2, (m+c)/2 | x)` is Blue.
#[allow(non_snake_case)]
pub fn generate_case_IIA_chain(m: u32, c: i64, s: u64) -> Result<ForcingChain> {
    if m < 2 || !m.is_multiple_of(2) || c < 2 || c % 2 != 0 {
        return domain(format!("need m, c even and positive, got m={m}, c={c}"));
    }
    let half = (m as u64 + c as u64) / 2;
    if s < 1 || s + 1 > half {
        return domain(format!("need 1 <= s <= (m+c)/2 - 1 = {}, got s={s}", half - 1));
    }
    let k = (m as u64 - 2) / 2;
    if k > 0 && s < 2 {
        // The second tuple uses 2 as a Red summand.
        return domain(format!("need s >= 2 when m >= 4, got s={s}"));
    }
    let x = s * k + m as u64 + c as u64 - 1;

    let mut second = vec![1];
    second.extend(std::iter::repeat_n(2, k as usize));
    second.extend(std::iter::repeat_n(s, k as usize));
    second.extend([x, x]);

    let mut closing: Vec<u64> = std::iter::repeat_n(s + 1, m as usize - 2).collect();
    closing.extend([half, half, x]);

    let mut assumptions: BTreeMap<u64, Color> = (1..=s).map(|v| (v, Color::Red)).collect();
    assumptions.insert(s + 1, Color::Blue);

    let mut first: Vec<u64> = vec![1; m as usize];
    first.push(half);

    Ok(ForcingChain {
        params: EquationParams::with_two(m, c)?,
        assumptions,
        steps: vec![
            ChainStep { tuple: first, value: half, color: Color::Blue },
            ChainStep { tuple: second, value: x, color: Color::Blue },
        ],
        contradiction: closing,
        expected: Some(Expectation::Pass),
        name: Some(format!("II.A m={m} c={c} s={s}")),
        case: Some("II.A".into()),
        claimed: None,
        note: None,
    })
}

/// Multiplicities `(x, y)` with `x + y = m - 1` and
/// `floor(q')*x + ceil(q')*y = R - c`, where `q' = (R-c)/(m-1)`.
#[allow(non_snake_case)]
pub fn generate_case_IIIA3_tuple(m: u32, c: i64, r: u64) -> Result<(u64, u64)> {
    if m < 3 || m.is_multiple_of(2) {
        return domain(format!("need m odd and at least 3, got m={m}"));
    }
    let k = m as i128 - 1;
    let span = r as i128 - c as i128;
    let q = span.div_euclid(k) + i128::from(span.rem_euclid(k) != 0);
    let x = c as i128 + q * k - r as i128;
    let y = k - x;
    if x < 0 || y < 0 {
        return domain(format!("negative multiplicity (x={x}, y={y}) for m={m}, c={c}, R={r}"));
    }
    Ok((x as u64, y as u64))
}

macro_rules! fixtures {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../fixtures/chains/", $file)))),*]
    };
}

/// The published case tables as chain documents, one per file.
pub const FIXTURE_FILES: &[(&str, &str)] = fixtures![
    "iib2_m2_c2.json",
    "iib2_m2_c4.json",
    "iib2_m2_c6.json",
    "iib2_m2_c8.json",
    "iib2_m2_c10.json",
    "iib2_m4_c2.json",
    "iib2_m4_c4.json",
    "iib2_m4_c6.json",
    "iib2_m4_c8.json",
    "iib2_m4_c8_repaired.json",
    "iib2_m6_c2.json",
    "iib2_m6_c4.json",
    "iib2_m8_c2.json",
    "iiib1_m3_c1.json",
    "iiib1_m3_c3.json",
    "iiib1_m3_c5.json",
    "iiib1_m5_c1.json",
    "iiib2_m3_c1.json",
    "iiib2_m3_c3.json",
    "iiib2_m3_c5.json",
    "iiib2_m3_c5_repaired.json",
    "iiib2_m3_c7.json",
    "iiib2_m3_c9.json",
    "iiib2_m3_c11.json",
    "iiib2_m3_c13.json",
    "iiib2_m5_c1.json",
    "iiib2_m5_c3.json",
    "iiib2_m5_c5.json",
    "iiib2_m5_c7.json",
    "iiib2_m7_c1.json",
    "iiib2_m7_c3.json",
    "iiib2_m9_c1.json",
    "ivb2_m3_c2.json",
    "ivb2_m3_c4.json",
    "ivb2_m3_c6.json",
    "ivb2_m3_c8.json",
    "ivb2_m3_c10.json",
    "ivb2_m3_c12.json",
    "ivb2_m3_c12_repaired.json",
    "ivb2_m3_c14.json",
    "ivb2_m5_c2.json",
    "ivb2_m5_c4.json",
    "ivb2_m5_c6.json",
    "ivb2_m7_c2.json",
    "ivb2_m7_c4.json",
    "ivb2_m9_c2.json",
];

pub fn fixture_corpus() -> Vec<ForcingChain> {
    FIXTURE_FILES
        .iter()
        .map(|(file, text)| {
            ForcingChain::from_json(text).unwrap_or_else(|e| panic!("fixture {file}: {e}"))
        })
        .collect()
}
