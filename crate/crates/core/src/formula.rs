//! Closed-form Rado numbers for `x1 + ... + xm + c = a*x0`, plus a registry
//! of previously published values for neighbouring equations.
//!
//! Every evaluator works in checked integer arithmetic. Nested ceilings are
//! computed with `ceil(p/q) = (p + q - 1) div q`, so results are bit-exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{domain, RadoError, Result};

/// The equation `x1 + ... + xm + c = a*x0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquationParams {
    pub m: u32,
    pub c: i64,
    pub a: u32,
}

impl EquationParams {
    pub fn new(m: u32, c: i64, a: u32) -> Result<Self> {
        if m == 0 {
            return domain("m must be at least 1");
        }
        if a == 0 {
            return domain("a must be at least 1");
        }
        Ok(EquationParams { m, c, a })
    }

    /// The paper family with coefficient 2.
    pub fn with_two(m: u32, c: i64) -> Result<Self> {
        Self::new(m, c, 2)
    }

    pub fn lhs_len(&self) -> usize {
        self.m as usize
    }
}

impl fmt::Display for EquationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, c={}, a={})", self.m, self.c, self.a)
    }
}

/// Why a Rado number is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// m even, c odd: the even/odd coloring never admits a solution.
    ParityObstruction,
    /// `(a-1)` does not divide `c` in the one-variable equation.
    DivisibilityObstruction,
    /// `x1 + c = x0` with `a = 1`.
    CoefficientOne,
    /// Infinite by a published result outside this family's theorem.
    Published,
}

impl Obstruction {
    pub fn label(&self) -> &'static str {
        match self {
            Obstruction::ParityObstruction => "parity",
            Obstruction::DivisibilityObstruction => "divisibility",
            Obstruction::CoefficientOne => "coefficient one",
            Obstruction::Published => "published",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadoValue {
    Finite(u64),
    Infinite(Obstruction),
    /// A valid coloring exists at every size up to and including this bound.
    UnknownAbove(u64),
}

impl RadoValue {
    pub fn finite(&self) -> Option<u64> {
        match *self {
            RadoValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RadoValue::Infinite(_))
    }
}

impl fmt::Display for RadoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadoValue::Finite(v) => write!(f, "{v}"),
            RadoValue::Infinite(why) => write!(f, "infinite ({})", why.label()),
            RadoValue::UnknownAbove(n) => write!(f, "unknown above {n}"),
        }
    }
}

/// Continuous (real-interval) Rado number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContinuousValue {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for ContinuousValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuousValue::Finite(r) => write!(f, "{r}"),
            ContinuousValue::Infinite => f.write_str("infinite"),
        }
    }
}

/// `ceil(p / q)` for `q > 0`; exact for either sign of `p`.
pub(crate) fn ceil_div(p: i128, q: i128) -> i128 {
    debug_assert!(q > 0);
    if p >= 0 {
        (p + q - 1) / q
    } else {
        -((-p) / q)
    }
}

fn to_u64(v: i128, what: &'static str) -> Result<u64> {
    u64::try_from(v).map_err(|_| RadoError::Overflow(what))
}

fn checked(v: Option<i128>, what: &'static str) -> Result<i128> {
    let v = v.ok_or(RadoError::Overflow(what))?;
    if v > u64::MAX as i128 || v < i64::MIN as i128 {
        return Err(RadoError::Overflow(what));
    }
    Ok(v)
}

/// Two-color Rado number of `x1 + ... + xm + c = 2*x0` for `m >= 2`, `c >= 1`.
///
/// `c = 0` is deliberately rejected: the small-m values there are the
/// Schaal-Vestal exceptions, served by [`registry_lookup`].
pub fn rado_main_formula(m: u32, c: i64) -> Result<RadoValue> {
    if m < 2 {
        return domain(format!("main formula needs m >= 2, got m={m}"));
    }
    if c < 1 {
        return domain(format!(
            "main formula needs c >= 1, got c={c} (use the registry for c = 0)"
        ));
    }
    let (m, c) = (m as i128, c as i128);
    if m % 2 == 0 && c % 2 != 0 {
        return Ok(RadoValue::Infinite(Obstruction::ParityObstruction));
    }
    let inner = ceil_div(checked(m.checked_add(c), "m + c")?, 2);
    let m_inner = checked(m.checked_mul(inner), "m * ceil((m+c)/2)")?;
    let value = if m % 2 == 1 {
        ceil_div(checked(m_inner.checked_add(c), "m*M + c")?, 2)
    } else {
        // m even forces c even on this branch; both halves are exact.
        checked((m_inner / 2).checked_add(c / 2), "m*M/2 + c/2")?
    };
    Ok(RadoValue::Finite(to_u64(value, "main formula")?))
}

/// Lower bound `ceil((m/a) * ceil((m+c)/a) + c/a)` for `x1 + ... + xm + c = a*x0`.
pub fn lemma1_lower_bound(m: u32, c: i64, a: u32) -> Result<u64> {
    if m < 2 || c < 1 || a < 1 {
        return domain(format!(
            "lower bound needs m >= 2, c >= 1, a >= 1; got m={m}, c={c}, a={a}"
        ));
    }
    let (m, c, a) = (m as i128, c as i128, a as i128);
    let block = ceil_div(checked(m.checked_add(c), "m + c")?, a);
    let sum = checked(
        m.checked_mul(block).and_then(|v| v.checked_add(c)),
        "m*M + c",
    )?;
    to_u64(ceil_div(sum, a), "lower bound")
}

/// Two-color Rado number of `x1 + c = a*x0` over the positive integers.
pub fn rado_linear(c: i64, a: u32) -> Result<RadoValue> {
    if c < 1 || a < 1 {
        return domain(format!("linear case needs c >= 1, a >= 1; got c={c}, a={a}"));
    }
    if a == 1 {
        return Ok(RadoValue::Infinite(Obstruction::CoefficientOne));
    }
    let step = a as i64 - 1;
    if c % step == 0 {
        Ok(RadoValue::Finite((c / step) as u64))
    } else {
        Ok(RadoValue::Infinite(Obstruction::DivisibilityObstruction))
    }
}

/// Continuous Rado number of `x1 + c = a*x0` over real intervals `[1, R]`.
pub fn continuous_linear(c: &BigRational, a: &BigRational) -> Result<ContinuousValue> {
    if !c.is_positive() {
        return domain(format!("continuous case needs c > 0, got {c}"));
    }
    let one = BigRational::one();
    if *a < one {
        return domain(format!("continuous case needs a >= 1, got {a}"));
    }
    if *a == one {
        return Ok(ContinuousValue::Infinite);
    }
    Ok(ContinuousValue::Finite(c / (a - one)))
}

/// Published Rado numbers for equations adjacent to this family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "equation")]
pub enum PublishedEquation {
    /// `x1 + ... + x_{k-1} = x_k` with `k = total_vars >= 3`.
    BeutelspacherBrestovansky { total_vars: u32 },
    /// `x1 + x2 + c = x3`.
    BurrLoo { c: i64 },
    /// `x1 + ... + x_{k-1} + c = x_k` with `k = total_vars >= 3`, `c >= 0`.
    Schaal { total_vars: u32, c: i64 },
    /// `x1 + ... + x_m = 2*x0`, indexed by the number of left-hand terms.
    SchaalVestal { m_left: u32 },
    /// Continuous `x1 + ... + xm = a*x0` for integer `a >= 2`, `m >= a(a-1)`.
    VestalContinuous { m: u32, a: u32 },
    /// Schur numbers `S(t)`, known for `t <= 4`.
    Schur { colors: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublishedValue {
    Discrete(RadoValue),
    Continuous(ContinuousValue),
}

impl PublishedValue {
    pub fn discrete(&self) -> Option<RadoValue> {
        match self {
            PublishedValue::Discrete(v) => Some(*v),
            PublishedValue::Continuous(_) => None,
        }
    }
}

impl fmt::Display for PublishedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PublishedValue::Discrete(v) => v.fmt(f),
            PublishedValue::Continuous(v) => v.fmt(f),
        }
    }
}

impl PublishedEquation {
    /// The member of `x1 + ... + xm + c = a*x0` this equation coincides with,
    /// when it is a 2-color discrete instance of the family.
    pub fn family_params(&self) -> Option<EquationParams> {
        match *self {
            PublishedEquation::BeutelspacherBrestovansky { total_vars } => {
                EquationParams::new(total_vars.checked_sub(1)?, 0, 1).ok()
            }
            PublishedEquation::BurrLoo { c } => EquationParams::new(2, c, 1).ok(),
            PublishedEquation::Schaal { total_vars, c } => {
                EquationParams::new(total_vars.checked_sub(1)?, c, 1).ok()
            }
            PublishedEquation::SchaalVestal { m_left } => EquationParams::new(m_left, 0, 2).ok(),
            PublishedEquation::Schur { colors: 2 } => EquationParams::new(2, 0, 1).ok(),
            PublishedEquation::Schur { .. } | PublishedEquation::VestalContinuous { .. } => None,
        }
    }
}

const SCHUR: [u64; 4] = [2, 5, 14, 45];

/// Look up a published value. Errors outside each result's hypotheses.
pub fn registry_lookup(eq: PublishedEquation) -> Result<PublishedValue> {
    use PublishedEquation::*;
    let finite = |v: i128, what| to_u64(v, what).map(|v| PublishedValue::Discrete(RadoValue::Finite(v)));
    match eq {
        BeutelspacherBrestovansky { total_vars } => {
            if total_vars < 3 {
                return domain("Beutelspacher-Brestovansky needs at least 3 variables");
            }
            let k = total_vars as i128;
            finite(k * k - k - 1, "m^2 - m - 1")
        }
        BurrLoo { c } => {
            let c = c as i128;
            if c >= 0 {
                finite(4 * c + 5, "4c + 5")
            } else {
                let abs = -c;
                finite(abs - ceil_div(abs - 5, 5), "|c| - ceil((|c|-5)/5)")
            }
        }
        Schaal { total_vars, c } => {
            if total_vars < 3 || c < 0 {
                return domain("Schaal's formula needs at least 3 variables and c >= 0");
            }
            let (k, c) = (total_vars as i128, c as i128);
            if k % 2 == 0 && c % 2 != 0 {
                return Ok(PublishedValue::Discrete(RadoValue::Infinite(
                    Obstruction::ParityObstruction,
                )));
            }
            finite(k * k - k - 1 + (k + 1) * c, "m^2 - m - 1 + (m+1)c")
        }
        SchaalVestal { m_left } => match m_left {
            0 => domain("Schaal-Vestal needs at least one left-hand term"),
            1 => Ok(PublishedValue::Discrete(RadoValue::Infinite(
                Obstruction::Published,
            ))),
            2 => finite(1, "Schaal-Vestal"),
            3 => finite(4, "Schaal-Vestal"),
            4 => finite(5, "Schaal-Vestal"),
            m => {
                let m = m as i128;
                finite(ceil_div(m * ceil_div(m, 2), 2), "ceil((m/2) ceil(m/2))")
            }
        },
        VestalContinuous { m, a } => {
            if a < 2 || (m as u64) < (a as u64) * (a as u64 - 1) {
                return domain("Vestal's continuous result needs a >= 2 and m >= a(a-1)");
            }
            let m = BigInt::from(m);
            let a = BigInt::from(a);
            Ok(PublishedValue::Continuous(ContinuousValue::Finite(
                BigRational::new(&m * &m, &a * &a),
            )))
        }
        Schur { colors } => match colors {
            1..=4 => Ok(PublishedValue::Discrete(RadoValue::Finite(
                SCHUR[colors as usize - 1],
            ))),
            _ => domain(format!("Schur number S({colors}) is not known")),
        },
    }
}

/// Evaluate the family at `a = 2` for any `c >= 0`, routing `c = 0` through
/// the Schaal-Vestal entry and `m = 1` through the linear case.
pub fn evaluate(params: EquationParams) -> Result<RadoValue> {
    let EquationParams { m, c, a } = params;
    if m == 1 {
        return rado_linear(c, a);
    }
    if a != 2 {
        return domain(format!(
            "closed form known only for a = 2 when m >= 2 (got a={a}); lower bound is {}",
            lemma1_lower_bound(m, c.max(1), a).map_or_else(|e| e.to_string(), |v| v.to_string())
        ));
    }
    if c == 0 {
        return registry_lookup(PublishedEquation::SchaalVestal { m_left: m })?
            .discrete()
            .ok_or_else(|| RadoError::Domain("registry returned a continuous value".into()));
    }
    rado_main_formula(m, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn main_formula_examples() {
        assert_eq!(rado_main_formula(4, 2).unwrap(), RadoValue::Finite(7));
        assert_eq!(
            rado_main_formula(2, 1).unwrap(),
            RadoValue::Infinite(Obstruction::ParityObstruction)
        );
        assert_eq!(rado_main_formula(5, 1).unwrap(), RadoValue::Finite(8));
        assert_eq!(rado_main_formula(2, 6).unwrap(), RadoValue::Finite(7));
        assert_eq!(rado_main_formula(9, 2).unwrap(), RadoValue::Finite(28));
    }

    #[test]
    fn main_formula_domain() {
        assert!(matches!(rado_main_formula(1, 3), Err(RadoError::Domain(_))));
        assert!(matches!(rado_main_formula(4, 0), Err(RadoError::Domain(_))));
        assert!(matches!(rado_main_formula(4, -2), Err(RadoError::Domain(_))));
    }

    #[test]
    fn overflow_is_typed() {
        assert!(matches!(
            rado_main_formula(u32::MAX, i64::MAX),
            Err(RadoError::Overflow(_))
        ));
        assert!(matches!(
            lemma1_lower_bound(u32::MAX, i64::MAX, 1),
            Err(RadoError::Overflow(_))
        ));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lemma1_lower_bound(4, 2, 2).unwrap(), 7);
        assert_eq!(lemma1_lower_bound(2, 2, 1).unwrap(), 10);
        assert_eq!(lemma1_lower_bound(5, 3, 3).unwrap(), 6);
    }

    #[test]
    fn linear_examples() {
        assert_eq!(rado_linear(4, 3).unwrap(), RadoValue::Finite(2));
        assert_eq!(
            rado_linear(3, 3).unwrap(),
            RadoValue::Infinite(Obstruction::DivisibilityObstruction)
        );
        assert_eq!(
            rado_linear(5, 1).unwrap(),
            RadoValue::Infinite(Obstruction::CoefficientOne)
        );
        assert!(rado_linear(0, 3).is_err());
    }

    #[test]
    fn continuous_examples() {
        assert_eq!(
            continuous_linear(&rat(3, 1), &rat(2, 1)).unwrap(),
            ContinuousValue::Finite(rat(3, 1))
        );
        assert_eq!(
            continuous_linear(&rat(5, 1), &rat(3, 1)).unwrap(),
            ContinuousValue::Finite(rat(5, 2))
        );
        assert_eq!(
            continuous_linear(&rat(1, 1), &rat(1, 1)).unwrap(),
            ContinuousValue::Infinite
        );
        assert!(continuous_linear(&rat(0, 1), &rat(2, 1)).is_err());
        assert!(continuous_linear(&rat(1, 1), &rat(1, 2)).is_err());
    }

    #[test]
    fn registry_examples() {
        let d = |eq| registry_lookup(eq).unwrap().discrete().unwrap();
        assert_eq!(
            d(PublishedEquation::BeutelspacherBrestovansky { total_vars: 3 }),
            RadoValue::Finite(5)
        );
        assert_eq!(d(PublishedEquation::BurrLoo { c: 0 }), RadoValue::Finite(5));
        assert!(d(PublishedEquation::SchaalVestal { m_left: 1 }).is_infinite());
        assert_eq!(d(PublishedEquation::SchaalVestal { m_left: 4 }), RadoValue::Finite(5));
        assert_eq!(d(PublishedEquation::SchaalVestal { m_left: 5 }), RadoValue::Finite(8));
        assert_eq!(d(PublishedEquation::Schur { colors: 4 }), RadoValue::Finite(45));
        assert_eq!(
            d(PublishedEquation::Schaal { total_vars: 3, c: 1 }),
            d(PublishedEquation::BurrLoo { c: 1 })
        );
        assert_eq!(
            registry_lookup(PublishedEquation::VestalContinuous { m: 6, a: 3 }).unwrap(),
            PublishedValue::Continuous(ContinuousValue::Finite(rat(4, 1)))
        );
        assert!(registry_lookup(PublishedEquation::Schur { colors: 5 }).is_err());
        assert!(registry_lookup(PublishedEquation::VestalContinuous { m: 5, a: 3 }).is_err());
        assert!(registry_lookup(PublishedEquation::BeutelspacherBrestovansky { total_vars: 2 }).is_err());
    }

    #[test]
    fn schaal_vestal_agrees_with_main_formula_shape_for_large_m() {
        // At c = 0 the main closed form has the same shape as Schaal-Vestal
        // from m = 5 on; only the exceptional small m differ.
        for m in 5..40u32 {
            let sv = registry_lookup(PublishedEquation::SchaalVestal { m_left: m })
                .unwrap()
                .discrete()
                .unwrap();
            let (mm, inner) = (m as i128, ceil_div(m as i128, 2));
            assert_eq!(sv, RadoValue::Finite(ceil_div(mm * inner, 2) as u64));
        }
    }

    #[test]
    fn evaluate_routes() {
        let p = |m, c, a| EquationParams::new(m, c, a).unwrap();
        assert_eq!(evaluate(p(1, 4, 3)).unwrap(), RadoValue::Finite(2));
        assert_eq!(evaluate(p(4, 0, 2)).unwrap(), RadoValue::Finite(5));
        assert_eq!(evaluate(p(4, 2, 2)).unwrap(), RadoValue::Finite(7));
        assert!(evaluate(p(4, 2, 3)).is_err());
    }

    #[test]
    fn ceil_div_signs() {
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(8, 2), 4);
        assert_eq!(ceil_div(0, 3), 0);
        assert_eq!(ceil_div(-4, 5), 0);
        assert_eq!(ceil_div(-5, 5), -1);
        assert_eq!(ceil_div(-6, 5), -1);
    }
}
