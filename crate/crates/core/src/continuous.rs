//! Exact-rational checks for the one-variable equation `x1 + c = a*x0`.
//!
//! Three interval families are covered:
//!
//! * the geometric intervals accumulating at `c/(a-1)` from below, whose
//!   alternating coloring avoids solutions on `[1, c/(a-1))`;
//! * the translation blocks `[kc+1, (k+1)c+1)` for `a = 1`;
//! * the integer blocks above `t = ceil(c/(a-1))` used when `(a-1)` does not
//!   divide `c`.
//!
//! Nothing here touches floating point. Endpoints grow like `a^k`, so all
//! arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use crate::error::{domain, Result};

pub const DEFAULT_K_MAX: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub closed_lo: bool,
    pub closed_hi: bool,
}

impl RationalInterval {
    /// `[lo, hi)`. `lo == hi` gives the empty interval.
    pub fn half_open(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return domain(format!("interval endpoints out of order: [{lo}, {hi})"));
        }
        Ok(RationalInterval {
            lo,
            hi,
            closed_lo: true,
            closed_hi: false,
        })
    }

    /// `[lo, hi]`.
    pub fn closed(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return domain(format!("interval endpoints out of order: [{lo}, {hi}]"));
        }
        Ok(RationalInterval {
            lo,
            hi,
            closed_lo: true,
            closed_hi: true,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && !(self.closed_lo && self.closed_hi)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let above = if self.closed_lo { *x >= self.lo } else { *x > self.lo };
        let below = if self.closed_hi { *x <= self.hi } else { *x < self.hi };
        above && below
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.closed_lo { '[' } else { '(' };
        let close = if self.closed_hi { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

fn one() -> BigRational {
    BigRational::one()
}

fn check_geometric(c: &BigRational, a: &BigRational) -> Result<()> {
    if !c.is_positive() {
        return domain(format!("need c > 0, got {c}"));
    }
    if *a <= one() {
        return domain(format!("need a > 1, got {a}"));
    }
    Ok(())
}

/// `c/(a-1)`, where the geometric intervals accumulate.
pub fn accumulation_point(c: &BigRational, a: &BigRational) -> BigRational {
    c / (a - one())
}

/// Left endpoint of the k-th geometric interval:
/// `(c(a^k - 1) + a - 1) / (a^k (a - 1))`.
pub fn lemma3_left(k: u32, c: &BigRational, a: &BigRational) -> BigRational {
    let ak: BigRational = Pow::pow(a, k);
    let am1 = a - one();
    (c * (&ak - one()) + &am1) / (ak * am1)
}

/// The k-th interval of the alternating coloring below `c/(a-1)`.
///
/// Requires `c >= a - 1`; below that the colored range `[1, c/(a-1))` is
/// empty and the endpoint formula runs backwards.
pub fn lemma3_interval(k: u32, c: &BigRational, a: &BigRational) -> Result<RationalInterval> {
    check_geometric(c, a)?;
    if *c < a - one() {
        return domain(format!(
            "c = {c} < a - 1 = {}: the range [1, c/(a-1)) is empty",
            a - one()
        ));
    }
    RationalInterval::half_open(lemma3_left(k, c, a), lemma3_left(k + 1, c, a))
}

/// `x0 = (x1 + c) / a`.
pub fn map_x1_to_x0(x1: &BigRational, c: &BigRational, a: &BigRational) -> Result<BigRational> {
    if !a.is_positive() {
        return domain(format!("need a > 0, got {a}"));
    }
    Ok((x1 + c) / a)
}

/// `[kc + 1, (k+1)c + 1)`, the coloring blocks for `a = 1`.
pub fn lemma4_block(k: u32, c: &BigRational) -> Result<RationalInterval> {
    if !c.is_positive() {
        return domain(format!("need c > 0, got {c}"));
    }
    let k = BigRational::from_integer(k.into());
    RationalInterval::half_open(&k * c + one(), (k + one()) * c + one())
}

/// `t = ceil(c/(a-1))`, the first integer strictly above `c/(a-1)` when
/// `(a-1)` does not divide `c`.
pub fn discrete_threshold(c: i64, a: u32) -> Result<i64> {
    check_non_divisible(c, a)?;
    let step = a as i64 - 1;
    Ok(Integer::div_ceil(&c, &step))
}

fn check_non_divisible(c: i64, a: u32) -> Result<()> {
    if c < 1 || a < 2 {
        return domain(format!("need c >= 1 and a >= 2, got c={c}, a={a}"));
    }
    if c % (a as i64 - 1) == 0 {
        return domain(format!(
            "(a-1) = {} divides c = {c}: the Rado number is finite, no infinite coloring exists",
            a - 1
        ));
    }
    Ok(())
}

/// Integer block `k` above the threshold:
/// `[a^k t - ((a^k - 1)/(a-1)) c, a^(k+1) t - ((a^(k+1) - 1)/(a-1)) c - 1]`.
pub fn discrete_block(k: u32, c: i64, a: u32) -> Result<(BigInt, BigInt)> {
    let t = BigInt::from(discrete_threshold(c, a)?);
    let start = |k: u32| -> BigInt {
        let ak: BigInt = Pow::pow(BigInt::from(a), k);
        // (a^k - 1)/(a - 1) is an exact integer (geometric sum).
        let geo = (&ak - 1u32).div_floor(&BigInt::from(a - 1));
        ak * &t - geo * c
    };
    Ok((start(k), start(k + 1) - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub k: u32,
    pub failures: Vec<String>,
}

impl StepCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-block results of an exact verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<StepCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(StepCheck::passed)
    }

    pub fn failed_steps(&self) -> impl Iterator<Item = &StepCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// For every `k <= k_max`: the image of interval k under `x -> (x+c)/a` is
/// interval k+1 endpoint for endpoint, consecutive intervals abut, every
/// interval lies in `[1, c/(a-1))`, and the closed form
/// `left(k) = c/(a-1) - (c - (a-1)) / (a^k (a-1))` holds.
pub fn verify_interval_chain(
    c: &BigRational,
    a: &BigRational,
    k_max: u32,
) -> Result<VerificationReport> {
    check_geometric(c, a)?;
    if k_max < 1 {
        return domain("k_max must be at least 1");
    }
    let limit = accumulation_point(c, a);
    let am1 = a - one();
    let mut checks = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let mut failures = Vec::new();
        let cur = lemma3_interval(k, c, a)?;
        let next = lemma3_interval(k + 1, c, a)?;
        let img_lo = map_x1_to_x0(&cur.lo, c, a)?;
        let img_hi = map_x1_to_x0(&cur.hi, c, a)?;
        if img_lo != next.lo {
            failures.push(format!("image of left endpoint {img_lo} != {}", next.lo));
        }
        if img_hi != next.hi {
            failures.push(format!("image of right endpoint {img_hi} != {}", next.hi));
        }
        if cur.hi != next.lo {
            failures.push(format!("gap between {} and {}", cur.hi, next.lo));
        }
        if k == 0 && cur.lo != one() {
            failures.push(format!("first interval starts at {} instead of 1", cur.lo));
        }
        if cur.lo < one() || cur.hi > limit {
            failures.push(format!("{cur} not inside [1, {limit})"));
        }
        let ak: BigRational = Pow::pow(a, k);
        let closed_form = &limit - (c - &am1) / (ak * &am1);
        if closed_form != cur.lo {
            failures.push(format!("left({k}) = {} but closed form gives {closed_form}", cur.lo));
        }
        checks.push(StepCheck { k, failures });
    }
    Ok(VerificationReport {
        subject: format!("geometric intervals c={c} a={a}"),
        checks,
    })
}

/// For every `k <= k_max`: `[kc+1, (k+1)c+1) + c` is exactly block `k+1`.
pub fn verify_lemma4_chain(c: &BigRational, k_max: u32) -> Result<VerificationReport> {
    if !c.is_positive() {
        return domain(format!("need c > 0, got {c}"));
    }
    let mut checks = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let mut failures = Vec::new();
        let cur = lemma4_block(k, c)?;
        let next = lemma4_block(k + 1, c)?;
        let one = BigRational::one();
        let (lo, hi) = (
            map_x1_to_x0(&cur.lo, c, &one)?,
            map_x1_to_x0(&cur.hi, c, &one)?,
        );
        if lo != next.lo || hi != next.hi {
            failures.push(format!("image [{lo}, {hi}) != {next}"));
        }
        if cur.hi != next.lo {
            failures.push(format!("gap between {} and {}", cur.hi, next.lo));
        }
        checks.push(StepCheck { k, failures });
    }
    Ok(VerificationReport {
        subject: format!("translation blocks c={c}"),
        checks,
    })
}

/// For every `1 <= k <= k_max`: if `x0` lies in integer block `k-1`, then
/// `x1 = a*x0 - c` lies in block `k`. Also checks that blocks are non-empty,
/// abut, and start strictly above `c/(a-1)`.
pub fn verify_discrete_blocks(c: i64, a: u32, k_max: u32) -> Result<VerificationReport> {
    check_non_divisible(c, a)?;
    let t = discrete_threshold(c, a)?;
    let mut checks = Vec::with_capacity(k_max as usize);
    // t > c/(a-1) strictly.
    let threshold_ok = BigInt::from(t) * BigInt::from(a - 1) > BigInt::from(c);
    for k in 1..=k_max {
        let mut failures = Vec::new();
        let (prev_lo, prev_hi) = discrete_block(k - 1, c, a)?;
        let (lo, hi) = discrete_block(k, c, a)?;
        let image = |x: &BigInt| x * a - c;
        let (img_lo, img_hi) = (image(&prev_lo), image(&prev_hi));
        if img_lo < lo || img_lo > hi {
            failures.push(format!("image of {prev_lo} is {img_lo}, outside [{lo}, {hi}]"));
        }
        if img_hi < lo || img_hi > hi {
            failures.push(format!("image of {prev_hi} is {img_hi}, outside [{lo}, {hi}]"));
        }
        if &prev_hi + 1 != lo {
            failures.push(format!("blocks {} and {k} do not abut", k - 1));
        }
        if prev_lo > prev_hi {
            failures.push(format!("block {} is empty", k - 1));
        }
        if k == 1 && (prev_lo != BigInt::from(t) || !threshold_ok) {
            failures.push(format!("block 0 starts at {prev_lo}, expected t = {t} > c/(a-1)"));
        }
        checks.push(StepCheck { k, failures });
    }
    Ok(VerificationReport {
        subject: format!("integer blocks c={c} a={a} t={t}"),
        checks,
    })
}

/// `x1` and `(x1 + c)/a` lie on the same side of `c/(a-1)`.
pub fn side_preserved(x1: &BigRational, c: &BigRational, a: &BigRational) -> Result<bool> {
    check_geometric(c, a)?;
    let limit = accumulation_point(c, a);
    let x0 = map_x1_to_x0(x1, c, a)?;
    Ok(x1.cmp(&limit) == x0.cmp(&limit))
}

/// Index of the geometric interval containing `x`, for `1 <= x < c/(a-1)`.
pub(crate) fn lemma3_index(x: &BigRational, c: &BigRational, a: &BigRational) -> Result<u32> {
    let limit = accumulation_point(c, a);
    if *x < one() || *x >= limit {
        return domain(format!("{x} is outside [1, {limit})"));
    }
    let mut k = 0;
    loop {
        if lemma3_left(k + 1, c, a) > *x {
            return Ok(k);
        }
        k += 1;
    }
}

/// Index of the integer block containing `v >= t`.
pub(crate) fn discrete_index(v: i64, c: i64, a: u32) -> Result<u32> {
    let t = discrete_threshold(c, a)?;
    if v < t {
        return domain(format!("{v} is below the threshold t = {t}"));
    }
    let v = BigInt::from(v);
    let mut k = 0;
    loop {
        let (_, hi) = discrete_block(k, c, a)?;
        if v <= hi {
            return Ok(k);
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn interval_examples() {
        let i0 = lemma3_interval(0, &r(3, 1), &r(2, 1)).unwrap();
        assert_eq!((i0.lo.clone(), i0.hi.clone()), (r(1, 1), r(2, 1)));
        assert!(i0.closed_lo && !i0.closed_hi);
        let i1 = lemma3_interval(1, &r(3, 1), &r(2, 1)).unwrap();
        assert_eq!((i1.lo, i1.hi), (r(2, 1), r(5, 2)));
        // left endpoints approach c/(a-1) = 3
        let far = lemma3_left(60, &r(3, 1), &r(2, 1));
        assert!(far < r(3, 1));
        assert_eq!(r(3, 1) - far, r(1, 1 << 59));
        assert_eq!(accumulation_point(&r(3, 1), &r(2, 1)), r(3, 1));
    }

    #[test]
    fn interval_needs_room() {
        assert!(lemma3_interval(0, &r(1, 2), &r(3, 1)).is_err());
        assert!(lemma3_interval(0, &r(1, 1), &r(1, 1)).is_err());
        let empty = lemma3_interval(4, &r(1, 1), &r(2, 1)).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn map_examples() {
        assert_eq!(map_x1_to_x0(&r(1, 1), &r(3, 1), &r(2, 1)).unwrap(), r(2, 1));
        assert_eq!(map_x1_to_x0(&r(2, 1), &r(3, 1), &r(2, 1)).unwrap(), r(5, 2));
        assert_eq!(map_x1_to_x0(&r(5, 1), &r(5, 1), &r(1, 1)).unwrap(), r(10, 1));
    }

    #[test]
    fn interval_chain_examples() {
        for (c, a, k) in [(r(3, 1), r(2, 1), 50), (r(5, 1), r(3, 1), 50), (r(7, 2), r(3, 2), 30)] {
            let rep = verify_interval_chain(&c, &a, k).unwrap();
            assert!(rep.passed(), "{:?}", rep.failed_steps().collect::<Vec<_>>());
            assert_eq!(rep.checks.len(), k as usize + 1);
        }
    }

    #[test]
    fn lemma4_examples() {
        for (c, k) in [(r(2, 1), 100), (r(5, 3), 100), (r(1, 1), 10)] {
            assert!(verify_lemma4_chain(&c, k).unwrap().passed());
        }
        let b = lemma4_block(3, &r(1, 1)).unwrap();
        assert_eq!((b.lo, b.hi), (r(4, 1), r(5, 1)));
    }

    #[test]
    fn discrete_block_examples() {
        let blocks: Vec<_> = (0..3).map(|k| discrete_block(k, 5, 3).unwrap()).collect();
        let want = [(3, 3), (4, 6), (7, 15)];
        for ((lo, hi), (wl, wh)) in blocks.iter().zip(want) {
            assert_eq!((lo.clone(), hi.clone()), (BigInt::from(wl), BigInt::from(wh)));
        }
        assert!(verify_discrete_blocks(5, 3, 8).unwrap().passed());
        assert!(verify_discrete_blocks(1, 3, 8).unwrap().passed());
        assert_eq!(discrete_threshold(1, 3).unwrap(), 1);
        assert!(verify_discrete_blocks(4, 3, 8).is_err());
    }

    #[test]
    fn index_lookup() {
        assert_eq!(lemma3_index(&r(1, 1), &r(5, 1), &r(3, 1)).unwrap(), 0);
        assert_eq!(lemma3_index(&r(2, 1), &r(5, 1), &r(3, 1)).unwrap(), 1);
        assert!(lemma3_index(&r(3, 1), &r(5, 1), &r(3, 1)).is_err());
        assert_eq!(discrete_index(3, 5, 3).unwrap(), 0);
        assert_eq!(discrete_index(6, 5, 3).unwrap(), 1);
        assert_eq!(discrete_index(15, 5, 3).unwrap(), 2);
        assert_eq!(discrete_index(16, 5, 3).unwrap(), 3);
    }

    #[test]
    fn broken_chain_is_reported() {
        // A report with a failing step must not pass.
        let rep = VerificationReport {
            subject: "x".into(),
            checks: vec![StepCheck { k: 0, failures: vec!["bad".into()] }],
        };
        assert!(!rep.passed());
        assert_eq!(rep.failed_steps().count(), 1);
    }
}
