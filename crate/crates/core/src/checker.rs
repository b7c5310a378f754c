//! Monochromatic-solution detection for `x1 + ... + xm + c = a*x0`.
//!
//! For a color class `S`, row `j` of a [`SumTable`] holds every sum of `j`
//! elements of `S` (repetition allowed). A solution with right-hand value
//! `x0 in S` exists iff bit `a*x0 - c` is set in row `m`. Rows are bit sets
//! updated with word-wide shift-or, so a class costs `O(m * |S| * W / 64)`
//! where `W` is the largest reachable target.

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::coloring::{Color, Coloring, PartialColoring};
use crate::error::{domain, RadoError, Result};
use crate::formula::EquationParams;
use crate::par;

/// A monochromatic solution: sorted left-hand values, right-hand value, color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub xs: Vec<u64>,
    pub x0: u64,
    pub color: Color,
}

impl Witness {
    fn key(&self) -> (u64, &[u64]) {
        (self.x0, &self.xs)
    }

    /// `[x1, ..., xm, x0]`.
    pub fn tuple(&self) -> Vec<u64> {
        let mut t = self.xs.clone();
        t.push(self.x0);
        t
    }
}

/// `sum(xs) + c == a * x0`.
pub fn is_solution(xs: &[u64], x0: u64, params: &EquationParams) -> Result<bool> {
    if xs.len() != params.lhs_len() {
        return Err(RadoError::Arity {
            expected: params.lhs_len(),
            got: xs.len(),
        });
    }
    if x0 == 0 || xs.contains(&0) {
        return domain("solution entries must be positive integers");
    }
    let lhs: i128 = xs.iter().map(|&x| x as i128).sum::<i128>() + params.c as i128;
    Ok(lhs == params.a as i128 * x0 as i128)
}

/// Layered reachability over one color class.
#[derive(Clone, Debug)]
pub(crate) struct SumTable {
    rows: Vec<BitRow>,
}

impl SumTable {
    /// Rows `0..=m`, each covering sums `0..=max_sum`.
    pub(crate) fn new(m: usize, max_sum: usize) -> Self {
        let mut rows = vec![BitRow::zeros(max_sum + 1); m + 1];
        rows[0].set(0);
        SumTable { rows }
    }

    pub(crate) fn depth(&self) -> usize {
        self.rows.len() - 1
    }

    pub(crate) fn width(&self) -> usize {
        self.rows[0].len()
    }

    /// Admit `x` as a summand. Ascending `j` lets row `j` reuse the updated
    /// row `j-1`, which accounts for repeated copies of `x`.
    pub(crate) fn add(&mut self, x: u64) {
        let x = x as usize;
        for j in 1..self.rows.len() {
            let (lo, hi) = self.rows.split_at_mut(j);
            hi[0].or_shifted(&lo[j - 1], x);
        }
    }

    #[inline]
    pub(crate) fn reach(&self, j: usize, sum: i128) -> bool {
        sum >= 0 && (sum as u128) < self.width() as u128 && self.rows[j].get(sum as usize)
    }

    pub(crate) fn row(&self, j: usize) -> &BitRow {
        &self.rows[j]
    }

    /// Lexicographically least sorted `j`-tuple from `values` summing to `sum`.
    pub(crate) fn reconstruct(&self, values: &[u64], j: usize, sum: i128) -> Option<Vec<u64>> {
        if !self.reach(j, sum) {
            return None;
        }
        let mut out = Vec::with_capacity(j);
        let mut rest = sum;
        for left in (0..j).rev() {
            let pick = values
                .iter()
                .copied()
                .find(|&v| self.reach(left, rest - v as i128))?;
            out.push(pick);
            rest -= pick as i128;
        }
        debug_assert!(out.windows(2).all(|w| w[0] <= w[1]));
        Some(out)
    }
}

/// Largest target `a*x0 - c` any solution inside `values` could need.
fn table_width(values: &[u64], params: &EquationParams) -> Option<usize> {
    let top = *values.last()? as i128;
    let target_max = params.a as i128 * top - params.c as i128;
    let sum_max = params.m as i128 * top;
    let w = target_max.min(sum_max);
    (w >= 0).then_some(w as usize)
}

fn build_table(values: &[u64], params: &EquationParams) -> Option<SumTable> {
    let width = table_width(values, params)?;
    let mut table = SumTable::new(params.lhs_len(), width);
    for &v in values {
        table.add(v);
    }
    Some(table)
}

/// Canonical solution inside one sorted class: least `x0`, then least `xs`.
fn class_witness(values: &[u64], params: &EquationParams) -> Option<(u64, Vec<u64>)> {
    let table = build_table(values, params)?;
    let m = params.lhs_len();
    values.iter().find_map(|&x0| {
        let target = params.a as i128 * x0 as i128 - params.c as i128;
        table.reconstruct(values, m, target).map(|xs| (x0, xs))
    })
}

fn best_of(candidates: impl IntoIterator<Item = Option<Witness>>) -> Option<Witness> {
    candidates
        .into_iter()
        .flatten()
        .min_by(|a, b| a.key().cmp(&b.key()))
}

fn classes_witness(red: &[u64], blue: &[u64], params: &EquationParams) -> Option<Witness> {
    best_of([(red, Color::Red), (blue, Color::Blue)].map(|(vals, color)| {
        class_witness(vals, params).map(|(x0, xs)| Witness { xs, x0, color })
    }))
}

/// The canonical monochromatic solution of `coloring`, if any.
pub fn find_mono_solution(coloring: &Coloring, params: &EquationParams) -> Option<Witness> {
    classes_witness(
        &coloring.class(Color::Red),
        &coloring.class(Color::Blue),
        params,
    )
}

/// Same as [`find_mono_solution`] over the assigned part of a partial coloring.
pub fn find_mono_solution_partial(
    partial: &PartialColoring,
    params: &EquationParams,
) -> Option<Witness> {
    classes_witness(
        &partial.assigned(Color::Red),
        &partial.assigned(Color::Blue),
        params,
    )
}

/// Check only solutions that use `last`, the most recent assignment.
///
/// If the assignments made before `last` were solution-free, every
/// monochromatic solution among assigned values contains `last`, so this
/// agrees with [`find_mono_solution_partial`].
pub fn find_mono_solution_incremental(
    partial: &PartialColoring,
    params: &EquationParams,
    last: u64,
) -> Option<Witness> {
    let color = partial.get(last)?;
    let values = partial.assigned(color);
    let table = build_table(&values, params)?;
    let m = params.lhs_len();
    let (a, c) = (params.a as i128, params.c as i128);
    values.iter().find_map(|&x0| {
        let target = a * x0 as i128 - c;
        let xs = if x0 == last {
            table.reconstruct(&values, m, target)
        } else {
            // `last` among the left-hand values: insert it into the least
            // (m-1)-tuple for the remainder. Insertion preserves lex order.
            table
                .reconstruct(&values, m - 1, target - last as i128)
                .map(|mut xs| {
                    let at = xs.partition_point(|&v| v < last);
                    xs.insert(at, last);
                    xs
                })
        };
        xs.map(|xs| Witness { xs, x0, color })
    })
}

/// Check many colorings, in parallel when `threads > 1`. Output order
/// matches input order.
pub fn find_mono_solution_batch(
    colorings: &[Coloring],
    params: &EquationParams,
    threads: usize,
) -> Vec<Option<Witness>> {
    par::map_ordered(colorings, threads, |x| find_mono_solution(x, params))
}

/// Verify a witness against a coloring: arithmetic and colors.
pub fn witness_holds(w: &Witness, coloring: &Coloring, params: &EquationParams) -> bool {
    is_solution(&w.xs, w.x0, params).unwrap_or(false)
        && w.tuple().iter().all(|&v| coloring.get(v) == Some(w.color))
}
