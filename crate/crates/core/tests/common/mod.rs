//! Slow, obviously-correct reference implementations.
#![allow(dead_code)]

use rado_lab::{Color, Coloring, EquationParams, Witness};

/// Sorted multisets of size `k` from `values` (sorted), in lex order.
fn multisets(values: &[u64], k: usize, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>, from: usize) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..values.len() {
        cur.push(values[i]);
        multisets(values, k, out, cur, i);
        cur.pop();
    }
}

fn class_witness(values: &[u64], p: &EquationParams, color: Color) -> Option<Witness> {
    let m = p.m as usize;
    let mut all = Vec::new();
    multisets(values, m, &mut all, &mut Vec::new(), 0);
    for &x0 in values {
        for xs in &all {
            let lhs: i128 = xs.iter().map(|&v| v as i128).sum::<i128>() + p.c as i128;
            if lhs == p.a as i128 * x0 as i128 {
                return Some(Witness { xs: xs.clone(), x0, color });
            }
        }
    }
    None
}

/// Least `x0`, then lex-least sorted left side, over both colors.
pub fn naive_witness(coloring: &Coloring, p: &EquationParams) -> Option<Witness> {
    let red = coloring.class(Color::Red);
    let blue = coloring.class(Color::Blue);
    let a = class_witness(&red, p, Color::Red);
    let b = class_witness(&blue, p, Color::Blue);
    match (a, b) {
        (Some(a), Some(b)) => Some(if (b.x0, &b.xs) < (a.x0, &a.xs) { b } else { a }),
        (a, b) => a.or(b),
    }
}

pub fn all_colorings(n: u64) -> impl Iterator<Item = Coloring> {
    (0u64..1 << n).map(move |mask| {
        Coloring::from_fn(n, |v| if mask >> (v - 1) & 1 == 1 { Color::Blue } else { Color::Red })
    })
}

pub fn naive_valid_exists(n: u64, p: &EquationParams) -> bool {
    all_colorings(n).any(|x| naive_witness(&x, p).is_none())
}

/// Least `n <= cap` with no valid coloring of `[1, n]`.
pub fn naive_rado(p: &EquationParams, cap: u64) -> Option<u64> {
    (1..=cap).find(|&n| !naive_valid_exists(n, p))
}

pub fn params(m: u32, c: i64, a: u32) -> EquationParams {
    EquationParams::new(m, c, a).unwrap()
}
