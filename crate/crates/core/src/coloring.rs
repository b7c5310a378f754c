//! 2-colorings of `[1, n]` and the extremal colorings used as lower-bound
//! certificates.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::continuous::{discrete_index, discrete_threshold, lemma3_index};
use crate::error::{domain, RadoError, Result};
use crate::formula::lemma1_lower_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn opposite(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// A total 2-coloring of `[1, n]`, stored one bit per integer (set = Blue).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: u64,
    blue: Vec<u64>,
}

/// On-disk form: `{"n": .., "red": [..], "blue": [..]}` with sorted lists
/// partitioning `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub n: u64,
    pub red: Vec<u64>,
    pub blue: Vec<u64>,
}

impl Coloring {
    pub fn uniform(n: u64, color: Color) -> Self {
        Self::from_fn(n, |_| color)
    }

    pub fn from_fn(n: u64, mut f: impl FnMut(u64) -> Color) -> Self {
        let mut blue = vec![0u64; (n as usize).div_ceil(64)];
        for v in 1..=n {
            if f(v) == Color::Blue {
                let i = (v - 1) as usize;
                blue[i / 64] |= 1 << (i % 64);
            }
        }
        Coloring { n, blue }
    }

    /// Build from explicit color classes, which must partition `[1, n]`.
    pub fn from_classes(n: u64, red: &[u64], blue: &[u64]) -> Result<Self> {
        let mut seen = vec![None; n as usize];
        for (class, color) in [(red, Color::Red), (blue, Color::Blue)] {
            for &v in class {
                if v == 0 || v > n {
                    return Err(RadoError::InvalidColoring(format!(
                        "{v} is outside [1, {n}]"
                    )));
                }
                if seen[(v - 1) as usize].replace(color).is_some() {
                    return Err(RadoError::InvalidColoring(format!("{v} is colored twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(Option::is_none) {
            return Err(RadoError::InvalidColoring(format!("{} has no color", i + 1)));
        }
        Ok(Self::from_fn(n, |v| seen[(v - 1) as usize].unwrap()))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, v: u64) -> Option<Color> {
        if v == 0 || v > self.n {
            return None;
        }
        let i = (v - 1) as usize;
        Some(if self.blue[i / 64] >> (i % 64) & 1 == 1 {
            Color::Blue
        } else {
            Color::Red
        })
    }

    /// Color of `v`. Panics outside `[1, n]`.
    pub fn color(&self, v: u64) -> Color {
        self.get(v)
            .unwrap_or_else(|| panic!("{v} is outside [1, {}]", self.n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Color)> + '_ {
        (1..=self.n).map(move |v| (v, self.color(v)))
    }

    /// Sorted members of one color class.
    pub fn class(&self, color: Color) -> Vec<u64> {
        self.iter()
            .filter(|&(_, c)| c == color)
            .map(|(v, _)| v)
            .collect()
    }

    /// This coloring with `n + 1` appended in `color`.
    pub fn extended(&self, color: Color) -> Coloring {
        let n = self.n + 1;
        Coloring::from_fn(n, |v| if v == n { color } else { self.color(v) })
    }

    /// Restriction to `[1, n]`.
    pub fn truncated(&self, n: u64) -> Coloring {
        let n = n.min(self.n);
        Coloring::from_fn(n, |v| self.color(v))
    }

    /// Colors swapped.
    pub fn swapped(&self) -> Coloring {
        Coloring::from_fn(self.n, |v| self.color(v).opposite())
    }

    /// `"RBBR..."`, position `i` holding the color of `i + 1`.
    pub fn to_compact(&self) -> String {
        self.iter().map(|(_, c)| c.letter()).collect()
    }

    pub fn from_compact(s: &str) -> Result<Self> {
        let s = s.trim();
        let colors = s
            .chars()
            .map(|ch| match ch {
                'R' | 'r' => Ok(Color::Red),
                'B' | 'b' => Ok(Color::Blue),
                other => Err(RadoError::Parse(format!(
                    "unexpected character {other:?} in compact coloring"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coloring::from_fn(colors.len() as u64, |v| colors[(v - 1) as usize]))
    }

    pub fn to_document(&self) -> ColoringDocument {
        ColoringDocument {
            n: self.n,
            red: self.class(Color::Red),
            blue: self.class(Color::Blue),
        }
    }

    pub fn from_document(doc: &ColoringDocument) -> Result<Self> {
        for list in [&doc.red, &doc.blue] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(RadoError::InvalidColoring(
                    "color lists must be strictly increasing".into(),
                ));
            }
        }
        Self::from_classes(doc.n, &doc.red, &doc.blue)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("coloring serializes")
    }

    /// Parse either a coloring document or a compact `"RBB..."` string
    /// (bare or JSON-quoted).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let doc: ColoringDocument =
                serde_json::from_str(trimmed).map_err(|e| RadoError::Parse(e.to_string()))?;
            return Self::from_document(&doc);
        }
        if trimmed.starts_with('"') {
            let s: String =
                serde_json::from_str(trimmed).map_err(|e| RadoError::Parse(e.to_string()))?;
            return Self::from_compact(&s);
        }
        Self::from_compact(trimmed)
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring({})", self.to_compact())
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ColoringDocument::deserialize(d)?;
        Coloring::from_document(&doc).map_err(serde::de::Error::custom)
    }
}

/// A coloring of `[1, n]` with unassigned cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    cells: Vec<Option<Color>>,
}

impl PartialColoring {
    pub fn new(n: u64) -> Self {
        PartialColoring {
            cells: vec![None; n as usize],
        }
    }

    pub fn n(&self) -> u64 {
        self.cells.len() as u64
    }

    pub fn get(&self, v: u64) -> Option<Color> {
        v.checked_sub(1)
            .and_then(|i| self.cells.get(i as usize).copied().flatten())
    }

    pub fn assign(&mut self, v: u64, color: Color) {
        self.cells[(v - 1) as usize] = Some(color);
    }

    pub fn unassign(&mut self, v: u64) {
        self.cells[(v - 1) as usize] = None;
    }

    pub fn is_assigned(&self, v: u64) -> bool {
        self.get(v).is_some()
    }

    /// Sorted values assigned `color`.
    pub fn assigned(&self, color: Color) -> Vec<u64> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Some(color))
            .map(|(i, _)| i as u64 + 1)
            .collect()
    }

    pub fn first_unassigned(&self) -> Option<u64> {
        self.cells.iter().position(Option::is_none).map(|i| i as u64 + 1)
    }

    pub fn complete(&self) -> Option<Coloring> {
        if self.cells.iter().any(Option::is_none) {
            return None;
        }
        Some(Coloring::from_fn(self.n(), |v| self.get(v).unwrap()))
    }
}

impl From<&Coloring> for PartialColoring {
    fn from(c: &Coloring) -> Self {
        PartialColoring {
            cells: c.iter().map(|(_, col)| Some(col)).collect(),
        }
    }
}

/// Two blocks: `[1, ceil((m+c)/a) - 1]` Red, then Blue up to `R - 1` where
/// `R` is [`lemma1_lower_bound`]. When `R = 1` the result is the empty coloring.
pub fn lemma1_coloring(m: u32, c: i64, a: u32) -> Result<Coloring> {
    let r = lemma1_lower_bound(m, c, a)?;
    let first_blue = (m as u64 + c as u64).div_ceil(a as u64);
    Ok(Coloring::from_fn(r - 1, |v| {
        if v < first_blue {
            Color::Red
        } else {
            Color::Blue
        }
    }))
}

/// Evens Red, odds Blue.
pub fn parity_coloring(n: u64) -> Coloring {
    Coloring::from_fn(n, |v| if v % 2 == 0 { Color::Red } else { Color::Blue })
}

/// A solution-free coloring of `[1, n]` for `x1 + c = a*x0` when `(a-1)`
/// does not divide `c`.
///
/// Integers below `c/(a-1)` are colored by the parity of the geometric
/// interval containing them; integers from `t = ceil(c/(a-1))` on by the
/// parity of their integer block.
pub fn linear_infinite_coloring(c: i64, a: u32, n: u64) -> Result<Coloring> {
    let t = discrete_threshold(c, a)?;
    let (cr, ar) = (
        BigRational::from_integer(c.into()),
        BigRational::from_integer(a.into()),
    );
    let parity = |k: u32| if k.is_multiple_of(2) { Color::Red } else { Color::Blue };
    let colors = (1..=n)
        .map(|v| {
            let k = if (v as i64) < t {
                lemma3_index(&BigRational::from_integer(v.into()), &cr, &ar)?
            } else {
                discrete_index(v as i64, c, a)?
            };
            Ok(parity(k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Coloring::from_fn(n, |v| colors[(v - 1) as usize]))
}

/// Blocks of length `c`: `v` is Red iff `floor((v-1)/c)` is even.
pub fn coefficient_one_coloring(c: i64, n: u64) -> Result<Coloring> {
    if c < 1 {
        return domain(format!("need c >= 1, got {c}"));
    }
    let c = c as u64;
    Ok(Coloring::from_fn(n, |v| {
        if ((v - 1) / c).is_multiple_of(2) {
            Color::Red
        } else {
            Color::Blue
        }
    }))
}
