//! The Cayley graph of the free group on two generators as a labeled
//! 4-regular tree.
//!
//! Vertices are words: the first digit picks one of the four edges at the
//! root (`0..=3`), every later digit one of the three edges leading away
//! from the root (`0..=2`). Edge lengths are 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::metric::SpaceModel;

/// A vertex of the tree; the empty word is the basepoint `e`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn root() -> Self {
        Word(Vec::new())
    }

    pub fn new(digits: Vec<u8>) -> Result<Self> {
        for (i, &d) in digits.iter().enumerate() {
            let max = if i == 0 { 3 } else { 2 };
            if d > max {
                return Err(usage(format!("digit {d} at position {i} exceeds {max}")));
            }
        }
        Ok(Word(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of admissible next digits.
    pub fn arity(&self) -> u8 {
        if self.is_root() {
            4
        } else {
            3
        }
    }

    pub fn child(&self, digit: u8) -> Result<Word> {
        if digit >= self.arity() {
            return Err(usage(format!("digit {digit} is not a child of {self}")));
        }
        let mut d = self.0.clone();
        d.push(digit);
        Ok(Word(d))
    }

    pub fn children(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.arity()).map(move |i| {
            let mut d = self.0.clone();
            d.push(i);
            Word(d)
        })
    }

    pub fn parent(&self) -> Option<Word> {
        (!self.is_root()).then(|| Word(self.0[..self.0.len() - 1].to_vec()))
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        lcp(&self.0, &other.0)
    }
}

impl TryFrom<Vec<u8>> for Word {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u8> {
    fn from(w: Word) -> Vec<u8> {
        w.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            return f.write_str("e");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;
    /// `e` (or the empty string) for the root, otherwise a digit string such
    /// as `012`; separators `.` and `,` are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::root());
        }
        let digits = s
            .chars()
            .filter(|c| *c != '.' && *c != ',')
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| usage(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(digits)
    }
}

pub(crate) fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `|u| + |v| - 2 lcp(u, v)`.
pub fn word_distance(u: &Word, v: &Word) -> u32 {
    (u.len() + v.len() - 2 * u.common_prefix_len(v)) as u32
}

/// A point on the edge from `parent` to `parent·child_digit` at distance `t`
/// from the parent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgePoint {
    pub parent: Word,
    pub child_digit: u8,
    pub t: f64,
}

impl EdgePoint {
    pub fn new(parent: Word, child_digit: u8, t: f64) -> Result<Self> {
        if child_digit >= parent.arity() {
            return Err(usage(format!("digit {child_digit} is not a child of {parent}")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(usage(format!("edge parameter must lie in [0,1], got {t}")));
        }
        Ok(EdgePoint { parent, child_digit, t })
    }

    pub fn child(&self) -> Word {
        let mut d = self.parent.0.clone();
        d.push(self.child_digit);
        Word(d)
    }

    /// Distance from the root.
    pub fn depth(&self) -> f64 {
        self.parent.len() as f64 + self.t
    }
}

/// Length metric on the tree with unit edges.
///
/// Points on distinct edges are joined through one endpoint of each edge,
/// so the minimum over the four endpoint combinations is exact.
pub fn edge_point_distance(p: &EdgePoint, q: &EdgePoint) -> f64 {
    if p.parent == q.parent && p.child_digit == q.child_digit {
        return (p.t - q.t).abs();
    }
    let (pc, qc) = (p.child(), q.child());
    let ends_p = [(&p.parent, p.t), (&pc, 1.0 - p.t)];
    let ends_q = [(&q.parent, q.t), (&qc, 1.0 - q.t)];
    let mut best = f64::INFINITY;
    for (u, du) in ends_p {
        for (v, dv) in ends_q {
            best = best.min(du + word_distance(u, v) as f64 + dv);
        }
    }
    best
}

/// Number of words of length `n`: 1, then `4·3^(n-1)`.
pub fn sphere_size(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        4 * 3usize.pow(n as u32 - 1)
    }
}

/// All words of length `n` in lexicographic order.
pub fn sphere(n: usize) -> Vec<Word> {
    let mut level = vec![Word::root()];
    for _ in 0..n {
        level = level.iter().flat_map(|w| w.children().collect::<Vec<_>>()).collect();
    }
    level
}

/// All words of length at most `n`, ordered by length then lexicographically.
pub fn ball(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level = vec![Word::root()];
    for k in 0..=n {
        if k > 0 {
            level = level.iter().flat_map(|w| w.children().collect::<Vec<_>>()).collect();
        }
        out.extend(level.iter().cloned());
    }
    out
}

/// A depth-`k` cell of the boundary: all rays through the prefix `digits`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoundaryWord {
    pub digits: Word,
}

impl BoundaryWord {
    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// Gromov product of two cells at the root: the common prefix length,
    /// capped at the shared depth (a capped value means "unresolved").
    pub fn product(&self, other: &BoundaryWord) -> usize {
        self.digits
            .common_prefix_len(&other.digits)
            .min(self.depth().min(other.depth()))
    }
}

/// The depth-`k` cells, in the order of [`sphere`].
pub fn truncated_boundary(k: usize) -> Result<Vec<BoundaryWord>> {
    if k == 0 {
        return Err(usage("boundary truncation depth must be positive"));
    }
    Ok(sphere(k).into_iter().map(|digits| BoundaryWord { digits }).collect())
}

/// The tree as a based model on its vertices; `enumerate` returns [`ball`].
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeGroupTree;

impl SpaceModel for FreeGroupTree {
    type Point = Word;

    fn basepoint(&self) -> Word {
        Word::root()
    }

    fn distance(&self, x: &Word, y: &Word) -> f64 {
        word_distance(x, y) as f64
    }

    fn enumerate(&self, depth: usize) -> Vec<Word> {
        ball(depth)
    }

    /// The vertex path through the common prefix; `step` only has to be
    /// positive since consecutive vertices are 1 apart.
    fn geodesic(&self, x: &Word, y: &Word, step: f64) -> Result<Vec<Word>> {
        if !(step > 0.0) {
            return Err(usage(format!("geodesic step must be positive, got {step}")));
        }
        Ok(vertex_path(x, y))
    }

    fn visual_constant(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Vertices of the tree geodesic from `x` to `y`, endpoints included.
pub fn vertex_path(x: &Word, y: &Word) -> Vec<Word> {
    let k = x.common_prefix_len(y);
    let up = (k..=x.len()).rev().map(|i| x.prefix(i));
    let down = (k + 1..=y.len()).map(|i| y.prefix(i));
    up.chain(down).collect()
}
