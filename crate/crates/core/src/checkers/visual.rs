use serde::{Deserialize, Serialize};

use super::envelope;
use crate::error::Result;
use crate::metric::PairSample;
use crate::sample::{FiniteMap, Witness};

/// A modulus is flagged once it exceeds `slope·r + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearCeiling {
    pub slope: f64,
    pub offset: f64,
}

impl Default for LinearCeiling {
    fn default() -> Self {
        LinearCeiling { slope: 2.0, offset: 4.0 }
    }
}

impl LinearCeiling {
    pub fn at(&self, r: f64) -> f64 {
        self.slope * r + self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisualViolation {
    pub r: f64,
    pub s: f64,
    pub source_product: f64,
    pub image_product: f64,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisualModulus {
    pub pass: bool,
    /// `(r, s(r))`.
    pub table: Vec<(f64, f64)>,
    pub ceiling: LinearCeiling,
    pub violations: Vec<VisualViolation>,
    pub pairs: usize,
    pub exhaustive: bool,
}

/// `s(r) = 1 + max (x, y)_a` over sampled pairs with `(fx, fy)_b ≤ r`
/// (the max of an empty set taken as 0).
pub fn check_visual<M: FiniteMap>(f: &M, sample: &PairSample, r_grid: &[f64], ceiling: LinearCeiling) -> Result<VisualModulus> {
    let (best, pairs) = envelope(
        f,
        sample,
        r_grid,
        |i, j| (f.source_product(i, j), f.image_product(i, j)),
        |r, sp, ip| if ip <= r { sp } else { f64::NEG_INFINITY },
    )?;
    let mut table = Vec::with_capacity(r_grid.len());
    let mut violations = Vec::new();
    for (&r, &(sp, (i, j))) in r_grid.iter().zip(&best) {
        let s = 1.0 + sp.max(0.0);
        table.push((r, s));
        if s > ceiling.at(r) {
            violations.push(VisualViolation {
                r,
                s,
                source_product: sp,
                image_product: f.image_product(i, j),
                witness: f.witness(&[i, j]),
            });
        }
    }
    Ok(VisualModulus { pass: violations.is_empty(), table, ceiling, violations, pairs, exhaustive: sample.is_exhaustive() })
}
