//! Decision procedures over finite samples: each checker fits constants on a
//! grid and returns them with the sample tuples that realize them.

mod coarse;
mod fit;
mod visual;

pub use coarse::*;
pub use fit::*;
pub use visual::*;

use serde::{Deserialize, Serialize};

use crate::cone::CFnTable;
use crate::error::{usage, Result};
use crate::metric::PairSample;
use crate::par;
use crate::sample::FiniteMap;

/// Everything the checkers measured on one map.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lsl: Option<LslFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial: Option<RadialFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visual: Option<VisualModulus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surjectivity: Option<SurjectivityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_to_1: Option<NTo1Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_bound: Option<ProductBoundFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_fn: Option<CFnTable>,
}

pub(crate) type Best = (f64, (usize, usize));

fn better(acc: &mut [Best], row: &[Best]) {
    for (a, r) in acc.iter_mut().zip(row) {
        if r.0 > a.0 {
            *a = *r;
        }
    }
}

/// For each grid value `g`, the max over sampled pairs of
/// `score(g, value(i, j))`, with the first pair attaining it.
pub(crate) fn envelope<M: FiniteMap>(
    f: &M,
    sample: &PairSample,
    grid: &[f64],
    value: impl Fn(usize, usize) -> (f64, f64) + Sync,
    score: impl Fn(f64, f64, f64) -> f64 + Sync,
) -> Result<(Vec<Best>, usize)> {
    let n = f.len();
    if n < 2 {
        return Err(usage("need at least two sample points"));
    }
    if grid.is_empty() {
        return Err(usage("empty constant grid"));
    }
    let init = vec![(f64::NEG_INFINITY, (0, 0)); grid.len()];
    let visit = |acc: &mut Vec<Best>, i: usize, j: usize| {
        let (x, y) = value(i, j);
        for (a, &g) in acc.iter_mut().zip(grid) {
            let s = score(g, x, y);
            if s > a.0 {
                *a = (s, (i, j));
            }
        }
    };
    let (rows, count) = match sample {
        PairSample::Exhaustive => {
            let rows = par::map_range(n, |i| {
                let mut acc = init.clone();
                for j in i + 1..n {
                    visit(&mut acc, i, j);
                }
                acc
            });
            (rows, n * (n - 1) / 2)
        }
        other => {
            let list = other.materialize(n);
            if list.is_empty() {
                return Err(usage("empty pair sample"));
            }
            if let Some(&(i, j)) = list.iter().find(|(i, j)| *i as usize >= n || *j as usize >= n) {
                return Err(crate::Error::UnknownPoint(i.max(j) as usize));
            }
            let chunks: Vec<&[(u32, u32)]> = list.chunks(4096).collect();
            let rows = par::map_slice(&chunks, |chunk| {
                let mut acc = init.clone();
                for &(i, j) in chunk.iter() {
                    visit(&mut acc, i as usize, j as usize);
                }
                acc
            });
            (rows, list.len())
        }
    };
    let mut acc = init;
    for row in &rows {
        better(&mut acc, row);
    }
    Ok((acc, count))
}

/// Float noise below this is reported as an exact zero.
pub(crate) const ZERO_FLOOR: f64 = 1e-9;

pub(crate) fn floor_noise(x: f64) -> f64 {
    if x.abs() < ZERO_FLOOR {
        0.0
    } else {
        x
    }
}
