use serde::{Deserialize, Serialize};

use super::{envelope, floor_noise};
use crate::error::{usage, Result};
use crate::metric::PairSample;
use crate::par;
use crate::sample::FiniteMap;

/// `d(fx, fy) ≤ λ₁ d(x, y) + μ₁` on every sampled pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LslFit {
    pub lambda1: f64,
    pub mu1: f64,
    pub worst_pair: (usize, usize),
    /// `(λ₁, μ₁(λ₁))` along the grid.
    pub frontier: Vec<(f64, f64)>,
    pub pairs: usize,
    pub exhaustive: bool,
}

/// `μ₁(λ) = max(d(fx, fy) − λ d(x, y))` over the sample, clamped at 0.
pub fn lsl_mu<M: FiniteMap>(f: &M, sample: &PairSample, lambda: f64) -> Result<(f64, (usize, usize))> {
    let (best, _) = envelope(
        f,
        sample,
        &[lambda],
        |i, j| (f.source_distance(i, j), f.image_distance(i, j)),
        |l, dx, dy| dy - l * dx,
    )?;
    Ok((floor_noise(best[0].0.max(0.0)), best[0].1))
}

/// Evaluates `μ₁` on every grid `λ₁` and keeps the smallest `λ₁`.
pub fn fit_lsl<M: FiniteMap>(f: &M, sample: &PairSample, lambda_grid: &[f64]) -> Result<LslFit> {
    if lambda_grid.iter().any(|&l| !(l > 0.0)) {
        return Err(usage("LSL grid values must be positive"));
    }
    let (best, pairs) = envelope(
        f,
        sample,
        lambda_grid,
        |i, j| (f.source_distance(i, j), f.image_distance(i, j)),
        |l, dx, dy| dy - l * dx,
    )?;
    let frontier: Vec<(f64, f64)> = lambda_grid.iter().zip(&best).map(|(&l, b)| (l, floor_noise(b.0.max(0.0)))).collect();
    let pick = (0..frontier.len())
        .min_by(|&a, &b| frontier[a].0.total_cmp(&frontier[b].0).then(frontier[a].1.total_cmp(&frontier[b].1)))
        .expect("nonempty grid");
    Ok(LslFit {
        lambda1: frontier[pick].0,
        mu1: frontier[pick].1,
        worst_pair: best[pick].1,
        frontier,
        pairs,
        exhaustive: sample.is_exhaustive(),
    })
}

/// One grid point of a radial fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGridPoint {
    pub lambda2: f64,
    pub mu2: f64,
    /// `μ₂` restricted to pairs within half the longest geodesic.
    pub mu2_half: f64,
    pub bounded: bool,
    pub worst_pair: (usize, usize),
}

/// `λ₂ d(x, y) − μ₂ ≤ d(fx, fy)` for points on a common geodesic from the
/// basepoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialFit {
    pub pass: bool,
    pub lambda2: f64,
    pub mu2: f64,
    pub basepoint: usize,
    pub worst_pair: (usize, usize),
    pub grid: Vec<RadialGridPoint>,
    pub max_length: f64,
    pub pairs: usize,
    /// Pairs violating the chosen constants beyond the tolerance.
    pub violations: usize,
}

/// Parameters for [`fit_radial`].
///
/// A grid `λ₂` is unbounded when going from half-length to full-length
/// geodesics raises `μ₂` by more than `growth × (L/2)`, i.e. the shortfall
/// keeps growing linearly with length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialOptions {
    pub growth: f64,
    pub tolerance: f64,
}

impl Default for RadialOptions {
    fn default() -> Self {
        RadialOptions { growth: 0.05, tolerance: 1e-9 }
    }
}

pub const DEFAULT_RADIAL_GRID: [f64; 8] = [0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5];

/// Fits against every pair of points on each path of `family` and keeps the
/// largest bounded grid `λ₂`. For radiality the paths are geodesics from
/// the basepoint; any geodesic family (e.g. rays from several points) is
/// accepted.
pub fn fit_radial<M: FiniteMap>(f: &M, family: &[Vec<usize>], grid: &[f64], opts: RadialOptions) -> Result<RadialFit> {
    if family.is_empty() || grid.is_empty() {
        return Err(usage("radial fit needs geodesics and a grid"));
    }
    if grid.iter().any(|&l| !(l > 0.0)) {
        return Err(usage("radial grid values must be positive"));
    }
    if family.iter().any(|p| p.is_empty()) {
        return Err(usage("empty geodesic in family"));
    }
    let base = f.base();
    let max_length = family
        .iter()
        .map(|p| f.source_distance(p[0], *p.last().expect("nonempty")))
        .fold(0.0, f64::max);
    let half = max_length / 2.0;
    type Acc = Vec<((f64, (usize, usize)), f64)>;
    let init: Acc = vec![((f64::NEG_INFINITY, (0, 0)), f64::NEG_INFINITY); grid.len()];
    let rows = par::map_slice(family, |path| {
        let mut acc = init.clone();
        let pos = |i: usize| f.source_distance(path[0], i);
        for (a, &x) in path.iter().enumerate() {
            for &y in &path[a + 1..] {
                let dx = f.source_distance(x, y);
                let dy = f.image_distance(x, y);
                let short = pos(x) <= half && pos(y) <= half;
                for (slot, &l) in acc.iter_mut().zip(grid) {
                    let s = l * dx - dy;
                    if s > slot.0 .0 {
                        slot.0 = (s, (x, y));
                    }
                    if short && s > slot.1 {
                        slot.1 = s;
                    }
                }
            }
        }
        acc
    });
    let mut acc = init;
    for row in &rows {
        for (a, r) in acc.iter_mut().zip(row) {
            if r.0 .0 > a.0 .0 {
                a.0 = r.0;
            }
            a.1 = a.1.max(r.1);
        }
    }
    let pairs = family.iter().map(|p| p.len() * p.len().saturating_sub(1) / 2).sum();
    let points: Vec<RadialGridPoint> = grid
        .iter()
        .zip(&acc)
        .map(|(&l, ((mu, pair), mu_half))| {
            let mu2 = floor_noise(mu.max(0.0));
            let mu2_half = floor_noise(mu_half.max(0.0));
            RadialGridPoint { lambda2: l, mu2, mu2_half, bounded: mu2 - mu2_half <= opts.growth * half, worst_pair: *pair }
        })
        .collect();
    let chosen = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.bounded)
        .max_by(|a, b| a.1.lambda2.total_cmp(&b.1.lambda2))
        .map(|(i, _)| i);
    let (lambda2, mu2, worst_pair, violations) = match chosen {
        Some(i) => {
            let p = &points[i];
            let violations = family
                .iter()
                .map(|path| {
                    let mut v = 0;
                    for (a, &x) in path.iter().enumerate() {
                        for &y in &path[a + 1..] {
                            if p.lambda2 * f.source_distance(x, y) - p.mu2 > f.image_distance(x, y) + opts.tolerance {
                                v += 1;
                            }
                        }
                    }
                    v
                })
                .sum();
            (p.lambda2, p.mu2, p.worst_pair, violations)
        }
        None => (0.0, f64::INFINITY, points[0].worst_pair, 0),
    };
    Ok(RadialFit {
        pass: chosen.is_some(),
        lambda2,
        mu2,
        basepoint: base,
        worst_pair,
        grid: points,
        max_length,
        pairs,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasepointVerdict {
    pub pass: bool,
    pub fits: Vec<(usize, RadialFit)>,
    pub failing: Option<usize>,
}

/// Refits at each basepoint; `fit_at(b)` must return the fit with geodesics
/// issuing from `b`.
pub fn check_radial_basepoint_independence(
    basepoints: &[usize],
    fit_at: impl Fn(usize) -> Result<RadialFit>,
) -> Result<BasepointVerdict> {
    if basepoints.len() < 2 {
        return Err(usage("basepoint independence needs at least two basepoints"));
    }
    let fits = basepoints.iter().map(|&b| fit_at(b).map(|fit| (b, fit))).collect::<Result<Vec<_>>>()?;
    let failing = fits.iter().find(|(_, fit)| !fit.pass).map(|(b, _)| *b);
    Ok(BasepointVerdict { pass: failing.is_none(), fits, failing })
}

/// `(fb, fc)_{fa} ≥ A·(b, c)_a − B` along a grid of `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductBoundFit {
    /// `(A, B(A))`.
    pub frontier: Vec<(f64, f64)>,
    pub worst_pairs: Vec<(usize, usize)>,
    pub pairs: usize,
    pub exhaustive: bool,
}

impl ProductBoundFit {
    pub fn b_at(&self, a: f64) -> Option<f64> {
        self.frontier.iter().find(|(x, _)| *x == a).map(|(_, b)| *b)
    }
}

pub fn fit_product_lower_bound<M: FiniteMap>(f: &M, sample: &PairSample, a_grid: &[f64]) -> Result<ProductBoundFit> {
    if a_grid.iter().any(|&a| !(a > 0.0)) {
        return Err(usage("product-bound grid values must be positive"));
    }
    let (best, pairs) = envelope(
        f,
        sample,
        a_grid,
        |i, j| (f.source_product(i, j), f.image_product(i, j)),
        |a, sp, ip| a * sp - ip,
    )?;
    Ok(ProductBoundFit {
        frontier: a_grid.iter().zip(&best).map(|(&a, b)| (a, floor_noise(b.0.max(0.0)))).collect(),
        worst_pairs: best.iter().map(|b| b.1).collect(),
        pairs,
        exhaustive: sample.is_exhaustive(),
    })
}
