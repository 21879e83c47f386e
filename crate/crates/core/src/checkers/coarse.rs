use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::clique::{self, Edge};
use crate::cone::{binomial, TupleScan};
use crate::error::{usage, Result};
use crate::metric::{seeded_tuples, SpaceModel};
use crate::par;
use crate::sample::{FiniteMap, Witness};

use super::LinearCeiling;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurjectivityVerdict {
    pub pass: bool,
    /// Largest sampled distance to the image.
    pub s: f64,
    pub ceiling: f64,
    pub worst_index: usize,
    pub worst_point: String,
    pub samples: usize,
}

/// `S = max_y d(y, f(X))` over the target sample.
pub fn check_coarse_surjectivity<P: Debug + Sync>(
    targets: &[P],
    distance_to_image: impl Fn(&P) -> f64 + Sync,
    ceiling: f64,
) -> Result<SurjectivityVerdict> {
    if targets.is_empty() {
        return Err(usage("empty target sample"));
    }
    let d = par::map_slice(targets, |p| distance_to_image(p));
    let (worst_index, s) = d.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |a, c| if c.1 > a.1 { c } else { a });
    Ok(SurjectivityVerdict {
        pass: s <= ceiling,
        s,
        ceiling,
        worst_index,
        worst_point: format!("{:?}", targets[worst_index]),
        samples: targets.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NTo1Row {
    pub r: f64,
    /// Least `S` such that `n+1` points pairwise more than `S` apart always
    /// have two images more than `R` apart; 0 when no tuple has image
    /// diameter `≤ R`.
    pub s: f64,
    /// A tuple with image diameter `≤ R` and pairwise source distance `≥ S`.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NTo1Table {
    pub pass: bool,
    pub n: usize,
    pub rows: Vec<NTo1Row>,
    pub ceiling: LinearCeiling,
    pub domain_diameter: f64,
    /// Some `S(R)` reached the sample diameter: no separation scale exists
    /// inside the sample.
    pub saturated: bool,
    /// First row whose `S` exceeds the ceiling.
    pub counterexample: Option<NTo1Row>,
    pub exhaustive: bool,
    /// Tuples covered (all `(n+1)`-subsets when exhaustive).
    pub tuples: u64,
}

/// Tuple form of coarse `n`-to-1: tabulates `S(R)` and reports a
/// counterexample when `S(R)` exceeds the ceiling at `R`.
pub fn check_coarsely_n_to_1<M: FiniteMap>(
    f: &M,
    n: usize,
    r_grid: &[f64],
    scan: TupleScan,
    ceiling: LinearCeiling,
) -> Result<NTo1Table> {
    if n == 0 {
        return Err(usage("n-to-1 checks need n >= 1"));
    }
    if r_grid.is_empty() {
        return Err(usage("empty R grid"));
    }
    let m = f.len();
    let k = n + 1;
    let r_max = r_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let diam = par::map_range(m, |i| (i + 1..m).map(|j| f.source_distance(i, j)).fold(0.0, f64::max))
        .into_iter()
        .fold(0.0, f64::max);
    let (hits, exhaustive, tuples) = match scan {
        TupleScan::Exhaustive => {
            let mut edges = clique::all_pairs(m, |i, j| {
                let key = f.image_distance(i, j);
                (key <= r_max).then(|| Edge { weight: f.source_distance(i, j), key, i: i as u32, j: j as u32 })
            });
            clique::sort_edges(&mut edges);
            let hits = clique::bottleneck_cliques(m, k, &edges, r_grid, |key, r| key <= r);
            (hits, true, binomial(m as u64, k as u64))
        }
        TupleScan::Seeded { seed, count } => {
            let flat: Vec<usize> = seeded_tuples::<1>(seed, count * k, m).into_iter().map(|[s]| s as usize).collect();
            let scored: Vec<(f64, f64, Vec<usize>)> = flat
                .chunks(k)
                .filter_map(|c| {
                    let mut t = c.to_vec();
                    t.sort_unstable();
                    t.dedup();
                    (t.len() == k).then_some(t)
                })
                .map(|t| {
                    let mut lo = f64::INFINITY;
                    let mut diam = 0.0f64;
                    for a in 0..k {
                        for b in a + 1..k {
                            lo = lo.min(f.source_distance(t[a], t[b]));
                            diam = diam.max(f.image_distance(t[a], t[b]));
                        }
                    }
                    (lo, diam, t)
                })
                .collect();
            let hits = r_grid
                .iter()
                .map(|&r| {
                    scored
                        .iter()
                        .filter(|s| s.1 <= r)
                        .fold(None::<&(f64, f64, Vec<usize>)>, |acc, cur| match acc {
                            Some(a) if a.0 >= cur.0 => Some(a),
                            _ => Some(cur),
                        })
                        .map(|s| (s.0, s.2.clone()))
                })
                .collect();
            (hits, false, count as u64)
        }
    };
    let rows: Vec<NTo1Row> = r_grid
        .iter()
        .zip(hits)
        .map(|(&r, hit)| NTo1Row {
            r,
            s: hit.as_ref().map_or(0.0, |h| h.0),
            witness: hit.map(|h| f.witness(&h.1)),
        })
        .collect();
    let counterexample = rows.iter().find(|row| row.s > ceiling.at(row.r)).cloned();
    let saturated = rows.iter().any(|row| row.s >= diam);
    Ok(NTo1Table {
        pass: counterexample.is_none(),
        n,
        rows,
        ceiling,
        domain_diameter: diam,
        saturated,
        counterexample,
        exhaustive,
        tuples,
    })
}

/// Samples of `f∘γ` and of the target geodesic from `f(γ(0))` to `f(γ(l))`.
#[derive(Clone, Debug, PartialEq)]
pub struct RayImage<P> {
    pub depth: usize,
    pub label: String,
    pub image: Vec<P>,
    pub geodesic: Vec<P>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    /// Largest Hausdorff distance over the family.
    pub h: f64,
    pub worst_ray: String,
    /// `(depth, max H at that depth)`.
    pub per_depth: Vec<(usize, f64)>,
    pub rays: usize,
}

/// Two-sided Hausdorff distance between two finite samples.
pub fn hausdorff<T: SpaceModel>(space: &T, a: &[T::Point], b: &[T::Point]) -> f64 {
    let directed = |x: &[T::Point], y: &[T::Point]| {
        x.iter()
            .map(|p| y.iter().map(|q| space.distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn check_ray_stability<T: SpaceModel>(space: &T, rays: &[RayImage<T::Point>]) -> Result<StabilityVerdict> {
    if rays.is_empty() {
        return Err(usage("empty ray family"));
    }
    if rays.iter().any(|r| r.image.is_empty() || r.geodesic.is_empty()) {
        return Err(usage("ray samples must be nonempty"));
    }
    let h = par::map_slice(rays, |r| hausdorff(space, &r.image, &r.geodesic));
    let (worst, hmax) = h.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |a, c| if c.1 > a.1 { c } else { a });
    let mut per_depth: Vec<(usize, f64)> = Vec::new();
    for (r, &v) in rays.iter().zip(&h) {
        match per_depth.iter_mut().find(|(d, _)| *d == r.depth) {
            Some(slot) => slot.1 = slot.1.max(v),
            None => per_depth.push((r.depth, v)),
        }
    }
    per_depth.sort_by_key(|(d, _)| *d);
    Ok(StabilityVerdict { h: hmax, worst_ray: rays[worst].label.clone(), per_depth, rays: rays.len() })
}
