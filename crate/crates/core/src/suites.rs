//! Named suites: each runs a fixed list of checks and assembles a [`Report`].
//!
//! Every `*_verdict` function is usable on its own; the suite entry points
//! ([`verify_example8`], [`verify_cone`], [`delta`], [`probe`]) only choose
//! the instances and collect the verdicts.

use std::collections::HashMap;
use std::fmt::Debug;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::{
    box_dimension_estimate, boundary_n_to_1_check, capacity_cover_check, chord, explicit_boundary_map, holder_fit,
    CapacityCover, CellMetric,
};
use crate::checkers::{
    check_coarse_surjectivity, check_coarsely_n_to_1, check_radial_basepoint_independence, check_ray_stability,
    check_visual, fit_lsl, fit_product_lower_bound, fit_radial, lsl_mu, LinearCeiling, RadialFit, RadialOptions,
    RayImage, DEFAULT_RADIAL_GRID,
};
use crate::clique::{self, Edge};
use crate::cone::{
    binomial, build_cone, c_fn_table, cantor_to_interval, cone_boundary_product_check, lift_boundary_map,
    ApproxGraph, CompactModel, GraphMap, TupleScan,
};
use crate::error::{usage, Error, Result};
use crate::maps::{
    cantor_distance, cantor_map, cantor_points, comb_counterexample, fold_first_digit, jump_bound, measured_jump,
    CombPoint, ExplicitMap,
};
use crate::metric::{estimate_delta, PairSample, PointTable, QuadrupleSample, SpaceModel};
use crate::plane::{self, HyperbolicPlane, PolarPoint};
use crate::report::{Report, Verdict};
use crate::sample::{FiniteMap, SampledMap};
use crate::tree::{self, FreeGroupTree, Word};

pub const MAX_TREE_DEPTH: usize = 9;
pub const MAX_CONE_LEVEL: usize = 9;

/// Largest jump index examined for `B′`.
pub const JUMP_RANGE: usize = 10;

/// Run parameters shared by every suite. Unset depths and levels fall back
/// to per-suite defaults, and the report records the resolved values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SuiteConfig {
    pub depth: Option<usize>,
    pub levels: Option<usize>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tolerance: f64,
    /// The `n` of the n-to-1 checks.
    pub n: usize,
    pub r_grid: Vec<f64>,
    pub radial_growth: f64,
    pub visual_ceiling: LinearCeiling,
    pub n_to_1_ceiling: LinearCeiling,
    pub surjectivity_ceiling: f64,
    /// Cap on `B(1)` in `(fx, fy) ≥ (x, y) − B`.
    pub product_bound_cap: f64,
    /// Cap on the largest Hausdorff distance between a ray image and a geodesic.
    pub stability_cap: f64,
    pub cone_slack: f64,
    pub boundary_r: f64,
    pub boundary_bound: f64,
    /// Cap on `max_r (c_{f,n}(r) − r)`.
    pub c_fn_cap: f64,
    /// Pairwise checks enumerate all pairs up to this many points.
    pub exhaustive_pairs: usize,
    /// Tuple checks enumerate all tuples up to this many points.
    pub exhaustive_tuples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            depth: None,
            levels: None,
            seed: 7,
            samples: None,
            tolerance: 1e-9,
            n: 2,
            r_grid: (1..=6).map(f64::from).collect(),
            radial_growth: RadialOptions::default().growth,
            visual_ceiling: LinearCeiling::default(),
            n_to_1_ceiling: LinearCeiling::default(),
            surjectivity_ceiling: 1.0,
            product_bound_cap: 1.0,
            stability_cap: 1.0,
            cone_slack: 2.0,
            boundary_r: 2.0,
            boundary_bound: 5.0,
            c_fn_cap: 1.0,
            exhaustive_pairs: 15_000,
            exhaustive_tuples: 6_000,
        }
    }
}

const DEFAULT_SAMPLES: usize = 100_000;

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.depth {
            if d > MAX_TREE_DEPTH {
                return Err(usage(format!("depth {d} exceeds the enumerability limit {MAX_TREE_DEPTH}")));
            }
        }
        if let Some(l) = self.levels {
            if l > MAX_CONE_LEVEL {
                return Err(usage(format!("levels {l} exceeds the enumerability limit {MAX_CONE_LEVEL}")));
            }
        }
        if self.samples == Some(0) {
            return Err(usage("samples must be positive"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(usage("tolerance must be nonnegative"));
        }
        if self.n == 0 {
            return Err(usage("n must be at least 1"));
        }
        if self.r_grid.is_empty() || self.r_grid.iter().any(|r| !r.is_finite()) {
            return Err(usage("r-grid must be a nonempty list of finite values"));
        }
        Ok(())
    }

    fn depth_or(&self, default: usize) -> usize {
        self.depth.unwrap_or(default)
    }

    fn levels_or(&self, default: usize) -> usize {
        self.levels.unwrap_or(default)
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn pair_sample(&self, points: usize) -> PairSample {
        if points <= self.exhaustive_pairs {
            PairSample::Exhaustive
        } else {
            PairSample::Seeded { seed: self.seed, count: self.samples_or(DEFAULT_SAMPLES) }
        }
    }

    fn tuple_scan(&self, points: usize) -> TupleScan {
        if points <= self.exhaustive_tuples {
            TupleScan::Exhaustive
        } else {
            TupleScan::Seeded { seed: self.seed, count: self.samples_or(DEFAULT_SAMPLES) }
        }
    }

    fn radial_options(&self) -> RadialOptions {
        RadialOptions { growth: self.radial_growth, tolerance: self.tolerance }
    }

    fn resolved(&self, depth: Option<usize>, levels: Option<usize>) -> SuiteConfig {
        SuiteConfig { depth: depth.or(self.depth), levels: levels.or(self.levels), ..self.clone() }
    }
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |a, c| if c.1 > a.1 { c } else { a })
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

// ---------------------------------------------------------------------------
// The explicit map from the tree to the plane.

static TREE: FreeGroupTree = FreeGroupTree;
static PLANE: HyperbolicPlane = HyperbolicPlane;

pub type ExplicitSample = SampledMap<'static, FreeGroupTree, HyperbolicPlane>;

/// The explicit map on the vertices of the depth-`depth` ball.
pub fn explicit_sample(depth: usize) -> Result<ExplicitSample> {
    SampledMap::new(&TREE, &PLANE, tree::ball(depth), |w| ExplicitMap.map_vertex(w))
}

/// Vertex paths from `from` to every word of `ends`, as indices into `points`.
pub fn geodesic_family(points: &[Word], from: &Word, ends: &[Word]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&Word, usize> = points.iter().enumerate().map(|(i, w)| (w, i)).collect();
    ends.iter()
        .map(|end| {
            tree::vertex_path(from, end)
                .iter()
                .map(|w| index.get(w).copied().ok_or_else(|| Error::Model(format!("{w} is outside the sample"))))
                .collect()
        })
        .collect()
}

/// `B′ = sup_{n ≤ 10}` of the measured jump, with its index.
pub fn b_prime() -> Result<(usize, f64)> {
    let m = (1..=JUMP_RANGE).map(measured_jump).collect::<Result<Vec<_>>>()?;
    let (i, v) = argmax(&m);
    Ok((i + 1, v))
}

pub fn jump_verdict(cfg: &SuiteConfig) -> Result<Verdict> {
    let bound = (1..=JUMP_RANGE).map(jump_bound).collect::<Result<Vec<_>>>()?;
    let measured = (1..=JUMP_RANGE).map(measured_jump).collect::<Result<Vec<_>>>()?;
    let below = measured.iter().zip(&bound).all(|(m, b)| *m <= b + cfg.tolerance);
    let (sup_i, sup) = argmax(&bound);
    let (bp_i, bp) = argmax(&measured);
    let mut v = Verdict::new("jump-bounds", below && sup_i + 1 == 2)
        .constant("bound", &bound)
        .constant("measured", &measured)
        .constant("sup_bound", sup)
        .constant("sup_bound_n", sup_i + 1)
        .constant("b_prime", bp)
        .constant("b_prime_n", bp_i + 1);
    if let Some(n) = measured.iter().zip(&bound).position(|(m, b)| *m > b + cfg.tolerance) {
        v = v.witness(serde_json::json!({"n": n + 1, "measured": measured[n], "bound": bound[n]}));
    }
    Ok(v)
}

pub fn radial_verdict(cfg: &SuiteConfig, depth: usize) -> Result<Verdict> {
    let f = explicit_sample(depth)?;
    let family = geodesic_family(&f.points, &Word::root(), &tree::sphere(depth))?;
    let fit = fit_radial(&f, &family, &DEFAULT_RADIAL_GRID, cfg.radial_options())?;
    Ok(radial_to_verdict("radial", &f, &fit))
}

fn radial_to_verdict<M: FiniteMap>(name: &str, f: &M, fit: &RadialFit) -> Verdict {
    Verdict::new(name, fit.pass && fit.violations == 0)
        .constant("lambda2", fit.lambda2)
        .constant("mu2", fit.mu2)
        .constant("violations", fit.violations)
        .constant("pairs", fit.pairs)
        .constant("max_length", fit.max_length)
        .constant(
            "grid",
            fit.grid.iter().map(|g| (g.lambda2, g.mu2, g.mu2_half, g.bounded)).collect::<Vec<_>>(),
        )
        .witness(f.witness(&[fit.worst_pair.0, fit.worst_pair.1]))
}

pub fn lsl_verdict(cfg: &SuiteConfig, depth: usize) -> Result<Verdict> {
    let f = explicit_sample(depth)?;
    let sample = cfg.pair_sample(f.len());
    let (_, bp) = b_prime()?;
    let lambda = 1.0 + bp;
    let (mu, pair) = lsl_mu(&f, &sample, lambda)?;
    let fit = fit_lsl(&f, &sample, &[1.0, 1.25, 1.5, lambda, 2.0])?;
    Ok(Verdict::new("lsl", mu <= bp + cfg.tolerance)
        .constant("lambda1", lambda)
        .constant("mu1", mu)
        .constant("b_prime", bp)
        .constant("frontier", &fit.frontier)
        .constant("pairs", fit.pairs)
        .constant("exhaustive", fit.exhaustive)
        .witness(f.witness(&[pair.0, pair.1])))
}

pub fn visual_verdict<M: FiniteMap>(cfg: &SuiteConfig, name: &str, f: &M, r_grid: &[f64]) -> Result<Verdict> {
    let vm = check_visual(f, &cfg.pair_sample(f.len()), r_grid, cfg.visual_ceiling)?;
    let mut v = Verdict::new(name, vm.pass)
        .constant("table", &vm.table)
        .constant("ceiling", vm.ceiling)
        .constant("pairs", vm.pairs)
        .constant("exhaustive", vm.exhaustive);
    for viol in &vm.violations {
        v = v.witness(viol);
    }
    Ok(v)
}

pub fn product_bound_verdict<M: FiniteMap>(cfg: &SuiteConfig, name: &str, f: &M) -> Result<Verdict> {
    let fit = fit_product_lower_bound(f, &cfg.pair_sample(f.len()), &[0.25, 0.5, 0.75, 1.0])?;
    let b1 = fit.b_at(1.0).expect("grid contains 1");
    let pair = *fit.worst_pairs.last().expect("nonempty grid");
    Ok(Verdict::new(name, b1 <= cfg.product_bound_cap)
        .constant("frontier", &fit.frontier)
        .constant("b_at_1", b1)
        .constant("cap", cfg.product_bound_cap)
        .constant("pairs", fit.pairs)
        .constant("exhaustive", fit.exhaustive)
        .witness(f.witness(&[pair.0, pair.1])))
}

/// Distance from a plane sample of the radius-`min(6, depth − 1)` ball to
/// the image of all edges within `depth`.
pub fn surjectivity_verdict(cfg: &SuiteConfig, depth: usize) -> Result<Verdict> {
    let radius = 6.0f64.min(depth.saturating_sub(1) as f64);
    let count = cfg.samples_or(10_000);
    let targets = PLANE.sample_ball(radius, count, cfg.seed);
    let s = check_coarse_surjectivity(&targets, |q| ExplicitMap.distance_to_image(q, depth), cfg.surjectivity_ceiling)?;
    Ok(Verdict::new("surjectivity", s.pass)
        .constant("s", s.s)
        .constant("ceiling", s.ceiling)
        .constant("radius", radius)
        .constant("samples", s.samples)
        .witness(serde_json::json!({"index": s.worst_index, "point": s.worst_point})))
}

pub fn n_to_1_verdict<M: FiniteMap>(cfg: &SuiteConfig, name: &str, f: &M) -> Result<Verdict> {
    let t = check_coarsely_n_to_1(f, cfg.n, &cfg.r_grid, cfg.tuple_scan(f.len()), cfg.n_to_1_ceiling)?;
    let s: Vec<f64> = t.rows.iter().map(|r| r.s).collect();
    let monotone = nondecreasing(&s);
    let mut v = Verdict::new(name, t.pass && monotone)
        .constant("n", t.n)
        .constant("table", t.rows.iter().map(|r| (r.r, r.s)).collect::<Vec<_>>())
        .constant("ceiling", t.ceiling)
        .constant("monotone", monotone)
        .constant("domain_diameter", t.domain_diameter)
        .constant("saturated", t.saturated)
        .constant("exhaustive", t.exhaustive)
        .constant("tuples", t.tuples);
    match &t.counterexample {
        Some(c) => v = v.witness(c),
        None => {
            if let Some(last) = t.rows.last() {
                v = v.witness(last);
            }
        }
    }
    Ok(v)
}

/// Root rays of the explicit map, sampled four times per edge, against the
/// plane geodesic to the image of the leaf.
pub fn stability_verdict(cfg: &SuiteConfig, depth: usize) -> Result<Verdict> {
    let rays = tree::sphere(depth)
        .iter()
        .map(|leaf| {
            let end = ExplicitMap.map_vertex(leaf);
            Ok(RayImage {
                depth,
                label: leaf.to_string(),
                image: ExplicitMap.image_ray(leaf, 4),
                geodesic: plane::geodesic(&PolarPoint::BASEPOINT, &end, 0.25)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = check_ray_stability(&PLANE, &rays)?;
    Ok(Verdict::new("stability", s.h <= cfg.stability_cap)
        .constant("h", s.h)
        .constant("cap", cfg.stability_cap)
        .constant("rays", s.rays)
        .witness(serde_json::json!({"ray": s.worst_ray})))
}

/// Per depth `k`: image angles, cell-map surjectivity and multiplicity, and
/// the minimal `B` of the boundary n-to-1 check.
pub fn boundary_verdict(cfg: &SuiteConfig, k_max: usize) -> Result<Verdict> {
    if k_max < 3 {
        return Err(usage("boundary checks start at depth 3"));
    }
    let mut rows = Vec::new();
    let mut ok = true;
    let mut bs = Vec::new();
    let mut witnesses = Vec::new();
    for k in 3..=k_max {
        let cells = tree::sphere_size(k);
        let gap = std::f64::consts::TAU / cells as f64;
        let mut angles: Vec<f64> = ExplicitMap.angles_at_depth(k).iter().map(|&a| plane::reduce_angle(a)).collect();
        angles.sort_by(f64::total_cmp);
        let deviation = angles.iter().enumerate().map(|(i, a)| (a - i as f64 * gap).abs()).fold(0.0, f64::max);
        let (source, target, map) = explicit_boundary_map(k, 2)?;
        let check = boundary_n_to_1_check(&source, &target, &map, cfg.n, cfg.boundary_r, cfg.boundary_bound)?;
        let row_ok = deviation < 1e-9 && angles.len() == cells && map.is_surjective() && check.pass;
        ok &= row_ok;
        if let Some(b) = check.minimal_b {
            bs.push(b);
        }
        if let Some(w) = &check.witness {
            let labels: Vec<&str> = w.iter().map(|&c| source.cells[c].as_str()).collect();
            witnesses.push(serde_json::json!({"k": k, "cells": labels}));
        }
        rows.push(serde_json::json!({
            "k": k,
            "cells": cells,
            "max_angle_deviation": deviation,
            "surjective": map.is_surjective(),
            "multiplicity": map.multiplicity(),
            "minimal_b": check.minimal_b,
        }));
    }
    let stable = nondecreasing(&bs);
    let mut v = Verdict::new("boundary", ok && stable)
        .constant("n", cfg.n)
        .constant("r", cfg.boundary_r)
        .constant("bound", cfg.boundary_bound)
        .constant("depths", rows)
        .constant("b_nondecreasing", stable);
    for w in witnesses {
        v = v.witness(w);
    }
    Ok(v)
}

/// Radial fits from the root and from the vertex `(0)`.
pub fn basepoint_verdict(cfg: &SuiteConfig, depth: usize) -> Result<Verdict> {
    let f = explicit_sample(depth)?;
    let leaves = tree::sphere(depth);
    let bases = [Word::root(), Word::new(vec![0])?];
    let idx: Vec<usize> = bases
        .iter()
        .map(|b| f.index_of(b).ok_or_else(|| usage("basepoint outside the sample")))
        .collect::<Result<_>>()?;
    let verdict = check_radial_basepoint_independence(&idx, |b| {
        let g = f.rebased(b)?;
        let family = geodesic_family(&g.points, &g.points[b], &leaves)?;
        fit_radial(&g, &family, &DEFAULT_RADIAL_GRID, cfg.radial_options())
    })?;
    let fits: Vec<_> = verdict
        .fits
        .iter()
        .map(|(b, fit)| serde_json::json!({"basepoint": f.points[*b].to_string(), "lambda2": fit.lambda2, "mu2": fit.mu2}))
        .collect();
    let mut v = Verdict::new("basepoints", verdict.pass).constant("fits", fits);
    if let Some(b) = verdict.failing {
        v = v.witness(serde_json::json!({"basepoint": f.points[b].to_string()}));
    }
    Ok(v)
}

pub fn holder_verdict(cfg: &SuiteConfig, k: usize) -> Result<Verdict> {
    let (source, target, map) = explicit_boundary_map(k, 2)?;
    let fit = holder_fit(&source, &target, &map, &[0.25, 0.5, 0.75, 1.0])?;
    let b1 = fit.b_at(1.0).expect("grid contains 1");
    let (i, j) = *fit.worst_pairs.last().expect("nonempty grid");
    Ok(Verdict::new("holder", b1 <= cfg.product_bound_cap)
        .constant("k", k)
        .constant("frontier", &fit.frontier)
        .constant("cap", cfg.product_bound_cap)
        .witness([&source.cells[i], &source.cells[j]]))
}

/// Box-counting slope of the depth-`depth` image angles under the chord metric.
pub fn circle_dimension_verdict(depth: usize) -> Result<Verdict> {
    let ang = ExplicitMap.angles_at_depth(depth);
    let bd = box_dimension_estimate(ang.len(), |a, b| chord(ang[a], ang[b]), &DIMENSION_SCALES)?;
    Ok(dimension_to_verdict("circle-dimension", &bd, 1.0))
}

const DIMENSION_SCALES: [f64; 6] = [0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125];

fn dimension_to_verdict(name: &str, bd: &crate::boundary::BoxDimension, expected: f64) -> Verdict {
    Verdict::new(name, (bd.slope - expected).abs() <= 0.1)
        .constant("slope", bd.slope)
        .constant("expected", expected)
        .constant("residual", bd.residual)
        .constant("counts", &bd.counts)
}

/// The full battery on the explicit tree-to-plane map. Default depth 7.
pub fn verify_example8(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let d = cfg.depth_or(7);
    if d < 3 {
        return Err(usage("verify example8 needs depth >= 3"));
    }
    let mut report = Report::new("example8", cfg.resolved(Some(d), None));
    let f = explicit_sample(d)?;
    report.push(jump_verdict(cfg)?);
    report.push(radial_verdict(cfg, d)?);
    report.push(lsl_verdict(cfg, d)?);
    report.push(visual_verdict(cfg, "visual", &f, &(0..=d).map(|r| r as f64).collect::<Vec<_>>())?);
    report.push(product_bound_verdict(cfg, "product-bound", &f)?);
    let surj = surjectivity_verdict(cfg, d)?;
    let n_to_1 = n_to_1_verdict(cfg, "n-to-1", &f)?;
    let boundary = boundary_verdict(cfg, d.min(7))?;
    let persistence = Verdict::new("persistence", surj.pass && n_to_1.pass && boundary.pass)
        .constant("surjective", surj.pass)
        .constant("n_to_1", n_to_1.pass)
        .constant("boundary", boundary.pass);
    report.push(surj);
    report.push(n_to_1);
    report.push(stability_verdict(cfg, d)?);
    report.push(boundary);
    report.push(persistence);
    report.push(basepoint_verdict(cfg, d.min(6))?);
    report.push(holder_verdict(cfg, d.min(6))?);
    report.push(circle_dimension_verdict(8)?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Cones over compact models.

pub fn cone_product_verdict(cfg: &SuiteConfig, g: &ApproxGraph) -> Result<Verdict> {
    let c = cone_boundary_product_check(g, None, cfg.cone_slack)?;
    let (u, v) = c.worst_pair;
    Ok(Verdict::new(format!("cone-products/{}", g.model.name()), c.pass)
        .constant("levels", g.max_level)
        .constant("slack", c.slack)
        .constant("worst_deviation", c.worst_deviation)
        .constant("pairs", c.pairs)
        .witness([format!("{:?}", g.point(u)), format!("{:?}", g.point(v))]))
}

pub fn c_fn_verdict(cfg: &SuiteConfig, f: &GraphMap<'_>) -> Result<Verdict> {
    let levels = f.source.max_level;
    let grid: Vec<f64> = (1..=levels).map(|r| r as f64).collect();
    let t = c_fn_table(f, cfg.n, &grid, cfg.tuple_scan(f.len()))?;
    let m = t.excess();
    let mut v = Verdict::new("c-fn", m.is_some_and(|m| m <= cfg.c_fn_cap))
        .constant("n", t.n)
        .constant("table", t.rows.iter().map(|r| (r.r, r.c)).collect::<Vec<_>>())
        .constant("m", m)
        .constant("cap", cfg.c_fn_cap)
        .constant("exhaustive", t.exhaustive)
        .constant("tuples", t.tuples);
    if let Some(row) = t.rows.iter().filter(|r| r.c.is_some()).max_by(|a, b| {
        (a.c.unwrap() - a.r).total_cmp(&(b.c.unwrap() - b.r)).then(b.r.total_cmp(&a.r))
    }) {
        if let Some(w) = &row.witness {
            v = v.witness(f.witness(w));
        }
    }
    Ok(v)
}

/// Triples of depth-`depth` Cantor points pairwise more than `r` apart must
/// have two images at least `r/2` apart, for `r = 2^-1, …, 2^-(depth-1)`.
///
/// For each `r` the bottleneck clique over pairs with image distance
/// `< r/2` gives the most separated triple that violates the conclusion.
pub fn cantor_separation_verdict(depth: usize) -> Result<Verdict> {
    if depth < 2 {
        return Err(usage("separation check needs depth >= 2"));
    }
    let pts = cantor_points(depth);
    let img: Vec<f64> = pts.iter().map(cantor_map).collect();
    let m = pts.len();
    let radii: Vec<f64> = (1..depth).map(|k| 0.5f64.powi(k as i32)).collect();
    let half_max = radii[0] / 2.0;
    let mut edges = clique::all_pairs(m, |i, j| {
        let key = (img[i] - img[j]).abs();
        (key < half_max).then(|| Edge { weight: cantor_distance(&pts[i], &pts[j]), key, i: i as u32, j: j as u32 })
    });
    clique::sort_edges(&mut edges);
    let hits = clique::bottleneck_cliques(m, 3, &edges, &radii, |key, r| key < r / 2.0);
    let mut violations = 0;
    let mut v = Verdict::new("cantor-separation", true);
    let mut table = Vec::new();
    for (&r, hit) in radii.iter().zip(&hits) {
        let sep = hit.as_ref().map(|h| h.0);
        table.push((r, sep));
        if let Some((s, t)) = hit {
            if *s > r {
                violations += 1;
                let bits: Vec<String> = t.iter().map(|&i| pts[i].bits.iter().map(|b| char::from(b'0' + b)).collect()).collect();
                v = v.witness(serde_json::json!({"r": r, "triple": bits}));
            }
        }
    }
    v.pass = violations == 0;
    Ok(v.constant("depth", depth)
        .constant("points", m)
        .constant("triples", binomial(m as u64, 3))
        .constant("violations", violations)
        .constant("max_separation_with_close_images", table))
}

/// Cylinder covers of Cantor space for `n`, at truncation depth `n + 3`.
pub fn capacity_verdict(ns: &[usize]) -> Result<Verdict> {
    let mut ok = true;
    let mut rows = Vec::new();
    for &n in ns {
        let k = n + 3;
        let cover = CapacityCover::cantor_cylinders(n, k)?;
        let c = capacity_cover_check(&cover, &CellMetric::cantor(k))?;
        let expected = 0.5f64.powi(n as i32 - 1);
        let exact = c.diameters.iter().all(|d| (d - expected).abs() <= 1e-12);
        ok &= c.pass && exact;
        rows.push(serde_json::json!({
            "n": n,
            "k": k,
            "s": cover.s,
            "bound": cover.c * cover.s,
            "max_diameter": c.max_diameter,
            "diameters_exact": exact,
            "multiplicity": c.multiplicity,
        }));
    }
    Ok(Verdict::new("capacity", ok).constant("covers", rows))
}

pub fn cone_delta_verdict(model: &CompactModel, levels: usize, bound: f64) -> Result<Verdict> {
    let g = build_cone(model, levels)?;
    let table = PointTable::enumerate(&g, levels);
    let e = estimate_delta(&table, QuadrupleSample::Exhaustive)?;
    Ok(delta_to_verdict(&format!("delta/{}", model.name()), &table, &e, Some(bound)))
}

pub fn cantor_dimension_verdict(depth: usize) -> Result<Verdict> {
    let cp = cantor_points(depth);
    let bd = box_dimension_estimate(cp.len(), |a, b| cantor_distance(&cp[a], &cp[b]), &DIMENSION_SCALES)?;
    Ok(dimension_to_verdict("cantor-dimension", &bd, 1.0))
}

/// Cone fidelity and the Cantor-to-interval map. Default 8 levels.
pub fn verify_cone(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let levels = cfg.levels_or(8);
    if levels < 3 {
        return Err(usage("verify cone needs at least 3 levels"));
    }
    let mut report = Report::new("cone", cfg.resolved(None, Some(levels)));
    let cantor = build_cone(&CompactModel::Cantor, levels)?;
    let interval = build_cone(&CompactModel::Interval, levels)?;
    report.push(cone_product_verdict(cfg, &cantor)?);
    report.push(cone_product_verdict(cfg, &interval)?);
    let table = lift_boundary_map(&cantor, &interval, cantor_to_interval)?;
    let f = GraphMap { source: &cantor, target: &interval, table };
    report.push(n_to_1_verdict(cfg, "lift-n-to-1", &f)?);
    report.push(c_fn_verdict(cfg, &f)?);
    report.push(cantor_separation_verdict(levels)?);
    report.push(capacity_verdict(&[2, 3, 4])?);
    report.push(cone_delta_verdict(&CompactModel::Interval, 4, 8.0)?);
    report.push(cantor_dimension_verdict(10)?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Hyperbolicity of a named model.

/// Points up to which `delta` enumerates all quadruples.
const EXHAUSTIVE_QUADRUPLES: usize = 200;

fn delta_to_verdict<P>(name: &str, table: &PointTable<P>, e: &crate::metric::HyperbolicityEstimate, bound: Option<f64>) -> Verdict
where
    P: Clone + Debug + Send + Sync,
{
    let mut v = Verdict::new(name, bound.is_none_or(|b| e.delta_hat <= b + 1e-9))
        .constant("delta_hat", e.delta_hat)
        .constant("points", table.len())
        .constant("quadruples", e.quadruples)
        .constant("exhaustive", e.exhaustive);
    if let Some(b) = bound {
        v = v.constant("bound", b);
    }
    let quad: Vec<String> = e.witness.iter().map(|&p| format!("{:?}", table.point(p).expect("witness in table"))).collect();
    v.witness(quad)
}

fn table_delta<P>(cfg: &SuiteConfig, name: &str, table: PointTable<P>, bound: Option<f64>) -> Result<Verdict>
where
    P: Clone + Debug + Send + Sync,
{
    let sample = if table.len() <= EXHAUSTIVE_QUADRUPLES {
        QuadrupleSample::Exhaustive
    } else {
        QuadrupleSample::Seeded { seed: cfg.seed, count: cfg.samples_or(DEFAULT_SAMPLES) }
    };
    let e = estimate_delta(&table, sample)?;
    Ok(delta_to_verdict(name, &table, &e, bound))
}

/// `f2tree` (depth, default 4), `plane` (400 seeded points in the
/// radius-`depth` ball, default 6), `cantor`, `interval`, `circle` (cones,
/// default 4 levels), `comb` (spine `depth`, default 12), or a path to a
/// compact-model JSON file.
pub fn delta(model: &str, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let (verdict, resolved) = match model {
        "f2tree" => {
            let d = cfg.depth_or(4);
            (table_delta(cfg, "delta/f2tree", PointTable::enumerate(&TREE, d), Some(0.0))?, cfg.resolved(Some(d), None))
        }
        "plane" => {
            let d = cfg.depth_or(6);
            let pts = PLANE.sample_ball(d as f64, 400, cfg.seed);
            let table = PointTable::from_points(&PLANE, pts);
            (table_delta(cfg, "delta/plane", table, Some(4.0))?, cfg.resolved(Some(d), None))
        }
        "comb" => {
            let d = cfg.depth_or(12);
            let (comb, _) = comb_counterexample(d as u32)?;
            let table = PointTable::from_points(&comb, comb.points());
            (table_delta(cfg, "delta/comb", table, Some(0.0))?, cfg.resolved(Some(d), None))
        }
        name => {
            let cone = match name {
                "cantor" => CompactModel::Cantor,
                "interval" => CompactModel::Interval,
                "circle" => CompactModel::Circle,
                path if Path::new(path).is_file() => CompactModel::from_json_file(Path::new(path))?,
                other => return Err(usage(format!("unknown model {other:?}"))),
            };
            let default = cone.max_level().map_or(4, |m| m.min(4));
            let l = cfg.levels_or(default);
            let g = build_cone(&cone, l)?;
            let bound = (!matches!(cone, CompactModel::CustomNet(_))).then_some(8.0);
            let name = format!("delta/{}", cone.name());
            (table_delta(cfg, &name, PointTable::enumerate(&g, l), bound)?, cfg.resolved(None, Some(l)))
        }
    };
    let mut report = Report::new("delta", resolved);
    report.push(verdict);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Single checks on a named map.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Lsl,
    Radial,
    Visual,
    Surjective,
    NTo1,
    Stability,
    ProductBound,
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lsl" => Check::Lsl,
            "radial" => Check::Radial,
            "visual" => Check::Visual,
            "surjective" => Check::Surjective,
            "n-to-1" => Check::NTo1,
            "stability" => Check::Stability,
            "product-bound" => Check::ProductBound,
            other => return Err(usage(format!("unknown check {other:?}"))),
        })
    }
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Lsl => "lsl",
            Check::Radial => "radial",
            Check::Visual => "visual",
            Check::Surjective => "surjective",
            Check::NTo1 => "n-to-1",
            Check::Stability => "stability",
            Check::ProductBound => "product-bound",
        }
    }
}

pub const PROBE_MAPS: [&str; 7] = ["example8", "comb", "fold", "identity", "constant", "ray", "cantor-lift"];

/// A sampled map with the geodesic family used by ray-wise checks, and the
/// target sample for surjectivity.
struct Probe<'a, S: SpaceModel, T: SpaceModel> {
    map: SampledMap<'a, S, T>,
    family: Vec<Vec<usize>>,
    targets: Vec<T::Point>,
}

fn run_probe<S, T>(
    cfg: &SuiteConfig,
    check: Check,
    p: &Probe<'_, S, T>,
    distance_to_image: &(dyn Fn(&T::Point) -> f64 + Sync),
) -> Result<Verdict>
where
    S: SpaceModel,
    T: SpaceModel,
    T::Point: Debug,
{
    let f = &p.map;
    let name = check.name();
    match check {
        Check::Lsl => {
            let fit = fit_lsl(f, &cfg.pair_sample(f.len()), &[1.0, 1.25, 1.5, 2.0, 3.0])?;
            // A finite sample always admits constants; the fit is the outcome.
            Ok(Verdict::new(name, true)
                .constant("lambda1", fit.lambda1)
                .constant("mu1", fit.mu1)
                .constant("frontier", &fit.frontier)
                .constant("pairs", fit.pairs)
                .constant("exhaustive", fit.exhaustive)
                .witness(f.witness(&[fit.worst_pair.0, fit.worst_pair.1])))
        }
        Check::Radial => {
            let fit = fit_radial(f, &p.family, &DEFAULT_RADIAL_GRID, cfg.radial_options())?;
            Ok(radial_to_verdict(name, f, &fit))
        }
        Check::Visual => {
            let top = (0..f.len()).map(|i| f.source_product(i, i)).fold(0.0, f64::max).ceil() as usize;
            let grid: Vec<f64> = (0..=top.min(12)).map(|r| r as f64).collect();
            visual_verdict(cfg, name, f, &grid)
        }
        Check::Surjective => {
            let s = check_coarse_surjectivity(&p.targets, distance_to_image, cfg.surjectivity_ceiling)?;
            Ok(Verdict::new(name, s.pass)
                .constant("s", s.s)
                .constant("ceiling", s.ceiling)
                .constant("samples", s.samples)
                .witness(serde_json::json!({"index": s.worst_index, "point": s.worst_point})))
        }
        Check::NTo1 => n_to_1_verdict(cfg, name, f),
        Check::Stability => {
            let rays = p
                .family
                .iter()
                .map(|path| {
                    let image: Vec<T::Point> = path.iter().map(|&i| f.images[i].clone()).collect();
                    let geodesic = f.target.geodesic(&image[0], image.last().expect("nonempty path"), 0.25)?;
                    let (a, b) = (f.describe(path[0]).0, f.describe(*path.last().expect("nonempty path")).0);
                    Ok(RayImage { depth: path.len() - 1, label: format!("{a} -> {b}"), image, geodesic })
                })
                .collect::<Result<Vec<_>>>()?;
            let s = check_ray_stability(f.target, &rays)?;
            Ok(Verdict::new(name, s.h <= cfg.stability_cap)
                .constant("h", s.h)
                .constant("cap", cfg.stability_cap)
                .constant("per_depth", &s.per_depth)
                .constant("rays", s.rays)
                .witness(serde_json::json!({"ray": s.worst_ray})))
        }
        Check::ProductBound => product_bound_verdict(cfg, name, f),
    }
}

fn nearest_image<'t, T: SpaceModel>(target: &'t T, images: &[T::Point]) -> impl Fn(&T::Point) -> f64 + Sync + 't
where
    T::Point: Sync,
{
    let images = images.to_vec();
    move |q| images.iter().map(|p| target.distance(q, p)).fold(f64::INFINITY, f64::min)
}

fn tree_probe(depth: usize, g: impl Fn(&Word) -> Word) -> Result<Probe<'static, FreeGroupTree, FreeGroupTree>> {
    let points = tree::ball(depth);
    let family = geodesic_family(&points, &Word::root(), &tree::sphere(depth))?;
    let map = SampledMap::new(&TREE, &TREE, points.clone(), g)?;
    Ok(Probe { map, family, targets: points })
}

/// Runs one checker on one named map. Tree-sourced maps (`example8`,
/// `fold`, `identity`, `constant`, `ray`) are sampled on the depth-`depth`
/// ball (default 6) with root geodesics to the sphere; `comb` uses a spine
/// of `depth` (default 12) with its spine and teeth as rays; `cantor-lift`
/// is the lifted Cantor-to-interval map on `levels` (default 6).
pub fn probe(map: &str, check: Check, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let verdict;
    let resolved;
    match map {
        "example8" | "ray" => {
            let d = cfg.depth_or(6);
            let points = tree::ball(d);
            let family = geodesic_family(&points, &Word::root(), &tree::sphere(d))?;
            let radius = 6.0f64.min(d.saturating_sub(1) as f64);
            let targets = PLANE.sample_ball(radius, cfg.samples_or(10_000), cfg.seed);
            if map == "example8" {
                let map = SampledMap::new(&TREE, &PLANE, points, |w| ExplicitMap.map_vertex(w))?;
                let p = Probe { map, family, targets };
                verdict = run_probe(cfg, check, &p, &|q| ExplicitMap.distance_to_image(q, d))?;
            } else {
                // Every vertex goes to the ray at angle 0, at its depth.
                let map = SampledMap::new(&TREE, &PLANE, points, |w| PolarPoint { r: w.len() as f64, phi: 0.0 })?;
                let p = Probe { map, family, targets };
                verdict = run_probe(cfg, check, &p, &|q| plane::distance_to_radial_segment(q, 0.0, 0.0, d as f64))?;
            }
            resolved = cfg.resolved(Some(d), None);
        }
        "fold" | "identity" | "constant" => {
            let d = cfg.depth_or(6);
            let p = match map {
                "fold" => tree_probe(d, fold_first_digit)?,
                "identity" => tree_probe(d, Word::clone)?,
                _ => tree_probe(d, |_| Word::root())?,
            };
            let dist = nearest_image(&TREE, &p.map.images);
            verdict = run_probe(cfg, check, &p, &dist)?;
            resolved = cfg.resolved(Some(d), None);
        }
        "comb" => {
            let d = cfg.depth_or(12);
            let (comb, images) = comb_counterexample(d as u32)?;
            let (spine, teeth) = comb.ray_family();
            let mut family = vec![spine];
            family.extend(teeth);
            let points = comb.points();
            let map = SampledMap::with_images(&comb, &PLANE, points, images.clone(), 0)?;
            let targets = PLANE.sample_ball(d as f64 / 2.0, cfg.samples_or(2_000), cfg.seed);
            let p = Probe { map, family, targets };
            let dist = nearest_image(&PLANE, &images);
            verdict = run_probe(cfg, check, &p, &dist)?;
            resolved = cfg.resolved(Some(d), None);
        }
        "cantor-lift" => {
            let l = cfg.levels_or(6);
            let cantor = build_cone(&CompactModel::Cantor, l)?;
            let interval = build_cone(&CompactModel::Interval, l)?;
            let table = lift_boundary_map(&cantor, &interval, cantor_to_interval)?;
            let family: Vec<Vec<usize>> = cantor
                .level_vertices(l)
                .map(|v| (0..=l).map(|k| cantor.snap(k, cantor.point(v))).collect())
                .collect();
            let map = SampledMap::with_images(&cantor, &interval, (0..cantor.len()).collect(), table.clone(), 0)?;
            let targets: Vec<usize> = (0..interval.len()).collect();
            let p = Probe { map, family, targets };
            let dist = nearest_image(&interval, &table);
            verdict = run_probe(cfg, check, &p, &dist)?;
            resolved = cfg.resolved(None, Some(l));
        }
        other => return Err(usage(format!("unknown map {other:?} (expected one of {})", PROBE_MAPS.join(", ")))),
    }
    let mut report = Report::new(format!("probe/{map}"), resolved);
    report.push(verdict);
    Ok(report)
}

/// Pairs `(tooth end n, spine n)` of the comb, with their two products.
pub fn comb_witness_family(spine: u32) -> Result<Vec<(u32, f64, f64)>> {
    let (comb, images) = comb_counterexample(spine)?;
    let f = SampledMap::with_images(&comb, &PLANE, comb.points(), images, 0)?;
    (1..=spine)
        .map(|n| {
            let a = f.index_of(&comb.tooth_end(n)).ok_or_else(|| usage("tooth end missing"))?;
            let b = f.index_of(&CombPoint::Spine(n)).ok_or_else(|| usage("spine vertex missing"))?;
            Ok((n, f.source_product(a, b), f.image_product(a, b)))
        })
        .collect()
}
