//! Gromov boundaries at a finite truncation depth.
//!
//! A [`BoundaryTruncation`] lists the cells of depth `k` together with their
//! pairwise Gromov products at the basepoint, clipped at `k`. A clipped value
//! means "at least `k`", never "exactly `k`".

use serde::{Deserialize, Serialize};

use crate::clique::{self, Edge};
use crate::error::{usage, Error, Result};
use crate::maps::{angle_unit, vertex_angle_index};
use crate::tree::{self, Word};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisualMetricParams {
    pub k: f64,
    pub c: f64,
}

impl VisualMetricParams {
    pub fn new(k: f64, c: f64) -> Result<Self> {
        if !(k > 1.0) || !(c >= 1.0) {
            return Err(usage(format!("visual metric needs K > 1 and C >= 1, got K={k}, C={c}")));
        }
        Ok(VisualMetricParams { k, c })
    }
}

/// The canonical visual distance `K^-product`.
pub fn visual_distance(params: &VisualMetricParams, product: f64) -> f64 {
    params.k.powf(-product)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichVerdict {
    pub pass: bool,
    /// Extremes of `d / K^-product` over distinct cells.
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub worst_pair: (usize, usize),
}

/// Checks `K^-p / C ≤ d ≤ C·K^-p` on every pair of distinct cells.
pub fn visual_sandwich(
    params: &VisualMetricParams,
    t: &BoundaryTruncation,
    d: impl Fn(usize, usize) -> f64,
) -> SandwichVerdict {
    let mut lo = (f64::INFINITY, (0, 0));
    let mut hi = (0.0f64, (0, 0));
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let ratio = d(i, j) / visual_distance(params, t.product(i, j));
            if ratio < lo.0 {
                lo = (ratio, (i, j));
            }
            if ratio > hi.0 {
                hi = (ratio, (i, j));
            }
        }
    }
    let low_bad = lo.0 < 1.0 / params.c;
    let high_bad = hi.0 > params.c;
    let worst_pair = if low_bad || (!high_bad && lo.0 * params.c < params.c / hi.0) { lo.1 } else { hi.1 };
    SandwichVerdict { pass: !low_bad && !high_bad, ratio_min: lo.0, ratio_max: hi.0, worst_pair }
}

/// Cells of a boundary at depth `depth` with their clipped products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTruncation {
    pub depth: usize,
    pub cells: Vec<String>,
    pub products: Vec<Vec<f64>>,
}

impl BoundaryTruncation {
    pub fn from_products(depth: usize, cells: Vec<String>, product: impl Fn(usize, usize) -> f64) -> Self {
        let clip = depth as f64;
        let n = cells.len();
        let mut products = vec![vec![clip; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let p = product(i, j).clamp(0.0, clip);
                products[i][j] = p;
                products[j][i] = p;
            }
        }
        BoundaryTruncation { depth, cells, products }
    }

    /// The tree boundary: depth-`k` words, products are common-prefix lengths.
    pub fn tree(k: usize) -> Result<Self> {
        let cells = tree::truncated_boundary(k)?;
        Ok(Self::from_products(k, cells.iter().map(|c| c.digits.to_string()).collect(), |i, j| {
            cells[i].product(&cells[j]) as f64
        }))
    }

    /// Cantor space: depth-`k` bit strings, products are common-prefix lengths.
    pub fn cantor(k: usize) -> Self {
        let cells: Vec<Vec<u8>> = (0..1usize << k).map(|i| crate::maps::CantorPoint::from_index(k, i).bits).collect();
        let labels = cells.iter().map(|b| b.iter().map(|d| char::from(b'0' + d)).collect()).collect();
        Self::from_products(k, labels, |i, j| cells[i].iter().zip(&cells[j]).take_while(|(a, b)| a == b).count() as f64)
    }

    /// The circle at infinity of the plane, cut into `4·3^(k-1)` arcs centred
    /// at the depth-`k` image angles `i·unit`. Products are those of the arc
    /// centres, `-ln sin(Δφ/2)`.
    pub fn angular(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(usage("boundary truncation depth must be positive"));
        }
        let n = tree::sphere_size(k);
        let unit = angle_unit(k);
        Ok(Self::from_products(k, (0..n).map(|i| format!("a{i}")).collect(), |i, j| {
            ideal_product(i as f64 * unit, j as f64 * unit)
        }))
    }

    /// Products `min(depth, log_K(1 / d))` from a metric on the cells.
    pub fn from_metric(depth: usize, cells: Vec<String>, base: f64, d: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_products(depth, cells, |i, j| {
            let dist = d(i, j);
            if dist > 0.0 {
                -dist.ln() / base.ln()
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn clip(&self) -> f64 {
        self.depth as f64
    }

    pub fn product(&self, i: usize, j: usize) -> f64 {
        self.products[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.cells.iter().position(|c| c == label)
    }

    /// Symmetric, diagonal equal to the clip, and bounded by it.
    pub fn validate(&self) -> Result<()> {
        let clip = self.clip();
        for (i, row) in self.products.iter().enumerate() {
            if row.len() != self.len() {
                return Err(Error::Model("product table is not square".into()));
            }
            if row[i] != clip {
                return Err(Error::Model(format!("cell {i} has self-product {} instead of {clip}", row[i])));
            }
            for (j, &p) in row.iter().enumerate() {
                if p != self.products[j][i] || !(0.0..=clip).contains(&p) {
                    return Err(Error::Model(format!("product ({i},{j}) = {p} breaks symmetry or clipping")));
                }
            }
        }
        Ok(())
    }
}

/// Gromov product at the origin of the ideal points at angles `a`, `b`.
pub fn ideal_product(a: f64, b: f64) -> f64 {
    let s = (crate::plane::angle_gap(a, b) / 2.0).sin();
    if s > 0.0 {
        -s.ln()
    } else {
        f64::INFINITY
    }
}

/// `q ∈ U(p, r)`, i.e. `(p, q) ≥ r`, for cells `p`, `q`.
pub fn u_membership(t: &BoundaryTruncation, p: usize, r: f64, q: usize) -> Result<bool> {
    if r > t.clip() {
        return Err(Error::Unresolved { r, depth: t.clip() });
    }
    if p >= t.len() {
        return Err(Error::UnknownPoint(p));
    }
    if q >= t.len() {
        return Err(Error::UnknownPoint(q));
    }
    Ok(t.product(p, q) >= r)
}

/// `U(p, r)` membership of a tree vertex `v`, whose product with the cell `p`
/// is their common prefix length.
pub fn u_membership_vertex(p: &tree::BoundaryWord, r: f64, v: &Word) -> Result<bool> {
    if r > p.depth() as f64 {
        return Err(Error::Unresolved { r, depth: p.depth() as f64 });
    }
    Ok(p.digits.common_prefix_len(v) as f64 >= r)
}

/// A map between the cells of two truncations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellMap {
    pub target_len: usize,
    /// `None` for cells whose representatives could not be classified.
    pub table: Vec<Option<usize>>,
    /// Largest shortfall `clip - (t₁, t₂)` between target cells of
    /// representatives of one source cell.
    pub defect: f64,
}

impl CellMap {
    pub fn unresolved(&self) -> Vec<usize> {
        self.table.iter().enumerate().filter(|(_, t)| t.is_none()).map(|(i, _)| i).collect()
    }

    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.target_len];
        for (i, t) in self.table.iter().enumerate() {
            if let Some(t) = t {
                pre[*t].push(i);
            }
        }
        pre
    }

    /// Target cells missed by the map.
    pub fn missed(&self) -> Vec<usize> {
        self.preimages().iter().enumerate().filter(|(_, p)| p.is_empty()).map(|(i, _)| i).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.missed().is_empty()
    }

    pub fn multiplicity(&self) -> usize {
        self.preimages().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Preimage count after merging source cells with product
    /// `≥ clip - slack` (adjacent cells).
    pub fn multiplicity_up_to_adjacency(&self, source: &BoundaryTruncation, slack: f64) -> usize {
        let near = source.clip() - slack;
        self.preimages()
            .iter()
            .map(|pre| {
                let mut clusters: Vec<Vec<usize>> = Vec::new();
                for &c in pre {
                    let hits: Vec<usize> = clusters
                        .iter()
                        .enumerate()
                        .filter(|(_, cl)| cl.iter().any(|&d| source.product(c, d) >= near))
                        .map(|(i, _)| i)
                        .collect();
                    let mut merged = vec![c];
                    for &h in hits.iter().rev() {
                        merged.extend(clusters.remove(h));
                    }
                    clusters.push(merged);
                }
                clusters.len()
            })
            .max()
            .unwrap_or(0)
    }

    /// `other ∘ self`.
    pub fn compose(&self, other: &CellMap) -> CellMap {
        CellMap {
            target_len: other.target_len,
            table: self.table.iter().map(|t| t.and_then(|t| other.table[t])).collect(),
            defect: self.defect.max(other.defect),
        }
    }
}

/// Induces a cell map from the target cells of each source cell's
/// representatives (`None` = representative too shallow to classify).
pub fn induce_boundary_map(
    source_len: usize,
    target: &BoundaryTruncation,
    classify: impl Fn(usize) -> Vec<Option<usize>>,
) -> CellMap {
    let mut defect = 0.0f64;
    let table = (0..source_len)
        .map(|i| {
            let hits: Vec<usize> = classify(i).into_iter().flatten().collect();
            for (a, &x) in hits.iter().enumerate() {
                for &y in &hits[a + 1..] {
                    defect = defect.max(target.clip() - target.product(x, y));
                }
            }
            hits.first().copied()
        })
        .collect();
    CellMap { target_len: target.len(), table, defect }
}

/// The boundary map of the explicit tree-to-plane map at depth `k`: each
/// cell is represented by its depth-`k + extra` descendants, classified by
/// the nearest depth-`k` angular cell.
pub fn explicit_boundary_map(k: usize, extra: usize) -> Result<(BoundaryTruncation, BoundaryTruncation, CellMap)> {
    let source = BoundaryTruncation::tree(k)?;
    let target = BoundaryTruncation::angular(k)?;
    let words = tree::sphere(k);
    let n = target.len() as i64;
    let scale = 3i64.pow(extra as u32);
    let map = induce_boundary_map(source.len(), &target, |i| {
        let mut reps = vec![words[i].clone()];
        for _ in 0..extra {
            reps = reps.iter().flat_map(|w| w.children().collect::<Vec<_>>()).collect();
        }
        reps.iter()
            .map(|w| {
                let idx = vertex_angle_index(w).ok()?;
                let rounded = (idx as f64 / scale as f64).round() as i64;
                Some(rounded.rem_euclid(n) as usize)
            })
            .collect()
    });
    Ok((source, target, map))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNTo1Verdict {
    pub n: usize,
    pub r: f64,
    pub bound: f64,
    pub pass: bool,
    /// Smallest `B` for which the check passes; `None` when no tuple
    /// satisfies the precondition.
    pub minimal_b: Option<f64>,
    /// Tuple realizing `minimal_b`.
    pub witness: Option<Vec<usize>>,
}

/// Every `(n+1)`-tuple of distinct cells with pairwise products `< r` must
/// have an image pair with product `≤ B`.
pub fn boundary_n_to_1_check(
    source: &BoundaryTruncation,
    target: &BoundaryTruncation,
    map: &CellMap,
    n: usize,
    r: f64,
    bound: f64,
) -> Result<BoundaryNTo1Verdict> {
    if n == 0 {
        return Err(usage("n-to-1 checks need n >= 1"));
    }
    if let Some(u) = map.unresolved().first() {
        return Err(Error::Model(format!("cell {u} has no image")));
    }
    let img = |i: usize| map.table[i].expect("resolved");
    let mut edges = clique::all_pairs(source.len(), |i, j| {
        let key = source.product(i, j);
        (key < r).then(|| Edge { weight: target.product(img(i), img(j)), key, i: i as u32, j: j as u32 })
    });
    clique::sort_edges(&mut edges);
    let hit = clique::bottleneck_clique(source.len(), n + 1, edges.iter());
    let minimal_b = hit.as_ref().map(|h| h.0);
    Ok(BoundaryNTo1Verdict {
        n,
        r,
        bound,
        pass: minimal_b.is_none_or(|b| b <= bound),
        minimal_b,
        witness: hit.map(|h| h.1),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    /// `(A, B(A))` for each grid value of `A`.
    pub frontier: Vec<(f64, f64)>,
    pub worst_pairs: Vec<(usize, usize)>,
}

impl HolderFit {
    pub fn b_at(&self, a: f64) -> Option<f64> {
        self.frontier.iter().find(|(x, _)| *x == a).map(|(_, b)| *b)
    }
}

/// `B(A) = max(0, max over cell pairs of A·(ξ₁,ξ₂) − (g ξ₁, g ξ₂))`.
pub fn holder_fit(source: &BoundaryTruncation, target: &BoundaryTruncation, map: &CellMap, a_grid: &[f64]) -> Result<HolderFit> {
    if let Some(u) = map.unresolved().first() {
        return Err(Error::Model(format!("cell {u} has no image")));
    }
    let img = |i: usize| map.table[i].expect("resolved");
    let mut frontier = Vec::with_capacity(a_grid.len());
    let mut worst_pairs = Vec::with_capacity(a_grid.len());
    for &a in a_grid {
        if !(a > 0.0 && a <= 1.0) {
            return Err(usage(format!("Hölder exponent grid must lie in (0, 1], got {a}")));
        }
        let mut best = (0.0f64, (0, 0));
        for i in 0..source.len() {
            for j in i + 1..source.len() {
                let gap = a * source.product(i, j) - target.product(img(i), img(j));
                if gap > best.0 {
                    best = (gap, (i, j));
                }
            }
        }
        frontier.push((a, best.0));
        worst_pairs.push(best.1);
    }
    Ok(HolderFit { frontier, worst_pairs })
}

/// Point-to-point distance bounds between cells viewed as sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellMetric {
    pub labels: Vec<String>,
    pub inf: Vec<Vec<f64>>,
    pub sup: Vec<Vec<f64>>,
}

impl CellMetric {
    /// Cells are points: `inf = sup = d`.
    pub fn points(labels: Vec<String>, d: impl Fn(usize, usize) -> f64) -> Self {
        let n = labels.len();
        let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { d(i, j) }).collect()).collect();
        CellMetric { labels, inf: m.clone(), sup: m }
    }

    /// Depth-`k` cylinders of Cantor space with `Σ |x_i - y_i| / 2^i`: the
    /// prefixes contribute exactly, free tails add up to `2^-k`.
    pub fn cantor(k: usize) -> Self {
        let cells: Vec<Vec<u8>> = (0..1usize << k).map(|i| crate::maps::CantorPoint::from_index(k, i).bits).collect();
        let prefix = |a: &[u8], b: &[u8]| {
            a.iter().zip(b).enumerate().map(|(i, (x, y))| if x != y { 0.5f64.powi(i as i32 + 1) } else { 0.0 }).sum::<f64>()
        };
        let tail = 0.5f64.powi(k as i32);
        let inf: Vec<Vec<f64>> = cells.iter().map(|a| cells.iter().map(|b| prefix(a, b)).collect()).collect();
        let sup = inf.iter().map(|row| row.iter().map(|d| d + tail).collect()).collect();
        let labels = cells.iter().map(|b| b.iter().map(|d| char::from(b'0' + d)).collect()).collect();
        CellMetric { labels, inf, sup }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A cover by unions of cells, tested at scale `s` with bound `c·s` and
/// multiplicity target `m + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityCover {
    pub cover: Vec<Vec<usize>>,
    pub s: f64,
    pub c: f64,
    pub m: usize,
}

impl CapacityCover {
    /// Cantor cylinders with the first `n - 1` coordinates fixed, at
    /// truncation depth `k ≥ n`, with `s = 2^(-n-1)`, `c = 4`, `m = 0`.
    pub fn cantor_cylinders(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k < n {
            return Err(usage(format!("cylinder cover needs 1 <= n <= k, got n={n}, k={k}")));
        }
        let width = 1usize << (k - n + 1);
        let cover = (0..1usize << (n - 1)).map(|p| (p * width..(p + 1) * width).collect()).collect();
        Ok(CapacityCover { cover, s: 0.5f64.powi(n as i32 + 1), c: 4.0, m: 0 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityVerdict {
    pub pass: bool,
    pub max_diameter: f64,
    pub diameters: Vec<f64>,
    pub worst_member: usize,
    /// Most members met by a closed `s`-ball around one cell.
    pub multiplicity: usize,
    pub worst_center: usize,
}

pub fn capacity_cover_check(cover: &CapacityCover, metric: &CellMetric) -> Result<CapacityVerdict> {
    let n = metric.len();
    let mut covered = vec![false; n];
    for member in &cover.cover {
        for &c in member {
            if c >= n {
                return Err(Error::UnknownPoint(c));
            }
            covered[c] = true;
        }
    }
    if let Some(u) = covered.iter().position(|c| !c) {
        return Err(Error::NotCovering(u));
    }
    let diameters: Vec<f64> = cover
        .cover
        .iter()
        .map(|member| {
            member
                .iter()
                .flat_map(|&a| member.iter().map(move |&b| metric.sup[a][b]))
                .fold(0.0, f64::max)
        })
        .collect();
    let (worst_member, max_diameter) = diameters
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let (worst_center, multiplicity) = (0..n)
        .map(|x| {
            let met = cover
                .cover
                .iter()
                .filter(|member| member.iter().any(|&c| metric.inf[x][c] <= cover.s))
                .count();
            (x, met)
        })
        .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    Ok(CapacityVerdict {
        pass: max_diameter <= cover.c * cover.s && multiplicity <= cover.m + 1,
        max_diameter,
        diameters,
        worst_member,
        multiplicity,
        worst_center,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDimension {
    pub slope: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub counts: Vec<(f64, usize)>,
}

/// Least-squares slope of `ln N(s)` against `ln(1/s)`, with `N(s)` the size
/// of a greedy cover by closed `s`-balls around points.
pub fn box_dimension_estimate(n: usize, d: impl Fn(usize, usize) -> f64 + Sync, scales: &[f64]) -> Result<BoxDimension> {
    if scales.len() < 3 {
        return Err(usage("box dimension needs at least 3 scales"));
    }
    if scales.iter().any(|&s| !(s > 0.0)) {
        return Err(usage("box dimension scales must be positive"));
    }
    if scales.iter().all(|&s| s == scales[0]) {
        return Err(usage("box dimension scales must not all coincide"));
    }
    if n == 0 {
        return Err(usage("box dimension of an empty set"));
    }
    let counts: Vec<(f64, usize)> = crate::par::map_slice(scales, |&s| {
        let mut covered = vec![false; n];
        let mut count = 0;
        for x in 0..n {
            if covered[x] {
                continue;
            }
            count += 1;
            for (y, c) in covered.iter_mut().enumerate() {
                if !*c && d(x, y) <= s {
                    *c = true;
                }
            }
        }
        (s, count)
    });
    let xs: Vec<f64> = counts.iter().map(|(s, _)| -s.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|(_, c)| (*c as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
    Ok(BoxDimension { slope, residual, counts })
}

/// Chord distance `2|sin(Δφ/2)|` on the unit circle.
pub fn chord(a: f64, b: f64) -> f64 {
    2.0 * (crate::plane::angle_gap(a, b) / 2.0).sin()
}
