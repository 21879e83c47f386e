//! Hyperbolic cones over compact metric spaces, realized as
//! hyperbolic-approximation graphs.
//!
//! Level `k` of the graph is a `2^-k`-net of the compact space `Z`. Two
//! vertices of the same level are joined when their net points are within
//! `2·2^-k`, vertices of adjacent levels `k`, `k+1` when within `2·2^-k`.
//! All edges have length 1 and the graph metric is the path metric. The level-0
//! vertex is the basepoint, and every level-`k` vertex is exactly `k` from it.

use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clique::{self, Edge};
use crate::error::{usage, Error, Result};
use crate::maps::{cantor_distance, cantor_map, CantorPoint, RadialExtension, RayedSpace};
use crate::metric::{seeded_tuples, SpaceModel};
use crate::par;
use crate::sample::FiniteMap;

const NET_TOL: f64 = 1e-12;

/// A point of a compact model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZPoint {
    Bits(Vec<u8>),
    Real(f64),
    Index(usize),
}

/// Explicit finite presentation: a distance matrix and, per level, the
/// indices of the net points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomNet {
    #[serde(default)]
    pub labels: Vec<String>,
    pub distances: Vec<Vec<f64>>,
    pub levels: Vec<Vec<usize>>,
}

/// A compact metric space of diameter at most 1 with dyadic nets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CompactModel {
    /// `{0,1}^ℕ` with `Σ |x_i - y_i| / 2^i`; level `k` = depth-`k` cylinders.
    Cantor,
    /// `[0,1]`; level `k` = midpoints `(i + ½) / 2^k`.
    Interval,
    /// Circle of length 2 with arc metric; level `k ≥ 1` = `2^(k+1)` equally
    /// spaced points, level 0 one point.
    Circle,
    CustomNet(CustomNet),
}

impl CompactModel {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CompactModel::Cantor => "cantor",
            CompactModel::Interval => "interval",
            CompactModel::Circle => "circle",
            CompactModel::CustomNet(_) => "custom-net",
        }
    }

    pub fn max_level(&self) -> Option<usize> {
        match self {
            CompactModel::CustomNet(c) => Some(c.levels.len().saturating_sub(1)),
            _ => None,
        }
    }

    pub fn net(&self, level: usize) -> Result<Vec<ZPoint>> {
        let k = level as u32;
        Ok(match self {
            CompactModel::Cantor => (0..1usize << k)
                .map(|i| ZPoint::Bits(CantorPoint::from_index(level, i).bits))
                .collect(),
            CompactModel::Interval => (0..1u64 << k)
                .map(|i| ZPoint::Real((i as f64 + 0.5) / (1u64 << k) as f64))
                .collect(),
            CompactModel::Circle => {
                if level == 0 {
                    vec![ZPoint::Real(0.0)]
                } else {
                    (0..1u64 << (k + 1)).map(|i| ZPoint::Real(i as f64 / (1u64 << k) as f64)).collect()
                }
            }
            CompactModel::CustomNet(c) => c
                .levels
                .get(level)
                .ok_or_else(|| Error::Model(format!("custom net has no level {level}")))?
                .iter()
                .map(|&i| ZPoint::Index(i))
                .collect(),
        })
    }

    /// Distance between two points of this model.
    ///
    /// # Panics
    /// If the points are of a kind foreign to the model.
    pub fn distance(&self, a: &ZPoint, b: &ZPoint) -> f64 {
        match (self, a, b) {
            (CompactModel::Cantor, ZPoint::Bits(x), ZPoint::Bits(y)) => {
                cantor_distance(&CantorPoint { bits: x.clone() }, &CantorPoint { bits: y.clone() })
            }
            (CompactModel::Interval, ZPoint::Real(x), ZPoint::Real(y)) => (x - y).abs(),
            (CompactModel::Circle, ZPoint::Real(x), ZPoint::Real(y)) => {
                let t = (x - y).rem_euclid(2.0);
                t.min(2.0 - t)
            }
            (CompactModel::CustomNet(c), ZPoint::Index(i), ZPoint::Index(j)) => c.distances[*i][*j],
            _ => panic!("point {a:?} or {b:?} does not belong to a {} model", self.name()),
        }
    }

    /// Index of the net point of `level` nearest to `z` (first on ties).
    pub fn nearest(&self, net: &[ZPoint], z: &ZPoint) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in net.iter().enumerate() {
            let d = self.distance(p, z);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    /// Checks every level `≤ max_level`: a single point at level 0, pairwise
    /// separation `≥ 2^-k`, and density `≤ 2^-k` against the finest level.
    pub fn validate(&self, max_level: usize) -> Result<Vec<Vec<ZPoint>>> {
        if let CompactModel::CustomNet(c) = self {
            let n = c.distances.len();
            if c.distances.iter().any(|row| row.len() != n) {
                return Err(Error::Model("custom-net distance matrix is not square".into()));
            }
            if c.levels.iter().flatten().any(|&i| i >= n) {
                return Err(Error::Model("custom-net level refers to an unknown point".into()));
            }
            if let Some(m) = self.max_level() {
                if max_level > m {
                    return Err(Error::Model(format!("custom net only has levels up to {m}")));
                }
            }
        }
        let nets = (0..=max_level).map(|k| self.net(k)).collect::<Result<Vec<_>>>()?;
        if nets[0].len() != 1 {
            return Err(Error::Model("level 0 must be a single point".into()));
        }
        let finest = &nets[max_level];
        for (k, net) in nets.iter().enumerate() {
            let scale = 0.5f64.powi(k as i32);
            for (i, a) in net.iter().enumerate() {
                for b in &net[i + 1..] {
                    let d = self.distance(a, b);
                    if d < scale - NET_TOL {
                        return Err(Error::Model(format!(
                            "level {k} is not 2^-{k}-separated: {a:?} and {b:?} are {d} apart"
                        )));
                    }
                }
            }
            for z in finest {
                let d = self.distance(&net[self.nearest(net, z)], z);
                if d > scale + NET_TOL {
                    return Err(Error::Model(format!("level {k} is not 2^-{k}-dense: {z:?} is {d} away")));
                }
            }
            for a in finest {
                for b in finest {
                    if self.distance(a, b) > 1.0 + NET_TOL {
                        return Err(Error::Model("model diameter exceeds 1".into()));
                    }
                }
            }
        }
        Ok(nets)
    }
}

/// The hyperbolic-approximation graph over a [`CompactModel`], up to level `K`.
#[derive(Clone, Debug)]
pub struct ApproxGraph {
    pub model: CompactModel,
    pub max_level: usize,
    levels: Vec<Vec<ZPoint>>,
    level_start: Vec<usize>,
    vertex_level: Vec<usize>,
    dist: Vec<u16>,
}

/// Builds the approximation graph, validating the nets first.
pub fn build_cone(model: &CompactModel, max_level: usize) -> Result<ApproxGraph> {
    let levels = model.validate(max_level)?;
    let mut level_start = Vec::with_capacity(levels.len() + 1);
    let mut vertex_level = Vec::new();
    let mut acc = 0;
    for (k, net) in levels.iter().enumerate() {
        level_start.push(acc);
        acc += net.len();
        vertex_level.extend(std::iter::repeat(k).take(net.len()));
    }
    level_start.push(acc);
    let n = acc;
    let flat: Vec<(usize, &ZPoint)> = levels
        .iter()
        .enumerate()
        .flat_map(|(k, net)| net.iter().map(move |z| (k, z)))
        .collect();

    let mut adj = vec![Vec::new(); n];
    for (u, &(ku, zu)) in flat.iter().enumerate() {
        for (v, &(kv, zv)) in flat.iter().enumerate().skip(u + 1) {
            let k = match kv - ku {
                0 => ku,
                1 => kv,
                _ => continue,
            };
            if model.distance(zu, zv) <= 2.0 * 0.5f64.powi(k as i32) + NET_TOL {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }

    let rows = par::map_range(n, |s| bfs(&adj, s));
    let mut dist = Vec::with_capacity(n * n);
    for row in rows {
        if row.iter().any(|&d| d == u16::MAX) {
            return Err(Error::Model("approximation graph is disconnected".into()));
        }
        dist.extend(row);
    }
    let g = ApproxGraph { model: model.clone(), max_level, levels, level_start, vertex_level, dist };
    for v in 0..n {
        if g.dist(0, v) as usize != g.vertex_level[v] {
            return Err(Error::Model(format!("vertex {v} is not at graph distance equal to its level")));
        }
    }
    Ok(g)
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u16> {
    let mut d = vec![u16::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == u16::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

impl ApproxGraph {
    pub fn len(&self) -> usize {
        self.vertex_level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_level.is_empty()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn dist(&self, u: usize, v: usize) -> u16 {
        self.dist[u * self.len() + v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.vertex_level[v]
    }

    pub fn point(&self, v: usize) -> &ZPoint {
        let k = self.vertex_level[v];
        &self.levels[k][v - self.level_start[k]]
    }

    pub fn vertex(&self, level: usize, index: usize) -> usize {
        self.level_start[level] + index
    }

    /// Vertices of `level`, as a contiguous id range.
    pub fn level_vertices(&self, level: usize) -> std::ops::Range<usize> {
        self.level_start[level]..self.level_start[level + 1]
    }

    pub fn net(&self, level: usize) -> &[ZPoint] {
        &self.levels[level]
    }

    /// Vertex of `level` whose net point is nearest to `z`.
    pub fn snap(&self, level: usize, z: &ZPoint) -> usize {
        self.vertex(level, self.model.nearest(&self.levels[level], z))
    }

    /// Gromov product at the basepoint, exact in half-integers.
    pub fn product(&self, u: usize, v: usize) -> f64 {
        0.5 * (self.level(u) as f64 + self.level(v) as f64 - self.dist(u, v) as f64)
    }
}

impl SpaceModel for ApproxGraph {
    type Point = usize;

    fn basepoint(&self) -> usize {
        0
    }

    fn distance(&self, x: &usize, y: &usize) -> f64 {
        self.dist(*x, *y) as f64
    }

    fn enumerate(&self, depth: usize) -> Vec<usize> {
        (0..self.level_start[depth.min(self.max_level) + 1]).collect()
    }

    fn geodesic(&self, x: &usize, y: &usize, _step: f64) -> Result<Vec<usize>> {
        // Walk greedily: some neighbor of the current vertex is one closer to y.
        let mut path = vec![*x];
        let mut cur = *x;
        while cur != *y {
            let d = self.dist(cur, *y);
            cur = (0..self.len())
                .find(|&w| self.dist(cur, w) == 1 && self.dist(w, *y) + 1 == d)
                .ok_or_else(|| Error::Model("graph distances are inconsistent".into()))?;
            path.push(cur);
        }
        Ok(path)
    }

    fn visual_constant(&self) -> Option<f64> {
        Some(0.0)
    }
}

impl RayedSpace for ApproxGraph {
    type Ray = ZPoint;

    fn ray_through(&self, v: &usize) -> Result<(ZPoint, f64)> {
        if *v >= self.len() {
            return Err(Error::Model(format!("vertex {v} is not on any enumerated ray")));
        }
        Ok((self.point(*v).clone(), self.level(*v) as f64))
    }

    /// The level-`round(t)` vertex nearest to `z`; the nearest-net-point
    /// chain toward `z` is a geodesic ray in the graph.
    fn point_on_ray(&self, z: &ZPoint, t: f64) -> Result<usize> {
        let k = t.round();
        if !(k >= 0.0) || k as usize > self.max_level {
            return Err(Error::Model(format!("ray parameter {t} is beyond level {}", self.max_level)));
        }
        Ok(self.snap(k as usize, z))
    }
}

/// Outcome of comparing graph products with `log₂(1/d_Z)` on the top level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeProductVerdict {
    pub pass: bool,
    pub slack: f64,
    pub worst_deviation: f64,
    pub worst_pair: (usize, usize),
    pub pairs: usize,
}

/// `|(u,v)_base - min(K, log₂(1/d_Z(u,v)))| ≤ slack` for all level-`K`
/// vertex pairs (or the listed ones).
pub fn cone_boundary_product_check(g: &ApproxGraph, pairs: Option<&[(usize, usize)]>, slack: f64) -> Result<ConeProductVerdict> {
    let k = g.max_level;
    if k < 3 {
        return Err(usage("cone product check needs at least 3 levels"));
    }
    let top: Vec<usize> = g.level_vertices(k).collect();
    let list: Vec<(usize, usize)> = match pairs {
        Some(p) => p.to_vec(),
        None => top.iter().flat_map(|&u| top.iter().map(move |&v| (u, v))).filter(|(u, v)| u <= v).collect(),
    };
    let kf = k as f64;
    let mut worst = (0.0f64, list.first().copied().unwrap_or((top[0], top[0])));
    for &(u, v) in &list {
        let d = g.model.distance(g.point(u), g.point(v));
        let expected = if d > 0.0 { (1.0 / d).log2().min(kf) } else { kf };
        let dev = (g.product(u, v) - expected).abs();
        if dev > worst.0 {
            worst = (dev, (u, v));
        }
    }
    Ok(ConeProductVerdict {
        pass: worst.0 <= slack,
        slack,
        worst_deviation: worst.0,
        worst_pair: worst.1,
        pairs: list.len(),
    })
}

/// The radial extension with parameter 1 of `g : Z₁ → Z₂`, as a vertex
/// table: `(k, z) ↦ (k, snap_k(g(z)))`, basepoint to basepoint.
pub fn lift_boundary_map(
    source: &ApproxGraph,
    target: &ApproxGraph,
    g: impl Fn(&ZPoint) -> ZPoint,
) -> Result<Vec<usize>> {
    if target.max_level < source.max_level {
        return Err(usage("target cone has fewer levels than the source"));
    }
    let ext = RadialExtension::new(source, target, g, 1.0)?;
    (0..source.len()).map(|v| ext.apply(&v)).collect()
}

/// `cantor_map` on Cantor points, for lifting into an interval cone.
pub fn cantor_to_interval(z: &ZPoint) -> ZPoint {
    match z {
        ZPoint::Bits(b) => ZPoint::Real(cantor_map(&CantorPoint { bits: b.clone() })),
        other => panic!("cantor_to_interval expects a Cantor point, got {other:?}"),
    }
}

/// A finite map between two approximation graphs given by a vertex table.
pub struct GraphMap<'a> {
    pub source: &'a ApproxGraph,
    pub target: &'a ApproxGraph,
    pub table: Vec<usize>,
}

impl FiniteMap for GraphMap<'_> {
    fn len(&self) -> usize {
        self.table.len()
    }

    fn base(&self) -> usize {
        0
    }

    fn source_distance(&self, i: usize, j: usize) -> f64 {
        self.source.dist(i, j) as f64
    }

    fn image_distance(&self, i: usize, j: usize) -> f64 {
        self.target.dist(self.table[i], self.table[j]) as f64
    }

    fn source_product(&self, i: usize, j: usize) -> f64 {
        self.source.product(i, j)
    }

    fn image_product(&self, i: usize, j: usize) -> f64 {
        self.target.product(self.table[i], self.table[j])
    }

    fn describe(&self, i: usize) -> (String, String) {
        let v = self.table[i];
        (
            format!("L{}:{:?}", self.source.level(i), self.source.point(i)),
            format!("L{}:{:?}", self.target.level(v), self.target.point(v)),
        )
    }
}

/// Tuple scans: every `(n+1)`-subset, or a seeded sample of index tuples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TupleScan {
    Exhaustive,
    Seeded { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFnRow {
    pub r: f64,
    /// `None` when no sampled tuple has all source products below `r`.
    pub c: Option<f64>,
    pub witness: Option<Vec<usize>>,
}

/// Lower bounds for `c_{f,n}(r)` on a grid of `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFnTable {
    pub n: usize,
    pub rows: Vec<CFnRow>,
    pub exhaustive: bool,
    pub tuples: u64,
}

impl CFnTable {
    /// `max_r (c(r) - r)` over rows with a witness.
    pub fn excess(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|row| row.c.map(|c| c - row.r))
            .reduce(f64::max)
    }
}

/// For each `r`, the largest `B` realized by an `(n+1)`-tuple whose pairwise
/// source products are all `< r` and whose pairwise image products are all
/// `≥ B`.
pub fn c_fn_table<M: FiniteMap>(f: &M, n: usize, r_grid: &[f64], scan: TupleScan) -> Result<CFnTable> {
    if n == 0 {
        return Err(usage("c_{f,n} needs n >= 1"));
    }
    let m = f.len();
    let k = n + 1;
    let row = |r: f64, hit: Option<(f64, Vec<usize>)>| CFnRow { r, c: hit.as_ref().map(|h| h.0), witness: hit.map(|h| h.1) };
    match scan {
        TupleScan::Exhaustive => {
            let mut edges = clique::all_pairs(m, |i, j| {
                Some(Edge { weight: f.image_product(i, j), key: f.source_product(i, j), i: i as u32, j: j as u32 })
            });
            clique::sort_edges(&mut edges);
            let hits = clique::bottleneck_cliques(m, k, &edges, r_grid, |key, r| key < r);
            Ok(CFnTable {
                n,
                rows: r_grid.iter().zip(hits).map(|(&r, hit)| row(r, hit)).collect(),
                exhaustive: true,
                tuples: binomial(m as u64, k as u64),
            })
        }
        TupleScan::Seeded { seed, count } => {
            let flat: Vec<usize> = seeded_tuples::<1>(seed, count * k, m).into_iter().map(|[s]| s as usize).collect();
            // (max source product, min image product) per tuple.
            let scored: Vec<(f64, f64, Vec<usize>)> = flat
                .chunks(k)
                .filter_map(|chunk| {
                    let mut t = chunk.to_vec();
                    t.sort_unstable();
                    t.dedup();
                    (t.len() == k).then_some(t)
                })
                .map(|t| {
                    let mut s = f64::NEG_INFINITY;
                    let mut b = f64::INFINITY;
                    for x in 0..k {
                        for y in x + 1..k {
                            s = s.max(f.source_product(t[x], t[y]));
                            b = b.min(f.image_product(t[x], t[y]));
                        }
                    }
                    (s, b, t)
                })
                .collect();
            let rows = r_grid
                .iter()
                .map(|&r| {
                    let hit = scored
                        .iter()
                        .filter(|(s, _, _)| *s < r)
                        .fold(None::<&(f64, f64, Vec<usize>)>, |acc, cur| match acc {
                            Some(a) if a.1 >= cur.1 => Some(a),
                            _ => Some(cur),
                        });
                    row(r, hit.map(|h| (h.1, h.2.clone())))
                })
                .collect();
            Ok(CFnTable { n, rows, exhaustive: false, tuples: count as u64 })
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_zero_cone_is_a_point() {
        let g = build_cone(&CompactModel::Interval, 0).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn level_sizes() {
        assert_eq!(build_cone(&CompactModel::Interval, 3).unwrap().level_sizes(), vec![1, 2, 4, 8]);
        assert_eq!(build_cone(&CompactModel::Cantor, 3).unwrap().level_sizes(), vec![1, 2, 4, 8]);
        assert_eq!(build_cone(&CompactModel::Circle, 3).unwrap().level_sizes(), vec![1, 4, 8, 16]);
    }

    #[test]
    fn levels_equal_distance_to_base() {
        for model in [CompactModel::Cantor, CompactModel::Interval, CompactModel::Circle] {
            let g = build_cone(&model, 5).unwrap();
            for v in 0..g.len() {
                assert_eq!(g.dist(0, v) as usize, g.level(v));
            }
        }
    }

    #[test]
    fn bad_custom_net_is_rejected() {
        // Two points 0.1 apart cannot both sit on level 1 (needs 1/2 separation).
        let net = CustomNet {
            labels: vec![],
            distances: vec![vec![0.0, 0.1], vec![0.1, 0.0]],
            levels: vec![vec![0], vec![0, 1]],
        };
        let err = build_cone(&CompactModel::CustomNet(net), 1).unwrap_err();
        assert!(err.to_string().contains("separated"), "{err}");
    }

    #[test]
    fn custom_net_parses_from_json() {
        let text = r#"{"kind":"custom-net","distances":[[0,1],[1,0]],"levels":[[0],[0,1]]}"#;
        let model: CompactModel = serde_json::from_str(text).unwrap();
        let g = build_cone(&model, 1).unwrap();
        assert_eq!(g.level_sizes(), vec![1, 2]);
        let cantor: CompactModel = serde_json::from_str(r#"{"kind":"cantor"}"#).unwrap();
        assert_eq!(cantor, CompactModel::Cantor);
    }

    #[test]
    fn lift_examples() {
        let c = build_cone(&CompactModel::Cantor, 4).unwrap();
        let i = build_cone(&CompactModel::Interval, 4).unwrap();
        let lift = lift_boundary_map(&c, &i, cantor_to_interval).unwrap();
        assert_eq!(lift[0], 0);
        // Level-2 cylinder (1,0) goes to the interval point nearest ½ (3/8 on the tie).
        let v = c.vertex(2, 2);
        assert_eq!(c.point(v), &ZPoint::Bits(vec![1, 0]));
        assert_eq!(i.point(lift[v]), &ZPoint::Real(0.375));
        let id = lift_boundary_map(&i, &i, |z| z.clone()).unwrap();
        assert!(id.iter().enumerate().all(|(a, &b)| a == b));
    }

    #[test]
    fn c_fn_degenerate_cases() {
        let g = build_cone(&CompactModel::Interval, 1).unwrap();
        let id = GraphMap { source: &g, target: &g, table: (0..g.len()).collect() };
        let t = c_fn_table(&id, 3, &[1.0, 2.0], TupleScan::Exhaustive).unwrap();
        assert!(t.rows.iter().all(|r| r.c.is_none()));
        let g = build_cone(&CompactModel::Interval, 4).unwrap();
        let id = GraphMap { source: &g, target: &g, table: (0..g.len()).collect() };
        let t = c_fn_table(&id, 2, &[0.5, 1.0, 2.0, 3.0], TupleScan::Exhaustive).unwrap();
        assert!(t.rows[0].c.is_none());
        for row in &t.rows[1..] {
            assert!(row.c.unwrap() < row.r);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(511, 3), 511 * 510 * 509 / 6);
        assert_eq!(binomial(2, 3), 0);
        let mut count = 0;
        crate::clique::for_each_extension(&mut vec![], 3, 6, &mut |_| count += 1);
        assert_eq!(count, 20);
    }
}
