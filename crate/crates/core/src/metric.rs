//! Based metric spaces, Gromov products and four-point hyperbolicity.
//!
//! A [`SpaceModel`] is a based metric space that can enumerate a finite
//! portion of itself. Checkers work on a [`PointTable`], which freezes a
//! finite enumeration together with its distance matrix and hands out
//! [`PointRef`] handles into it.

use std::fmt::Debug;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::par;

/// Slack allowed between a sampled geodesic and true additivity for models
/// whose distances go through transcendental functions.
pub const ANALYTIC_GEODESIC_SLACK: f64 = 1e-9;

/// A based metric space presented through finite enumerations.
pub trait SpaceModel: Sync {
    type Point: Clone + Debug + Send + Sync;

    fn basepoint(&self) -> Self::Point;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// Deterministic finite enumeration of the part of the space within
    /// `depth` of the basepoint (the meaning of "depth" is model specific).
    fn enumerate(&self, depth: usize) -> Vec<Self::Point>;

    /// Points along a geodesic from `x` to `y`, consecutive samples at most
    /// `step` apart, endpoints included.
    fn geodesic(&self, _x: &Self::Point, _y: &Self::Point, _step: f64) -> Result<Vec<Self::Point>> {
        Err(Error::Unsupported("geodesic sampling".into()))
    }

    /// Bound on `|d(x,g) + d(g,y) - d(x,y)|` for geodesic samples `g`.
    fn geodesic_slack(&self) -> f64 {
        0.0
    }

    /// The constant `D` of a visual space, or `None` when the model is not
    /// known to be visual.
    fn visual_constant(&self) -> Option<f64> {
        None
    }
}

/// `(x,y)_a` from the three distances involved.
#[inline]
pub fn product_from_distances(d_xa: f64, d_ya: f64, d_xy: f64) -> f64 {
    0.5 * (d_xa + d_ya - d_xy)
}

/// Gromov product `(x,y)_a` computed directly from a model.
pub fn gromov_product<S: SpaceModel>(space: &S, x: &S::Point, y: &S::Point, a: &S::Point) -> f64 {
    product_from_distances(space.distance(x, a), space.distance(y, a), space.distance(x, y))
}

/// Handle to a point of a [`PointTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointRef(pub u32);

impl PointRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite enumeration of a model with its full distance matrix.
#[derive(Clone, Debug)]
pub struct PointTable<P> {
    points: Vec<P>,
    dist: Vec<f64>,
    geodesic_slack: f64,
}

impl<P: Clone + Debug + Send + Sync> PointTable<P> {
    pub fn from_points<S: SpaceModel<Point = P>>(space: &S, points: Vec<P>) -> Self {
        let n = points.len();
        let rows = par::map_range(n, |i| {
            (0..n)
                .map(|j| space.distance(&points[i], &points[j]))
                .collect::<Vec<_>>()
        });
        let mut dist = Vec::with_capacity(n * n);
        for row in rows {
            dist.extend(row);
        }
        PointTable {
            points,
            dist,
            geodesic_slack: space.geodesic_slack(),
        }
    }

    pub fn enumerate<S: SpaceModel<Point = P>>(space: &S, depth: usize) -> Self {
        Self::from_points(space, space.enumerate(depth))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn handles(&self) -> impl Iterator<Item = PointRef> {
        (0..self.points.len() as u32).map(PointRef)
    }

    pub fn geodesic_slack(&self) -> f64 {
        self.geodesic_slack
    }

    fn check(&self, p: PointRef) -> Result<usize> {
        if p.index() < self.points.len() {
            Ok(p.index())
        } else {
            Err(Error::UnknownPoint(p.index()))
        }
    }

    pub fn point(&self, p: PointRef) -> Result<&P> {
        self.check(p).map(|i| &self.points[i])
    }

    pub fn distance(&self, x: PointRef, y: PointRef) -> Result<f64> {
        let (i, j) = (self.check(x)?, self.check(y)?);
        Ok(self.d(i, j))
    }

    /// `(x,y)_a` on table handles.
    pub fn gromov_product(&self, x: PointRef, y: PointRef, a: PointRef) -> Result<f64> {
        let (i, j, k) = (self.check(x)?, self.check(y)?, self.check(a)?);
        Ok(self.prod(i, j, k))
    }

    #[inline]
    pub(crate) fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.points.len() + j]
    }

    #[inline]
    fn prod(&self, i: usize, j: usize, a: usize) -> f64 {
        product_from_distances(self.d(i, a), self.d(j, a), self.d(i, j))
    }

    /// `max(0, min((x,z)_w, (z,y)_w) - (x,y)_w)` for the quadruple `[x, y, z, w]`.
    pub fn four_point_defect(&self, q: [PointRef; 4]) -> Result<f64> {
        let [x, y, z, w] = [self.check(q[0])?, self.check(q[1])?, self.check(q[2])?, self.check(q[3])?];
        Ok(defect(self.prod(x, z, w), self.prod(z, y, w), self.prod(x, y, w)))
    }

    /// Exhaustive check of the metric axioms, returning the first failing
    /// triple (or pair) if any. `tol` is an absolute tolerance.
    pub fn metric_violation(&self, tol: f64) -> Option<(PointRef, PointRef, PointRef)> {
        let n = self.len();
        for i in 0..n {
            if self.d(i, i).abs() > tol {
                return Some((PointRef(i as u32), PointRef(i as u32), PointRef(i as u32)));
            }
            for j in 0..n {
                let dij = self.d(i, j);
                if dij < -tol || (dij - self.d(j, i)).abs() > tol || (i != j && dij <= tol) {
                    return Some((PointRef(i as u32), PointRef(j as u32), PointRef(j as u32)));
                }
                for k in 0..n {
                    if dij > self.d(i, k) + self.d(k, j) + tol {
                        return Some((PointRef(i as u32), PointRef(j as u32), PointRef(k as u32)));
                    }
                }
            }
        }
        None
    }
}

#[inline]
fn defect(p_xz: f64, p_zy: f64, p_xy: f64) -> f64 {
    (p_xz.min(p_zy) - p_xy).max(0.0)
}

/// How quadruples are drawn for [`estimate_delta`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum QuadrupleSample {
    Exhaustive,
    Seeded { seed: u64, count: usize },
}

/// Lower estimate of the hyperbolicity constant in product form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityEstimate {
    pub delta_hat: f64,
    /// `[x, y, z, x0]` realizing the estimate.
    pub witness: [PointRef; 4],
    /// True only when every quadruple of the table was evaluated; the
    /// estimate is then exact for the finite model.
    pub exhaustive: bool,
    pub quadruples: u64,
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    order: u64,
    quad: [u32; 4],
}

impl Best {
    const NONE: Best = Best {
        value: -1.0,
        order: u64::MAX,
        quad: [0; 4],
    };

    // Larger value wins; equal values keep the earlier enumeration index.
    fn merge(self, other: Best) -> Best {
        if other.value > self.value || (other.value == self.value && other.order < self.order) {
            other
        } else {
            self
        }
    }
}

/// `4 * max max(0, min((x,z)_{x0},(z,y)_{x0}) - (x,y)_{x0})` over the sample.
pub fn estimate_delta<P>(table: &PointTable<P>, sample: QuadrupleSample) -> Result<HyperbolicityEstimate>
where
    P: Clone + Debug + Send + Sync,
{
    let n = table.len();
    if n == 0 {
        return Err(usage("empty point table"));
    }
    match sample {
        QuadrupleSample::Exhaustive => {
            let n64 = n as u64;
            let per_base = par::map_range(n, |w| {
                let prod: Vec<f64> = (0..n * n).map(|ij| table.prod(ij / n, ij % n, w)).collect();
                let mut best = Best::NONE;
                for x in 0..n {
                    for z in 0..n {
                        let p_xz = prod[x * n + z];
                        for y in 0..n {
                            let v = defect(p_xz, prod[z * n + y], prod[x * n + y]);
                            if v > best.value {
                                best = Best {
                                    value: v,
                                    order: ((w as u64 * n64 + x as u64) * n64 + z as u64) * n64 + y as u64,
                                    quad: [x as u32, y as u32, z as u32, w as u32],
                                };
                            }
                        }
                    }
                }
                best
            });
            let best = per_base.into_iter().fold(Best::NONE, Best::merge);
            Ok(estimate_from(best, true, n64.pow(4)))
        }
        QuadrupleSample::Seeded { seed, count } => {
            if count == 0 {
                return Err(usage("empty quadruple sample"));
            }
            let quads = seeded_tuples::<4>(seed, count, n);
            let vals = par::map_slice(&quads, |q| {
                defect(
                    table.prod(q[0] as usize, q[2] as usize, q[3] as usize),
                    table.prod(q[2] as usize, q[1] as usize, q[3] as usize),
                    table.prod(q[0] as usize, q[1] as usize, q[3] as usize),
                )
            });
            let best = vals
                .iter()
                .zip(&quads)
                .enumerate()
                .map(|(k, (&value, &quad))| Best {
                    value,
                    order: k as u64,
                    quad,
                })
                .fold(Best::NONE, Best::merge);
            Ok(estimate_from(best, false, count as u64))
        }
    }
}

fn estimate_from(best: Best, exhaustive: bool, quadruples: u64) -> HyperbolicityEstimate {
    HyperbolicityEstimate {
        delta_hat: 4.0 * best.value.max(0.0),
        witness: best.quad.map(PointRef),
        exhaustive,
        quadruples,
    }
}

/// Pre-generated index tuples; a longer sample with the same seed extends a
/// shorter one.
pub(crate) fn seeded_tuples<const K: usize>(seed: u64, count: usize, n: usize) -> Vec<[u32; K]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.gen_range(0..n as u32)))
        .collect()
}

/// Pairs of table points examined by pairwise checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PairSample {
    /// All unordered pairs `i < j`.
    Exhaustive,
    Seeded { seed: u64, count: usize },
    Listed { pairs: Vec<(u32, u32)> },
}

impl PairSample {
    pub fn materialize(&self, n: usize) -> Vec<(u32, u32)> {
        match self {
            PairSample::Exhaustive => (0..n as u32)
                .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
                .collect(),
            PairSample::Seeded { seed, count } => seeded_tuples::<2>(*seed, *count, n)
                .into_iter()
                .map(|[i, j]| (i, j))
                .collect(),
            PairSample::Listed { pairs } => pairs.clone(),
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self, PairSample::Exhaustive)
    }
}

/// Outcome of the two-sided basepoint-change inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftVerdict {
    pub pass: bool,
    /// `min (2 d(a,b) - |(x,y)_a - (x,y)_b|)` over the sample.
    pub worst_slack: f64,
    pub witness: (PointRef, PointRef),
    pub pairs: usize,
}

/// Checks `(x,y)_a - 2d(a,b) <= (x,y)_b <= (x,y)_a + 2d(a,b)` on every pair.
pub fn check_basepoint_shift<P>(
    table: &PointTable<P>,
    pairs: &PairSample,
    a: PointRef,
    b: PointRef,
) -> Result<ShiftVerdict>
where
    P: Clone + Debug + Send + Sync,
{
    let (ia, ib) = (table.check(a)?, table.check(b)?);
    let list = pairs.materialize(table.len());
    if list.is_empty() {
        return Err(usage("empty pair sample"));
    }
    for &(i, j) in &list {
        table.check(PointRef(i))?;
        table.check(PointRef(j))?;
    }
    let two_dab = 2.0 * table.d(ia, ib);
    let mut worst = f64::INFINITY;
    let mut witness = (PointRef(list[0].0), PointRef(list[0].1));
    for &(i, j) in &list {
        let (i, j) = (i as usize, j as usize);
        let slack = two_dab - (table.prod(i, j, ia) - table.prod(i, j, ib)).abs();
        if slack < worst {
            worst = slack;
            witness = (PointRef(i as u32), PointRef(j as u32));
        }
    }
    Ok(ShiftVerdict {
        pass: worst >= -1e-9,
        worst_slack: worst,
        witness,
        pairs: list.len(),
    })
}

/// Outcome of comparing `(b,c)_a` with the distance from `a` to a geodesic `bc`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicVerdict {
    pub pass: bool,
    pub product: f64,
    pub distance_to_geodesic: f64,
    pub samples: usize,
}

/// `(b,c)_a <= d(a, bc) + slack`, with the geodesic sampled at `step`.
pub fn product_vs_geodesic<S: SpaceModel>(
    space: &S,
    a: &S::Point,
    b: &S::Point,
    c: &S::Point,
    step: f64,
) -> Result<GeodesicVerdict> {
    let samples = space.geodesic(b, c, step)?;
    let product = gromov_product(space, b, c, a);
    let distance_to_geodesic = samples
        .iter()
        .map(|p| space.distance(a, p))
        .fold(f64::INFINITY, f64::min);
    Ok(GeodesicVerdict {
        pass: product <= distance_to_geodesic + space.geodesic_slack(),
        product,
        distance_to_geodesic,
        samples: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integer points of a path graph: 0-hyperbolic, geodesics are intervals.
    struct Line(usize);

    impl SpaceModel for Line {
        type Point = i64;
        fn basepoint(&self) -> i64 {
            0
        }
        fn distance(&self, x: &i64, y: &i64) -> f64 {
            (x - y).abs() as f64
        }
        fn enumerate(&self, depth: usize) -> Vec<i64> {
            let d = depth.min(self.0) as i64;
            (-d..=d).collect()
        }
        fn geodesic(&self, x: &i64, y: &i64, _step: f64) -> Result<Vec<i64>> {
            Ok(if x <= y { (*x..=*y).collect() } else { (*y..=*x).rev().collect() })
        }
    }

    /// The 4-cycle: realizes a positive four-point defect.
    struct Square;

    impl SpaceModel for Square {
        type Point = u8;
        fn basepoint(&self) -> u8 {
            0
        }
        fn distance(&self, x: &u8, y: &u8) -> f64 {
            let k = (*x as i32 - *y as i32).rem_euclid(4);
            k.min(4 - k) as f64
        }
        fn enumerate(&self, _depth: usize) -> Vec<u8> {
            vec![0, 1, 2, 3]
        }
    }

    #[test]
    fn product_collapses() {
        let t = PointTable::enumerate(&Line(5), 5);
        let (x, a) = (PointRef(2), PointRef(7));
        assert_eq!(t.gromov_product(x, x, a).unwrap(), t.distance(x, a).unwrap());
        assert_eq!(t.gromov_product(x, PointRef(4), x).unwrap(), 0.0);
    }

    #[test]
    fn unknown_handle_is_rejected() {
        let t = PointTable::enumerate(&Line(2), 2);
        assert!(matches!(
            t.gromov_product(PointRef(0), PointRef(99), PointRef(0)),
            Err(Error::UnknownPoint(99))
        ));
    }

    #[test]
    fn one_point_space_has_zero_delta() {
        let t = PointTable::from_points(&Line(0), vec![0]);
        let est = estimate_delta(&t, QuadrupleSample::Exhaustive).unwrap();
        assert_eq!(est.delta_hat, 0.0);
        assert!(est.exhaustive);
    }

    #[test]
    fn square_delta_and_witness() {
        let t = PointTable::enumerate(&Square, 0);
        let est = estimate_delta(&t, QuadrupleSample::Exhaustive).unwrap();
        // x=1, y=3, z=2, x0=0: (1,2)_0 = 1, (2,3)_0 = 1, (1,3)_0 = 0.
        assert_eq!(est.delta_hat, 4.0);
        assert_eq!(4.0 * t.four_point_defect(est.witness).unwrap(), est.delta_hat);
    }

    #[test]
    fn empty_sample_is_usage_error() {
        let t = PointTable::enumerate(&Square, 0);
        assert!(estimate_delta(&t, QuadrupleSample::Seeded { seed: 1, count: 0 }).is_err());
        let empty: PointTable<u8> = PointTable::from_points(&Square, vec![]);
        assert!(estimate_delta(&empty, QuadrupleSample::Exhaustive).is_err());
    }

    #[test]
    fn seeded_delta_grows_with_sample() {
        let t = PointTable::enumerate(&Square, 0);
        let mut last = 0.0;
        for count in [1, 2, 5, 20, 100] {
            let est = estimate_delta(&t, QuadrupleSample::Seeded { seed: 3, count }).unwrap();
            assert!(est.delta_hat >= last);
            assert_eq!(4.0 * t.four_point_defect(est.witness).unwrap(), est.delta_hat);
            last = est.delta_hat;
        }
    }

    #[test]
    fn shift_with_equal_basepoints() {
        let t = PointTable::enumerate(&Square, 0);
        let v = check_basepoint_shift(&t, &PairSample::Exhaustive, PointRef(1), PointRef(1)).unwrap();
        assert!(v.pass);
        assert_eq!(v.worst_slack, 0.0);
    }

    #[test]
    fn geodesic_contains_basepoint() {
        let v = product_vs_geodesic(&Line(5), &0, &-3, &4, 1.0).unwrap();
        assert!(v.pass);
        assert_eq!(v.product, 0.0);
        assert_eq!(v.distance_to_geodesic, 0.0);
    }

    #[test]
    fn geodesic_unsupported() {
        assert!(matches!(
            product_vs_geodesic(&Square, &0, &1, &2, 1.0),
            Err(Error::Unsupported(_))
        ));
    }
}
