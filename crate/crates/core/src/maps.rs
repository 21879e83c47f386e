//! Concrete maps between the models.
//!
//! * [`ExplicitMap`]: the tree-to-plane map sending each depth-`n` edge onto a
//!   radial unit segment at radius `n`, spreading siblings uniformly in angle.
//! * [`cantor_map`]: binary expansion from the Cantor set onto `[0,1]`.
//! * [`RadialExtension`]: lift of a boundary map along rays from the basepoint.
//! * [`CombTree`]: a 1-Lipschitz map that is radial on rays but not visual.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::metric::SpaceModel;
use crate::plane::{self, HyperbolicPlane, PolarPoint};
use crate::tree::{self, EdgePoint, FreeGroupTree, Word};

/// Signed index `k` with `vertex_angle(w) = k · (π/2) / 3^(|w|-1)`.
///
/// The first digit contributes `a₁ · 3^(n-1)`, each later digit `a_m`
/// contributes `(a_m - 1) · 3^(n-m)`: the sibling offset at parent depth
/// `n` is one third of the parent's own angular gap.
pub fn vertex_angle_index(w: &Word) -> Result<i64> {
    let d = w.digits();
    let Some((&first, rest)) = d.split_first() else {
        return Err(usage("the basepoint has no angle"));
    };
    let mut k = first as i64;
    for &a in rest {
        k = 3 * k + (a as i64 - 1);
    }
    Ok(k)
}

/// Angular gap between consecutive depth-`n` image angles, `2π / (4·3^(n-1))`.
pub fn angle_unit(n: usize) -> f64 {
    FRAC_PI_2 / 3f64.powi(n as i32 - 1)
}

/// Angle of the image of a non-root vertex (unreduced).
pub fn vertex_angle(w: &Word) -> Result<f64> {
    Ok(vertex_angle_index(w)? as f64 * angle_unit(w.len()))
}

/// The explicit map from the tree to the plane.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExplicitMap;

impl ExplicitMap {
    /// `(|w|, vertex_angle(w))`, the basepoint for `e`.
    pub fn map_vertex(&self, w: &Word) -> PolarPoint {
        match vertex_angle(w) {
            Ok(phi) => PolarPoint { r: w.len() as f64, phi },
            Err(_) => PolarPoint::BASEPOINT,
        }
    }

    /// Edges are half-open at the parent: `t = 0` maps to the parent's image,
    /// `t > 0` to `(n + t, angle(child))`.
    pub fn map_edge_point(&self, p: &EdgePoint) -> PolarPoint {
        if p.t == 0.0 {
            return self.map_vertex(&p.parent);
        }
        self.edge_limit_at_parent(p)
            .map(|q| PolarPoint { r: q.r + p.t, phi: q.phi })
            .unwrap_or(PolarPoint::BASEPOINT)
    }

    /// The one-sided limit `t → 0⁺` of the edge image, `(n, angle(child))`.
    pub fn edge_limit_at_parent(&self, p: &EdgePoint) -> Result<PolarPoint> {
        Ok(PolarPoint {
            r: p.parent.len() as f64,
            phi: vertex_angle(&p.child())?,
        })
    }

    /// Image angles of the depth-`n` sphere, in [`tree::sphere`] order.
    pub fn angles_at_depth(&self, n: usize) -> Vec<f64> {
        if n == 0 {
            return vec![];
        }
        let unit = angle_unit(n);
        tree::sphere(n)
            .iter()
            .map(|w| vertex_angle_index(w).map(|k| k as f64 * unit).unwrap_or(0.0))
            .collect()
    }

    /// Distance from `q` to the image of all edges within depth `depth`.
    ///
    /// Depth-`(n+1)` image angles form the full residue set of a uniform
    /// grid, and the distance to a radial segment grows with the angular
    /// gap, so only the nearest grid angle per radius can be closest.
    pub fn distance_to_image(&self, q: &PolarPoint, depth: usize) -> f64 {
        let mut best = plane::distance(q, &PolarPoint::BASEPOINT);
        for n in 0..depth {
            let unit = angle_unit(n + 1);
            let k = (q.phi / unit).round();
            for phi in [(k - 1.0) * unit, k * unit, (k + 1.0) * unit] {
                let d = plane::distance_to_radial_segment(q, phi, n as f64, n as f64 + 1.0);
                best = best.min(d);
            }
        }
        best
    }

    /// Image samples along the root geodesic to `leaf`, `per_edge` samples
    /// per edge (vertices included).
    pub fn image_ray(&self, leaf: &Word, per_edge: usize) -> Vec<PolarPoint> {
        let mut out = vec![PolarPoint::BASEPOINT];
        for k in 1..=leaf.len() {
            let parent = leaf.prefix(k - 1);
            let digit = leaf.digits()[k - 1];
            for s in 1..=per_edge {
                let t = s as f64 / per_edge as f64;
                out.push(self.map_edge_point(&EdgePoint { parent: parent.clone(), child_digit: digit, t }));
            }
        }
        out
    }
}

/// Upper bound on the jump of the map at radius `n`: `2π sinh n / (4·3^(n-1))`.
pub fn jump_bound(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(usage("jumps occur at radius n >= 1"));
    }
    Ok(plane::circumference(n as f64) / tree::sphere_size(n) as f64)
}

/// Largest plane distance at radius `n` between angularly adjacent
/// depth-`(n+1)` image directions (the jump size at that radius).
pub fn measured_jump(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(usage("jumps occur at radius n >= 1"));
    }
    let mut angles: Vec<f64> = ExplicitMap
        .angles_at_depth(n + 1)
        .into_iter()
        .map(plane::reduce_angle)
        .collect();
    angles.sort_by(f64::total_cmp);
    let r = n as f64;
    let at = |phi: f64| PolarPoint { r, phi };
    let cyclic = plane::distance(&at(angles[angles.len() - 1]), &at(angles[0] + TAU));
    Ok(angles
        .windows(2)
        .map(|w| plane::distance(&at(w[0]), &at(w[1])))
        .fold(cyclic, f64::max))
}

/// Largest actual discontinuity `d(f(w), lim_{t→0⁺} f(edge))` at radius `n`.
pub fn parent_child_jump(n: usize) -> f64 {
    let map = ExplicitMap;
    tree::sphere(n)
        .iter()
        .flat_map(|w| {
            let fw = map.map_vertex(w);
            w.children()
                .map(move |c| {
                    let lim = map
                        .edge_limit_at_parent(&EdgePoint { parent: w.clone(), child_digit: *c.digits().last().unwrap(), t: 0.0 })
                        .unwrap();
                    plane::distance(&fw, &lim)
                })
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// A depth-`k` point of the Cantor set `{0,1}^ℕ`, tail taken to be zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CantorPoint {
    pub bits: Vec<u8>,
}

impl CantorPoint {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(usage("Cantor coordinates are 0 or 1"));
        }
        Ok(CantorPoint { bits })
    }

    /// The `index`-th depth-`k` point, most significant bit first.
    pub fn from_index(k: usize, index: usize) -> Self {
        CantorPoint {
            bits: (0..k).map(|i| ((index >> (k - 1 - i)) & 1) as u8).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }
}

/// All `2^k` depth-`k` points in index order.
pub fn cantor_points(k: usize) -> Vec<CantorPoint> {
    (0..1usize << k).map(|i| CantorPoint::from_index(k, i)).collect()
}

/// `Σ |x_i - y_i| / 2^i` over the coordinates present in either point.
pub fn cantor_distance(x: &CantorPoint, y: &CantorPoint) -> f64 {
    let n = x.bits.len().max(y.bits.len());
    let bit = |p: &CantorPoint, i: usize| p.bits.get(i).copied().unwrap_or(0);
    (0..n)
        .filter(|&i| bit(x, i) != bit(y, i))
        .map(|i| 0.5f64.powi(i as i32 + 1))
        .sum()
}

/// `Σ bits_i / 2^i`.
pub fn cantor_map(x: &CantorPoint) -> f64 {
    x.bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| 0.5f64.powi(i as i32 + 1))
        .sum()
}

/// A based model in which every point lies on a ray from the basepoint.
pub trait RayedSpace: SpaceModel {
    type Ray: Clone + std::fmt::Debug;

    /// The ray `ξ_x` through `x` and the parameter `t_x` with `x = ξ_x(t_x)`.
    fn ray_through(&self, x: &Self::Point) -> Result<(Self::Ray, f64)>;

    /// `η(t)`, snapped to the nearest enumerated point in graph models.
    fn point_on_ray(&self, ray: &Self::Ray, t: f64) -> Result<Self::Point>;
}

/// A ray of the tree: through `head`, then continuing with digit 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeRay {
    pub head: Word,
}

impl RayedSpace for FreeGroupTree {
    type Ray = TreeRay;

    fn ray_through(&self, x: &Word) -> Result<(TreeRay, f64)> {
        Ok((TreeRay { head: x.clone() }, x.len() as f64))
    }

    fn point_on_ray(&self, ray: &TreeRay, t: f64) -> Result<Word> {
        if !(t >= 0.0) {
            return Err(usage(format!("ray parameter must be nonnegative, got {t}")));
        }
        let k = t.round() as usize;
        if k <= ray.head.len() {
            return Ok(ray.head.prefix(k));
        }
        let mut digits = ray.head.digits().to_vec();
        digits.resize(k, 1);
        Word::new(digits)
    }
}

impl RayedSpace for HyperbolicPlane {
    type Ray = f64;

    fn ray_through(&self, x: &PolarPoint) -> Result<(f64, f64)> {
        Ok((x.phi, x.r))
    }

    fn point_on_ray(&self, phi: &f64, t: f64) -> Result<PolarPoint> {
        PolarPoint::new(t, *phi)
    }
}

/// Radial extension of a boundary map with parameter `A`: `a ↦ b`, and a
/// point at parameter `t` on `ξ` goes to `η(A·t)` where `η` represents the
/// image of `ξ` under the boundary map.
///
/// In the graph models here every point already lies on an infinite ray
/// from the basepoint, so no maximal finite ray has to be chosen.
pub struct RadialExtension<'a, S: RayedSpace, T: RayedSpace, G> {
    pub source: &'a S,
    pub target: &'a T,
    pub boundary_map: G,
    pub parameter: f64,
}

impl<'a, S, T, G> RadialExtension<'a, S, T, G>
where
    S: RayedSpace,
    T: RayedSpace,
    G: Fn(&S::Ray) -> T::Ray,
{
    pub fn new(source: &'a S, target: &'a T, boundary_map: G, parameter: f64) -> Result<Self> {
        if !(parameter > 0.0) {
            return Err(usage(format!("radial extension parameter must be positive, got {parameter}")));
        }
        if source.visual_constant().is_none() {
            return Err(Error::Unsupported("radial extension needs a visual source".into()));
        }
        Ok(RadialExtension { source, target, boundary_map, parameter })
    }

    pub fn apply(&self, x: &S::Point) -> Result<T::Point> {
        let (xi, t) = self.source.ray_through(x)?;
        if t == 0.0 {
            return Ok(self.target.basepoint());
        }
        let eta = (self.boundary_map)(&xi);
        self.target.point_on_ray(&eta, self.parameter * t)
    }
}

/// `radial_extension(ext, x)` in free-function form.
pub fn radial_extension<S, T, G>(ext: &RadialExtension<'_, S, T, G>, x: &S::Point) -> Result<T::Point>
where
    S: RayedSpace,
    T: RayedSpace,
    G: Fn(&S::Ray) -> T::Ray,
{
    ext.apply(x)
}

/// Tree map identifying first digits 0 and 1 (a fold; 2-to-1 on those branches).
pub fn fold_first_digit(w: &Word) -> Word {
    match w.digits().split_first() {
        Some((1, rest)) => {
            let mut d = vec![0];
            d.extend_from_slice(rest);
            Word::new(d).expect("folded word keeps digit ranges")
        }
        _ => w.clone(),
    }
}

/// A vertex of the comb: spine vertex `n`, or vertex `j ≥ 1` of tooth `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CombPoint {
    Spine(u32),
    Tooth { n: u32, j: u32 },
}

/// A ray `0..=N` with a tooth at every spine vertex `n ≥ 1` whose length is
/// the rounded plane distance between `(n, 0)` and `(n, π/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CombTree {
    pub spine: u32,
    pub teeth: Vec<u32>,
    /// Unrounded target lengths `d((n,0), (n,π/2))`, indexed like `teeth`.
    pub target_lengths: Vec<f64>,
}

impl CombTree {
    pub fn new(spine: u32) -> Result<Self> {
        if spine < 2 {
            return Err(usage("comb spine length must be at least 2"));
        }
        let target_lengths: Vec<f64> = (1..=spine)
            .map(|n| {
                let r = n as f64;
                plane::distance(&PolarPoint { r, phi: 0.0 }, &PolarPoint { r, phi: FRAC_PI_2 })
            })
            .collect();
        let teeth = target_lengths.iter().map(|d| d.round() as u32).collect();
        Ok(CombTree { spine, teeth, target_lengths })
    }

    pub fn tooth_len(&self, n: u32) -> u32 {
        if n == 0 || n > self.spine {
            0
        } else {
            self.teeth[n as usize - 1]
        }
    }

    pub fn tooth_end(&self, n: u32) -> CombPoint {
        CombPoint::Tooth { n, j: self.tooth_len(n) }
    }

    fn spine_coord(p: &CombPoint) -> (u32, u32) {
        match *p {
            CombPoint::Spine(n) => (n, 0),
            CombPoint::Tooth { n, j } => (n, j),
        }
    }

    pub fn points(&self) -> Vec<CombPoint> {
        let mut out: Vec<CombPoint> = (0..=self.spine).map(CombPoint::Spine).collect();
        for n in 1..=self.spine {
            out.extend((1..=self.tooth_len(n)).map(|j| CombPoint::Tooth { n, j }));
        }
        out
    }

    /// Spine goes isometrically onto the ray at angle 0; tooth `n` goes by
    /// arc length onto the geodesic from `(n,0)` to `(n,π/2)`, clamped at its
    /// far end (the rounding defect is at most ½).
    pub fn map_point(&self, p: &CombPoint) -> PolarPoint {
        match *p {
            CombPoint::Spine(n) => PolarPoint { r: n as f64, phi: 0.0 },
            CombPoint::Tooth { n, j } => {
                let r = n as f64;
                plane::point_along(&PolarPoint { r, phi: 0.0 }, &PolarPoint { r, phi: FRAC_PI_2 }, j as f64)
            }
        }
    }

    /// The spine as a root geodesic, and each tooth as a geodesic from its
    /// spine vertex, in [`CombTree::points`] indices.
    pub fn ray_family(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let pts = self.points();
        let index = |p: CombPoint| pts.iter().position(|q| *q == p).unwrap();
        let spine = (0..=self.spine).map(|n| index(CombPoint::Spine(n))).collect();
        let teeth = (1..=self.spine)
            .map(|n| {
                std::iter::once(index(CombPoint::Spine(n)))
                    .chain((1..=self.tooth_len(n)).map(|j| index(CombPoint::Tooth { n, j })))
                    .collect()
            })
            .collect();
        (spine, teeth)
    }
}

impl SpaceModel for CombTree {
    type Point = CombPoint;

    fn basepoint(&self) -> CombPoint {
        CombPoint::Spine(0)
    }

    fn distance(&self, x: &CombPoint, y: &CombPoint) -> f64 {
        let ((n, j), (m, k)) = (Self::spine_coord(x), Self::spine_coord(y));
        if n == m {
            j.abs_diff(k) as f64
        } else {
            (j + n.abs_diff(m) + k) as f64
        }
    }

    /// All points within `depth` of the root.
    fn enumerate(&self, depth: usize) -> Vec<CombPoint> {
        let base = self.basepoint();
        self.points()
            .into_iter()
            .filter(|p| self.distance(p, &base) <= depth as f64)
            .collect()
    }

    fn geodesic(&self, x: &CombPoint, y: &CombPoint, _step: f64) -> Result<Vec<CombPoint>> {
        let ((n, j), (m, k)) = (Self::spine_coord(x), Self::spine_coord(y));
        let on = |n: u32, j: u32| if j == 0 { CombPoint::Spine(n) } else { CombPoint::Tooth { n, j } };
        if n == m {
            let path: Vec<_> = if j <= k { (j..=k).collect() } else { (k..=j).rev().collect() };
            return Ok(path.into_iter().map(|i| on(n, i)).collect());
        }
        let mut out: Vec<CombPoint> = (0..=j).rev().map(|i| on(n, i)).collect();
        let spine: Vec<u32> = if n < m { (n + 1..=m).collect() } else { (m..n).rev().collect() };
        out.extend(spine.into_iter().map(CombPoint::Spine));
        out.extend((1..=k).map(|i| on(m, i)));
        Ok(out)
    }
}

/// The comb and its map into the plane, as a pair of sampled point lists.
pub fn comb_counterexample(spine: u32) -> Result<(CombTree, Vec<PolarPoint>)> {
    let comb = CombTree::new(spine)?;
    let images = comb.points().iter().map(|p| comb.map_point(p)).collect();
    Ok((comb, images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn angle_examples() {
        assert!((vertex_angle(&w("1")).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(vertex_angle(&w("01")).unwrap(), 0.0);
        assert!((vertex_angle(&w("00")).unwrap() + PI / 6.0).abs() < 1e-15);
        assert!(vertex_angle(&Word::root()).is_err());
    }

    /// Oracle: cumulative sum of the per-digit offsets.
    fn angle_by_offsets(w: &Word) -> f64 {
        let d = w.digits();
        let mut phi = d[0] as f64 * FRAC_PI_2;
        for (m, &a) in d.iter().enumerate().skip(1) {
            let n = m as i32; // parent depth
            phi += (a as f64 - 1.0) * (PI / 6.0) * 3f64.powi(-(n - 1));
        }
        phi
    }

    #[test]
    fn angle_index_matches_offset_sum() {
        for v in tree::ball(6).iter().skip(1) {
            assert!((vertex_angle(v).unwrap() - angle_by_offsets(v)).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn vertex_images() {
        let f = ExplicitMap;
        assert_eq!(f.map_vertex(&Word::root()), PolarPoint::BASEPOINT);
        let p = f.map_vertex(&w("1"));
        assert_eq!((p.r, p.phi), (1.0, FRAC_PI_2));
        let p = f.map_vertex(&w("01"));
        assert_eq!((p.r, p.phi), (2.0, 0.0));
    }

    #[test]
    fn edge_images_are_half_open() {
        let f = ExplicitMap;
        let parent = w("0");
        let at0 = f.map_edge_point(&EdgePoint::new(parent.clone(), 0, 0.0).unwrap());
        assert_eq!(at0, f.map_vertex(&parent));
        let mid = f.map_edge_point(&EdgePoint::new(parent.clone(), 0, 0.5).unwrap());
        assert_eq!(mid.r, 1.5);
        assert!((mid.phi + PI / 6.0).abs() < 1e-15);
        let end = f.map_edge_point(&EdgePoint::new(parent.clone(), 2, 1.0).unwrap());
        assert_eq!(end, f.map_vertex(&w("02")));
        // Root edges land on the four axes.
        for i in 0..4 {
            let q = f.map_edge_point(&EdgePoint::new(Word::root(), i, 1.0).unwrap());
            assert_eq!(q, PolarPoint { r: 1.0, phi: i as f64 * FRAC_PI_2 });
        }
    }

    #[test]
    fn jump_bound_values() {
        // 2π sinh(n) / (4·3^(n-1)) evaluated by hand.
        assert!((jump_bound(1).unwrap() - 1.846_002).abs() < 1e-6);
        assert!((jump_bound(2).unwrap() - 1.899_020).abs() < 1e-6);
        assert!((jump_bound(10).unwrap() - 0.878_908).abs() < 1e-6);
        assert!(jump_bound(0).is_err());
    }

    #[test]
    fn measured_jumps_below_bound() {
        for n in 1..=6 {
            let m = measured_jump(n).unwrap();
            assert!(m <= jump_bound(n).unwrap(), "n={n}");
            // The real discontinuity is one such adjacent gap.
            assert!((parent_child_jump(n) - m).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn cantor_examples() {
        assert_eq!(cantor_map(&CantorPoint::new(vec![0; 10]).unwrap()), 0.0);
        assert_eq!(cantor_map(&CantorPoint::new(vec![1; 8]).unwrap()), 1.0 - 0.5f64.powi(8));
        let alt = CantorPoint::new((0..10).map(|i| (i % 2 == 0) as u8).collect()).unwrap();
        assert!((cantor_map(&alt) - 0.666_015_625).abs() < 1e-12);
        assert!(CantorPoint::new(vec![2]).is_err());
        assert_eq!(CantorPoint::from_index(3, 5).bits, vec![1, 0, 1]);
    }

    #[test]
    fn cantor_map_is_one_lipschitz() {
        let pts = cantor_points(6);
        for x in &pts {
            for y in &pts {
                assert!((cantor_map(x) - cantor_map(y)).abs() <= cantor_distance(x, y) + 1e-15);
            }
        }
    }

    #[test]
    fn radial_extension_clauses() {
        let plane = HyperbolicPlane;
        let tree_ = FreeGroupTree;
        let g = |r: &TreeRay| vertex_angle(&r.head.prefix(1)).unwrap_or(0.0);
        let ext = RadialExtension::new(&tree_, &plane, g, 1.0).unwrap();
        assert_eq!(ext.apply(&Word::root()).unwrap(), PolarPoint::BASEPOINT);
        let p = ext.apply(&w("100")).unwrap();
        assert_eq!((p.r, p.phi), (3.0, FRAC_PI_2));
        let half = RadialExtension::new(&tree_, &plane, g, 0.5).unwrap();
        assert_eq!(half.apply(&w("2101")).unwrap().r, 2.0);
        assert!(RadialExtension::new(&tree_, &plane, g, 0.0).is_err());
    }

    #[test]
    fn tree_rays_snap_to_vertices() {
        let ray = TreeRay { head: w("02") };
        assert_eq!(FreeGroupTree.point_on_ray(&ray, 1.4).unwrap(), w("0"));
        assert_eq!(FreeGroupTree.point_on_ray(&ray, 3.6).unwrap(), w("0211"));
    }

    #[test]
    fn fold_identifies_two_branches() {
        assert_eq!(fold_first_digit(&w("12")), w("02"));
        assert_eq!(fold_first_digit(&w("21")), w("21"));
        assert_eq!(fold_first_digit(&Word::root()), Word::root());
    }

    #[test]
    fn comb_geometry() {
        let (comb, _) = comb_counterexample(12).unwrap();
        for n in 1..=12 {
            let spine = comb.map_point(&CombPoint::Spine(n));
            assert_eq!((spine.r, spine.phi), (n as f64, 0.0));
            let end = comb.map_point(&comb.tooth_end(n));
            let target = PolarPoint { r: n as f64, phi: FRAC_PI_2 };
            assert!(plane::distance(&end, &target) <= 0.5 + 1e-9, "tooth {n}");
        }
        assert!(CombTree::new(1).is_err());
    }

    #[test]
    fn comb_map_is_one_lipschitz() {
        let comb = CombTree::new(6).unwrap();
        let pts = comb.points();
        for x in &pts {
            for y in &pts {
                let dy = plane::distance(&comb.map_point(x), &comb.map_point(y));
                assert!(dy <= comb.distance(x, y) + 1e-9, "{x:?} {y:?}");
            }
        }
    }

    #[test]
    fn comb_geodesics() {
        let comb = CombTree::new(4).unwrap();
        let (a, b) = (comb.tooth_end(1), CombPoint::Tooth { n: 3, j: 2 });
        let path = comb.geodesic(&a, &b, 1.0).unwrap();
        assert_eq!(path.len() as f64, comb.distance(&a, &b) + 1.0);
        assert!(path.windows(2).all(|p| comb.distance(&p[0], &p[1]) == 1.0));
    }
}
