//! The hyperbolic plane in geodesic polar coordinates about a basepoint.
//!
//! Distances use the polar law of cosines in its half-angle form
//! `sinh²(d/2) = sinh²((r₁-r₂)/2) + sinh r₁ sinh r₂ sin²(Δφ/2)`, which stays
//! accurate for nearby points where `acosh` near 1 would not.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::metric::{SpaceModel, ANALYTIC_GEODESIC_SLACK};

/// A point `(r, φ)`: hyperbolic distance `r` from the basepoint, angle `φ`
/// (stored unreduced, read mod 2π).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub phi: f64,
}

impl PolarPoint {
    pub const BASEPOINT: PolarPoint = PolarPoint { r: 0.0, phi: 0.0 };

    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(usage(format!("polar radius must be nonnegative, got {r}")));
        }
        Ok(PolarPoint { r, phi })
    }

    /// Angle reduced to `[0, 2π)`.
    pub fn reduced_phi(&self) -> f64 {
        reduce_angle(self.phi)
    }

    /// Position in the Poincaré disc, `tanh(r/2) · (cos φ, sin φ)`.
    pub fn to_disc(&self) -> (f64, f64) {
        let rho = (self.r / 2.0).tanh();
        (rho * self.phi.cos(), rho * self.phi.sin())
    }

    fn to_hyperboloid(self) -> [f64; 3] {
        let s = self.r.sinh();
        [self.r.cosh(), s * self.phi.cos(), s * self.phi.sin()]
    }

    fn from_hyperboloid(v: [f64; 3]) -> Self {
        let s = v[1].hypot(v[2]);
        PolarPoint {
            r: s.asinh(),
            phi: v[2].atan2(v[1]),
        }
    }
}

impl PartialEq for PolarPoint {
    fn eq(&self, other: &Self) -> bool {
        if self.r == 0.0 && other.r == 0.0 {
            return true;
        }
        self.r == other.r && angle_gap(self.phi, other.phi) == 0.0
    }
}

/// `φ mod 2π` in `[0, 2π)`.
pub fn reduce_angle(phi: f64) -> f64 {
    let t = phi.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Unsigned angular difference in `[0, π]`.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let t = reduce_angle(a - b);
    t.min(TAU - t)
}

pub fn distance(p: &PolarPoint, q: &PolarPoint) -> f64 {
    let radial = ((p.r - q.r) / 2.0).sinh();
    let angular = ((p.phi - q.phi) / 2.0).sin();
    let s2 = radial * radial + p.r.sinh() * q.r.sinh() * angular * angular;
    2.0 * s2.sqrt().asinh()
}

/// Gromov product of `p` and `q` at the basepoint.
pub fn product_at_basepoint(p: &PolarPoint, q: &PolarPoint) -> f64 {
    0.5 * (p.r + q.r - distance(p, q))
}

/// The point at distance `r` from the basepoint on the ray at angle `φ`.
pub fn point_a(r: f64, phi: f64) -> Result<PolarPoint> {
    PolarPoint::new(r, phi)
}

/// The point at distance `r + 1` on the same ray.
pub fn point_b(r: f64, phi: f64) -> Result<PolarPoint> {
    if !(r >= 0.0) {
        return Err(usage(format!("polar radius must be nonnegative, got {r}")));
    }
    PolarPoint::new(r + 1.0, phi)
}

/// Arc-length point of the radial unit segment from `A(r,φ)` to `B(r,φ)`.
pub fn segment_l(r: f64, phi: f64, t: f64) -> Result<PolarPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(usage(format!("segment parameter must lie in [0,1], got {t}")));
    }
    if !(r >= 0.0) {
        return Err(usage(format!("polar radius must be nonnegative, got {r}")));
    }
    PolarPoint::new(r + t, phi)
}

/// Length of the circle of radius `n`, `2π sinh n`.
pub fn circumference(n: f64) -> f64 {
    TAU * n.sinh()
}

/// Samples of the geodesic from `p` to `q`, spaced at most `step` apart.
///
/// Interpolates on the hyperboloid, `(sinh(d-s) P + sinh(s) Q) / sinh d`,
/// and converts back to polar form. Endpoints are returned exactly.
pub fn geodesic(p: &PolarPoint, q: &PolarPoint, step: f64) -> Result<Vec<PolarPoint>> {
    if !(step > 0.0) {
        return Err(usage(format!("geodesic step must be positive, got {step}")));
    }
    let d = distance(p, q);
    if d == 0.0 {
        return Ok(vec![*p]);
    }
    let n = (d / step).ceil().max(1.0) as usize;
    let mut out = Vec::with_capacity(n + 1);
    out.push(*p);
    out.extend((1..n).map(|i| point_along(p, q, d * i as f64 / n as f64)));
    out.push(*q);
    Ok(out)
}

/// The point at arc length `s` (clamped to `[0, d(p,q)]`) along the geodesic
/// from `p` to `q`.
pub fn point_along(p: &PolarPoint, q: &PolarPoint, s: f64) -> PolarPoint {
    let d = distance(p, q);
    if d == 0.0 || s <= 0.0 {
        return *p;
    }
    if s >= d {
        return *q;
    }
    let (hp, hq) = (p.to_hyperboloid(), q.to_hyperboloid());
    let sd = d.sinh();
    let (wp, wq) = ((d - s).sinh() / sd, s.sinh() / sd);
    PolarPoint::from_hyperboloid(std::array::from_fn(|k| wp * hp[k] + wq * hq[k]))
}

/// Distance from `q` to the radial segment `{(ρ, φ) : lo ≤ ρ ≤ hi}`.
///
/// Distance to a geodesic is convex along it, so the foot of the
/// perpendicular to the full line, clamped into the segment, is optimal.
pub fn distance_to_radial_segment(q: &PolarPoint, phi: f64, lo: f64, hi: f64) -> f64 {
    let c = (q.phi - phi).cos();
    let foot = if c > 0.0 { (q.r.tanh() * c).atanh() } else { 0.0 };
    let rho = foot.clamp(lo, hi);
    distance(q, &PolarPoint { r: rho, phi })
}

/// The hyperbolic plane as a based model.
///
/// `enumerate(depth)` returns the basepoint and, for every integer radius
/// `k ≤ depth`, `⌈2π sinh k⌉` equally spaced points on the circle of radius
/// `k` (a net with circular gaps below 1).
#[derive(Clone, Copy, Debug, Default)]
pub struct HyperbolicPlane;

impl HyperbolicPlane {
    /// `count` points of the ball of radius `radius`, uniform for hyperbolic
    /// area, from a seeded generator.
    pub fn sample_ball(&self, radius: f64, count: usize, seed: u64) -> Vec<PolarPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let top = radius.cosh() - 1.0;
        (0..count)
            .map(|_| {
                let u: f64 = rng.gen();
                let phi: f64 = rng.gen::<f64>() * TAU;
                PolarPoint {
                    r: (1.0 + u * top).acosh(),
                    phi,
                }
            })
            .collect()
    }
}

impl SpaceModel for HyperbolicPlane {
    type Point = PolarPoint;

    fn basepoint(&self) -> PolarPoint {
        PolarPoint::BASEPOINT
    }

    fn distance(&self, x: &PolarPoint, y: &PolarPoint) -> f64 {
        distance(x, y)
    }

    fn enumerate(&self, depth: usize) -> Vec<PolarPoint> {
        let mut out = vec![PolarPoint::BASEPOINT];
        for k in 1..=depth {
            let m = circumference(k as f64).ceil() as usize;
            out.extend((0..m).map(|i| PolarPoint {
                r: k as f64,
                phi: TAU * i as f64 / m as f64,
            }));
        }
        out
    }

    fn geodesic(&self, x: &PolarPoint, y: &PolarPoint, step: f64) -> Result<Vec<PolarPoint>> {
        geodesic(x, y, step)
    }

    fn geodesic_slack(&self) -> f64 {
        ANALYTIC_GEODESIC_SLACK
    }

    fn visual_constant(&self) -> Option<f64> {
        Some(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pp(r: f64, phi: f64) -> PolarPoint {
        PolarPoint { r, phi }
    }

    #[test]
    fn distance_closed_forms() {
        assert!((distance(&pp(2.5, 1.0), &PolarPoint::BASEPOINT) - 2.5).abs() < 1e-12);
        assert!((distance(&pp(3.0, 0.7), &pp(5.5, 0.7)) - 2.5).abs() < 1e-12);
        assert!((distance(&pp(3.0, 0.0), &pp(3.0, PI)) - 6.0).abs() < 1e-12);
        assert_eq!(distance(&pp(4.0, 1.0), &pp(4.0, 1.0)), 0.0);
    }

    #[test]
    fn matches_law_of_cosines() {
        let (p, q) = (pp(1.3, 0.2), pp(2.1, 2.0));
        let c = 1.3f64.cosh() * 2.1f64.cosh() - 1.3f64.sinh() * 2.1f64.sinh() * (1.8f64).cos();
        assert!((distance(&p, &q) - c.acosh()).abs() < 1e-12);
    }

    #[test]
    fn basepoint_ignores_angle() {
        assert_eq!(pp(0.0, 1.0), pp(0.0, 4.0));
        assert_eq!(pp(1.0, 0.0), pp(1.0, TAU));
    }

    #[test]
    fn a_b_l_primitives() {
        assert_eq!(point_a(0.0, 1.2).unwrap(), PolarPoint::BASEPOINT);
        let b = point_b(0.0, FRAC_PI_2).unwrap();
        assert_eq!((b.r, b.phi), (1.0, FRAC_PI_2));
        let b = point_b(3.0, 0.0).unwrap();
        assert_eq!((b.r, b.phi), (4.0, 0.0));
        assert!(point_a(-1.0, 0.0).is_err());
        assert!(point_b(-0.5, 0.0).is_err());
        assert_eq!(segment_l(2.0, 0.3, 0.0).unwrap(), point_a(2.0, 0.3).unwrap());
        assert_eq!(segment_l(2.0, 0.3, 1.0).unwrap(), point_b(2.0, 0.3).unwrap());
        let m = segment_l(2.0, 0.0, 0.5).unwrap();
        assert_eq!((m.r, m.phi), (2.5, 0.0));
        assert!(segment_l(2.0, 0.0, 1.5).is_err());
    }

    #[test]
    fn circumference_values() {
        assert_eq!(circumference(0.0), 0.0);
        // 2π sinh 1 and 2π sinh 2 evaluated independently.
        assert!((circumference(1.0) - 7.384_007).abs() < 1e-6);
        assert!((circumference(2.0) - 22.788_236).abs() < 1e-6);
    }

    #[test]
    fn geodesic_on_a_ray_keeps_angle() {
        let g = geodesic(&pp(1.0, 0.4), &pp(4.0, 0.4), 0.3).unwrap();
        assert!(g.iter().all(|s| (s.phi - 0.4).abs() < 1e-12));
        assert!(g.windows(2).all(|w| distance(&w[0], &w[1]) <= 0.3 + 1e-12));
    }

    #[test]
    fn geodesic_through_basepoint() {
        let g = geodesic(&pp(2.0, 0.0), &pp(2.0, PI), 0.5).unwrap();
        assert_eq!(g.len(), 9);
        assert!(g[4].r < 1e-12);
    }

    #[test]
    fn geodesic_is_additive() {
        let (p, q) = (pp(2.0, 0.0), pp(2.0, FRAC_PI_2));
        let d = distance(&p, &q);
        let g = geodesic(&p, &q, 0.1).unwrap();
        for m in &g {
            assert!((distance(&p, m) + distance(m, &q) - d).abs() <= 1e-9);
        }
        assert!(geodesic(&p, &q, 0.0).is_err());
    }

    #[test]
    fn segment_distance_matches_sampling() {
        let q = pp(3.2, 0.9);
        for (phi, lo, hi) in [(0.5, 2.0, 3.0), (2.5, 1.0, 2.0), (0.9, 4.0, 5.0), (0.0, 0.0, 1.0)] {
            let exact = distance_to_radial_segment(&q, phi, lo, hi);
            let sampled = (0..=2000)
                .map(|i| distance(&q, &pp(lo + (hi - lo) * i as f64 / 2000.0, phi)))
                .fold(f64::INFINITY, f64::min);
            assert!(exact <= sampled + 1e-12);
            assert!(sampled - exact < 1e-5);
        }
    }

    #[test]
    fn net_enumeration_sizes() {
        let pts = HyperbolicPlane.enumerate(2);
        assert_eq!(pts.len(), 1 + 8 + 23);
    }
}
