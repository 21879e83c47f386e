//! Finite restrictions of maps between based spaces.
//!
//! Every checker consumes a [`FiniteMap`]: a list of source points, their
//! images, a distinguished basepoint `a` (whose image is `b = f(a)`), and
//! the two distance functions. Gromov products are taken at `a` and `b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{product_from_distances, SpaceModel};

pub trait FiniteMap: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the source basepoint.
    fn base(&self) -> usize;

    fn source_distance(&self, i: usize, j: usize) -> f64;

    fn image_distance(&self, i: usize, j: usize) -> f64;

    fn source_product(&self, i: usize, j: usize) -> f64 {
        let a = self.base();
        product_from_distances(self.source_distance(i, a), self.source_distance(j, a), self.source_distance(i, j))
    }

    fn image_product(&self, i: usize, j: usize) -> f64 {
        let a = self.base();
        product_from_distances(self.image_distance(i, a), self.image_distance(j, a), self.image_distance(i, j))
    }

    /// Human-readable `(source, image)` coordinates of point `i`.
    fn describe(&self, i: usize) -> (String, String);

    fn witness(&self, indices: &[usize]) -> Witness {
        let (points, images) = indices.iter().map(|&i| self.describe(i)).unzip();
        Witness { indices: indices.to_vec(), points, images }
    }
}

/// Point handles plus coordinates, as stored in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub points: Vec<String>,
    pub images: Vec<String>,
}

/// A map sampled on an explicit list of source points.
pub struct SampledMap<'a, S: SpaceModel, T: SpaceModel> {
    pub source: &'a S,
    pub target: &'a T,
    pub points: Vec<S::Point>,
    pub images: Vec<T::Point>,
    base: usize,
    src_to_base: Vec<f64>,
    img_to_base: Vec<f64>,
}

impl<'a, S: SpaceModel, T: SpaceModel> SampledMap<'a, S, T> {
    /// Applies `f` to every point; the source basepoint must be among them.
    pub fn new(source: &'a S, target: &'a T, points: Vec<S::Point>, f: impl Fn(&S::Point) -> T::Point) -> Result<Self> {
        let images = points.iter().map(f).collect();
        let a = source.basepoint();
        let base = points
            .iter()
            .position(|p| source.distance(p, &a) == 0.0)
            .ok_or_else(|| Error::Model("sample does not contain the basepoint".into()))?;
        Self::with_images(source, target, points, images, base)
    }

    pub fn with_images(source: &'a S, target: &'a T, points: Vec<S::Point>, images: Vec<T::Point>, base: usize) -> Result<Self> {
        if points.len() != images.len() {
            return Err(Error::Model("points and images differ in length".into()));
        }
        if base >= points.len() {
            return Err(Error::UnknownPoint(base));
        }
        let src_to_base = points.iter().map(|p| source.distance(p, &points[base])).collect();
        let img_to_base = images.iter().map(|q| target.distance(q, &images[base])).collect();
        Ok(SampledMap { source, target, points, images, base, src_to_base, img_to_base })
    }

    /// Same points, basepoint moved to index `base`.
    pub fn rebased(&self, base: usize) -> Result<SampledMap<'a, S, T>> {
        Self::with_images(self.source, self.target, self.points.clone(), self.images.clone(), base)
    }

    pub fn index_of(&self, p: &S::Point) -> Option<usize> {
        self.points.iter().position(|q| self.source.distance(p, q) == 0.0)
    }
}

impl<S: SpaceModel, T: SpaceModel> FiniteMap for SampledMap<'_, S, T> {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn base(&self) -> usize {
        self.base
    }

    fn source_distance(&self, i: usize, j: usize) -> f64 {
        self.source.distance(&self.points[i], &self.points[j])
    }

    fn image_distance(&self, i: usize, j: usize) -> f64 {
        self.target.distance(&self.images[i], &self.images[j])
    }

    fn source_product(&self, i: usize, j: usize) -> f64 {
        product_from_distances(self.src_to_base[i], self.src_to_base[j], self.source_distance(i, j))
    }

    fn image_product(&self, i: usize, j: usize) -> f64 {
        product_from_distances(self.img_to_base[i], self.img_to_base[j], self.image_distance(i, j))
    }

    fn describe(&self, i: usize) -> (String, String) {
        (format!("{:?}", self.points[i]), format!("{:?}", self.images[i]))
    }
}
