//! Coarse hyperbolic geometry on finite samples.

mod clique;
pub mod boundary;
pub mod checkers;
pub mod cone;
pub mod error;
pub mod maps;
pub mod metric;
mod par;
pub mod plane;
pub mod render;
pub mod report;
pub mod sample;
pub mod suites;
pub mod tree;

pub use error::{Error, Result};
