//! Land eligibility analysis engine.
//!
//! Computes, for a region, which pixels remain available after a set of
//! exclusion constraints drawn from raster sources, vector sources and
//! edge-indexed prior datasets, and quantifies how those constraints
//! interact (independent impact, pairwise overlap, motivation-group maps).
//!
//! The geometric and projection kernels are generic over a [`Real`] scalar.
//! The engine layers (rasters, exclusions, priors, analysis) are fixed to
//! `f64` coordinates through the aliases exported at the crate root.

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod exclusion;
pub mod geometry;
pub mod prior;
pub mod raster;
pub mod scalar;
pub mod srs;
pub mod vector;
pub mod workflow;

pub use error::{Error, Result};
pub use scalar::Real;

/// Planar coordinate in `f64`.
pub type Coord = geometry::Coord<f64>;
/// Axis-aligned bounds in `f64`.
pub type Extent = geometry::Extent<f64>;
/// Geometry in `f64` coordinates.
pub type Geometry = geometry::Geometry<f64>;
/// Polygon in `f64` coordinates.
pub type Polygon = geometry::Polygon<f64>;
/// Line string in `f64` coordinates.
pub type LineString = geometry::LineString<f64>;
/// Spatial reference system with `f64` parameters.
pub type Srs = srs::Srs<f64>;
/// Lambert azimuthal equal-area parameters in `f64`.
pub type LaeaParams = srs::LaeaParams<f64>;
/// Reference ellipsoid in `f64`.
pub type Ellipsoid = srs::Ellipsoid<f64>;

pub use raster::{BoolGrid, ByteGrid, FloatGrid, GeoRef, RasterGrid};
