//! Grid data model and raster kernels: clip, warp, indicate and the exact
//! Euclidean distance transform.

mod edt;
pub mod io;

pub use edt::{distance_grid, distance_transform, squared_distance_transform};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::scan::GridSpec;
use crate::srs::Transformer;
use crate::{Coord, Extent, Srs};

/// Nodata written by float warps when the source carries none.
pub const FLOAT_NODATA: f32 = -9999.0;

const SNAP_EPS: f64 = 1e-9;

/// Georeference of a regular north-up grid. Row 0 is the northern row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeoRef {
    pub srs: Srs,
    pub extent: Extent,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GeoRef {
    /// Builds a georeference from its upper-left corner.
    pub fn new(srs: Srs, x_min: f64, y_max: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::NonPositiveResolution);
        }
        if !(x_min.is_finite() && y_max.is_finite()) {
            return Err(Error::InvalidGeoRef("corner is not finite".into()));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGeoRef(format!("empty grid {nx}x{ny}")));
        }
        let extent = Extent { x_min, y_min: y_max - ny as f64 * dy, x_max: x_min + nx as f64 * dx, y_max };
        Ok(GeoRef { srs, extent, dx, dy, nx, ny })
    }

    /// Builds a georeference whose extent must hold a whole number of pixels.
    pub fn from_extent(srs: Srs, extent: Extent, dx: f64, dy: f64) -> Result<Self> {
        if !(dx > 0.0 && dy > 0.0) {
            return Err(Error::NonPositiveResolution);
        }
        let fx = extent.width() / dx;
        let fy = extent.height() / dy;
        let (nx, ny) = (fx.round(), fy.round());
        if (fx - nx).abs() > SNAP_EPS * fx.max(1.0) || (fy - ny).abs() > SNAP_EPS * fy.max(1.0) {
            return Err(Error::InvalidGeoRef(format!(
                "extent {}x{} is not a multiple of the pixel size {dx}x{dy}",
                extent.width(),
                extent.height()
            )));
        }
        let mut g = GeoRef::new(srs, extent.x_min, extent.y_max, dx, dy, nx as usize, ny as usize)?;
        g.extent = extent;
        Ok(g)
    }

    pub fn x_min(&self) -> f64 {
        self.extent.x_min
    }

    pub fn y_max(&self) -> f64 {
        self.extent.y_max
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.extent.x_min,
            y_max: self.extent.y_max,
            dx: self.dx,
            dy: self.dy,
            nx: self.nx,
            ny: self.ny,
        }
    }

    pub fn pixel_center(&self, row: usize, col: usize) -> Coord {
        self.grid_spec().pixel_center(row, col)
    }

    pub fn footprint(&self, row: usize, col: usize) -> Extent {
        self.grid_spec().footprint(row, col)
    }

    pub fn pixel_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Same SRS, same shape and the same lattice within floating tolerance.
    pub fn congruent(&self, other: &GeoRef) -> bool {
        let close = |a: f64, b: f64, scale: f64| (a - b).abs() <= SNAP_EPS * scale.max(1.0);
        self.srs == other.srs
            && self.nx == other.nx
            && self.ny == other.ny
            && close(self.dx, other.dx, self.dx)
            && close(self.dy, other.dy, self.dy)
            && close(self.extent.x_min, other.extent.x_min, self.dx)
            && close(self.extent.y_max, other.extent.y_max, self.dy)
    }

    pub(crate) fn check_congruent(&self, other: &GeoRef) -> Result<()> {
        if self.congruent(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "{}x{} grid at ({}, {}) vs {}x{} grid at ({}, {})",
                self.nx,
                self.ny,
                self.extent.x_min,
                self.extent.y_max,
                other.nx,
                other.ny,
                other.extent.x_min,
                other.extent.y_max
            )))
        }
    }

    /// Fractional (column, row) position of a point, in pixel units from the
    /// upper-left corner.
    fn fractional(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.extent.x_min) / self.dx, (self.extent.y_max - y) / self.dy)
    }
}

/// Row-major grid of values with an optional nodata marker.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterGrid<V> {
    georef: GeoRef,
    values: Vec<V>,
    nodata: Option<V>,
}

pub type BoolGrid = RasterGrid<bool>;
pub type ByteGrid = RasterGrid<u8>;
pub type FloatGrid = RasterGrid<f32>;

impl<V: Copy + PartialEq> RasterGrid<V> {
    pub fn new(georef: GeoRef, values: Vec<V>, nodata: Option<V>) -> Result<Self> {
        if values.len() != georef.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                georef.nx,
                georef.ny
            )));
        }
        Ok(RasterGrid { georef, values, nodata })
    }

    pub fn filled(georef: GeoRef, value: V) -> Self {
        RasterGrid { values: vec![value; georef.len()], georef, nodata: None }
    }

    pub fn georef(&self) -> &GeoRef {
        &self.georef
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [V] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn nodata(&self) -> Option<V> {
        self.nodata
    }

    pub fn set_nodata(&mut self, nodata: Option<V>) {
        self.nodata = nodata;
    }

    pub fn get(&self, row: usize, col: usize) -> V {
        self.values[row * self.georef.nx + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: V) {
        let nx = self.georef.nx;
        self.values[row * nx + col] = v;
    }

    pub fn is_nodata(&self, v: V) -> bool {
        self.nodata == Some(v)
    }

    /// Applies `f` to every value; nodata maps to `nodata_out`.
    pub fn map<W: Copy + PartialEq>(&self, nodata_out: Option<W>, f: impl Fn(V) -> W) -> RasterGrid<W> {
        let values = self
            .values
            .iter()
            .map(|&v| match nodata_out {
                Some(nd) if self.is_nodata(v) => nd,
                _ => f(v),
            })
            .collect();
        RasterGrid { georef: self.georef, values, nodata: nodata_out }
    }

    pub(crate) fn with_georef(mut self, georef: GeoRef) -> Result<Self> {
        if georef.len() != self.values.len() {
            return Err(Error::ShapeMismatch("georef does not fit values".into()));
        }
        self.georef = georef;
        Ok(self)
    }
}

impl BoolGrid {
    pub fn count_true(&self) -> usize {
        self.values.iter().filter(|v| **v).count()
    }
}

/// Crops `r` to the smallest pixel-aligned window containing
/// `target ∩ r.extent`. Values are copied unchanged.
pub fn clip<V: Copy + PartialEq>(r: &RasterGrid<V>, target: &Extent) -> Result<RasterGrid<V>> {
    let g = &r.georef;
    let ov = g.extent.intersection(target).ok_or(Error::NoOverlap)?;
    if !(ov.width() > 0.0 && ov.height() > 0.0) {
        return Err(Error::NoOverlap);
    }
    let (fx0, fy0) = g.fractional(ov.x_min, ov.y_max);
    let (fx1, fy1) = g.fractional(ov.x_max, ov.y_min);
    let c0 = ((fx0 + SNAP_EPS).floor().max(0.0) as usize).min(g.nx - 1);
    let r0 = ((fy0 + SNAP_EPS).floor().max(0.0) as usize).min(g.ny - 1);
    let c1 = ((fx1 - SNAP_EPS).ceil() as usize).clamp(c0 + 1, g.nx);
    let r1 = ((fy1 - SNAP_EPS).ceil() as usize).clamp(r0 + 1, g.ny);
    let (nx, ny) = (c1 - c0, r1 - r0);
    let out_g =
        GeoRef::new(g.srs, g.extent.x_min + c0 as f64 * g.dx, g.extent.y_max - r0 as f64 * g.dy, g.dx, g.dy, nx, ny)?;
    let mut values = Vec::with_capacity(nx * ny);
    for row in r0..r1 {
        values.extend_from_slice(&r.values[row * g.nx + c0..row * g.nx + c1]);
    }
    RasterGrid::new(out_g, values, r.nodata)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resample {
    Bilinear,
    Nearest,
}

/// Source-SRS coordinates of every target pixel center, `None` where the
/// transform is undefined.
fn target_centers_in(src: &GeoRef, target: &GeoRef) -> Result<Vec<Option<(f64, f64)>>> {
    let tf = Transformer::new(&target.srs, &src.srs)?;
    let spec = target.grid_spec();
    Ok((0..target.len())
        .into_par_iter()
        .map(|i| {
            let c = spec.pixel_center(i / target.nx, i % target.nx);
            tf.apply(c.x, c.y).ok()
        })
        .collect())
}

/// Bilinear weights for a fractional position along one axis of `n` pixel
/// centers. Inside the outer half pixel the nearest two centers are
/// extrapolated linearly, so linear fields are reproduced everywhere.
fn axis_weights(f: f64, n: usize) -> (usize, usize, f64) {
    if n == 1 {
        return (0, 0, 0.0);
    }
    let u = f - 0.5;
    let i0 = (u.floor().max(0.0) as usize).min(n - 2);
    (i0, i0 + 1, u - i0 as f64)
}

fn inside_source(g: &GeoRef, fx: f64, fy: f64) -> bool {
    (0.0..=g.nx as f64).contains(&fx) && (0.0..=g.ny as f64).contains(&fy)
}

/// Bilinear sample of `values` at fractional position, `None` when a
/// contributing neighbour is nodata.
fn bilinear_at(g: &GeoRef, values: &[f64], valid: impl Fn(usize) -> bool, fx: f64, fy: f64) -> Option<f64> {
    let (c0, c1, tx) = axis_weights(fx, g.nx);
    let (r0, r1, ty) = axis_weights(fy, g.ny);
    let idx = |r: usize, c: usize| r * g.nx + c;
    let corners = [
        (idx(r0, c0), (1.0 - tx) * (1.0 - ty)),
        (idx(r0, c1), tx * (1.0 - ty)),
        (idx(r1, c0), (1.0 - tx) * ty),
        (idx(r1, c1), tx * ty),
    ];
    let mut acc = 0.0;
    for (i, w) in corners {
        if w == 0.0 {
            continue;
        }
        if !valid(i) {
            return None;
        }
        acc += w * values[i];
    }
    Some(acc)
}

/// Resamples a float grid onto `target` by sampling each target pixel center.
/// Pixels that map outside the source, or onto nodata, become nodata.
pub fn warp(r: &FloatGrid, target: &GeoRef, method: Resample) -> Result<FloatGrid> {
    let src = &r.georef;
    let nodata = r.nodata.unwrap_or(FLOAT_NODATA);
    let centers = target_centers_in(src, target)?;
    let as_f64: Vec<f64> = r.values.iter().map(|v| *v as f64).collect();
    let valid = |i: usize| !r.is_nodata(r.values[i]);
    let values = centers
        .par_iter()
        .map(|c| {
            let Some((x, y)) = *c else { return nodata };
            let (fx, fy) = src.fractional(x, y);
            if !inside_source(src, fx, fy) {
                return nodata;
            }
            match method {
                Resample::Nearest => r.values[nearest_index(src, fx, fy)],
                Resample::Bilinear => bilinear_at(src, &as_f64, valid, fx, fy).map_or(nodata, |v| v as f32),
            }
        })
        .collect();
    RasterGrid::new(*target, values, Some(nodata))
}

fn nearest_index(g: &GeoRef, fx: f64, fy: f64) -> usize {
    let c = (fx.floor().max(0.0) as usize).min(g.nx - 1);
    let r = (fy.floor().max(0.0) as usize).min(g.ny - 1);
    r * g.nx + c
}

/// Nearest-neighbour resampling for any value type. Pixels that map outside
/// the source receive `outside`.
pub fn warp_nearest<V: Copy + PartialEq + Send + Sync>(
    r: &RasterGrid<V>,
    target: &GeoRef,
    outside: V,
) -> Result<RasterGrid<V>> {
    let src = &r.georef;
    if src.congruent(target) {
        return r.clone().with_georef(*target);
    }
    let centers = target_centers_in(src, target)?;
    let values = centers
        .par_iter()
        .map(|c| match *c {
            Some((x, y)) => {
                let (fx, fy) = src.fractional(x, y);
                if inside_source(src, fx, fy) {
                    r.values[nearest_index(src, fx, fy)]
                } else {
                    outside
                }
            }
            None => outside,
        })
        .collect();
    RasterGrid::new(*target, values, r.nodata)
}

/// Warps a boolean indication by bilinear coverage and keeps pixels whose
/// coverage is strictly above one half. Pixels outside the source are false.
pub fn warp_indication(b: &BoolGrid, target: &GeoRef) -> Result<BoolGrid> {
    let src = &b.georef;
    if src.congruent(target) {
        return b.clone().with_georef(*target);
    }
    let centers = target_centers_in(src, target)?;
    let as_f64: Vec<f64> = b.values.iter().map(|v| if *v { 1.0 } else { 0.0 }).collect();
    let values = centers
        .par_iter()
        .map(|c| {
            let Some((x, y)) = *c else { return false };
            let (fx, fy) = src.fractional(x, y);
            inside_source(src, fx, fy)
                && bilinear_at(src, &as_f64, |_| true, fx, fy).is_some_and(|v| v.clamp(0.0, 1.0) > 0.5)
        })
        .collect();
    RasterGrid::new(*target, values, None)
}

/// Marks pixels with `min ≤ v ≤ max`. A missing bound is unbounded; nodata
/// is never indicated.
pub fn indicate<V>(r: &RasterGrid<V>, min: Option<f64>, max: Option<f64>) -> Result<BoolGrid>
where
    V: Copy + PartialEq + Into<f64>,
{
    if min.is_none() && max.is_none() {
        return Err(Error::NoBound);
    }
    let lo = min.unwrap_or(f64::NEG_INFINITY);
    let hi = max.unwrap_or(f64::INFINITY);
    if lo > hi || lo.is_nan() || hi.is_nan() {
        return Err(Error::EmptyRange);
    }
    let values = r
        .values
        .iter()
        .map(|&v| {
            if r.is_nodata(v) {
                return false;
            }
            let x: f64 = v.into();
            x >= lo && x <= hi
        })
        .collect();
    RasterGrid::new(r.georef, values, None)
}
