//! Region masks, availability matrices and the exclusion procedure.
//!
//! A constraint is evaluated into a boolean exclusion grid on the region
//! mask's lattice and then folded into the availability matrix with
//! `avail &= !excl`. Raster sources are clipped, indicated and warped before
//! any buffering; vector sources are filtered, segmentized, transformed and
//! buffered as geometries (or through a pixel round trip when the area-based
//! method is selected).

use std::sync::Arc;

use crate::catalog::Motivation;
use crate::error::{Error, Result};
use crate::geometry::{buffer, polygonize, segmentize};
use crate::prior::{prior_exclusion, PriorDataset};
use crate::raster::{clip, indicate, warp_indication, BoolGrid, FloatGrid, GeoRef, RasterGrid};
use crate::srs::Transformer;
use crate::vector::{
    filter_attributes, filter_spatial, rasterize_geometries, AttributeFilter, FeatureSet, RasterizeRule,
};
use crate::{Coord, Extent, Geometry, Srs};

/// Approximate meters per degree, used to express metric lengths in
/// geographic units.
const METERS_PER_DEGREE: f64 = 111_320.0;

const LATTICE_EPS: f64 = 1e-9;

/// Length units of `srs` per meter.
pub(crate) fn units_per_meter(srs: &Srs) -> f64 {
    if srs.is_geographic() {
        1.0 / METERS_PER_DEGREE
    } else {
        1.0
    }
}

/// Boolean grid of pixels mostly inside the region, plus its georeference.
#[derive(Clone, Debug)]
pub struct RegionMask {
    pub georef: GeoRef,
    pub mask: BoolGrid,
    /// Region geometry in the mask's SRS.
    pub source_geometry: Geometry,
}

impl RegionMask {
    /// Wraps an existing mask grid; the source geometry is its polygonization.
    pub fn from_mask(mask: BoolGrid) -> Self {
        RegionMask { georef: *mask.georef(), source_geometry: polygonize(&mask), mask }
    }

    pub fn region_pixels(&self) -> usize {
        self.mask.count_true()
    }
}

/// Transforms `g` into `to`, densifying edges first so that curved images of
/// straight source edges stay within half a pixel of `spacing` meters.
pub(crate) fn transform_geometry(g: &Geometry, from: &Srs, to: &Srs, spacing_m: f64) -> Result<Geometry> {
    let tf = Transformer::new(from, to)?;
    if tf.is_identity() {
        return Ok(g.clone());
    }
    let dense = segmentize(g, spacing_m * units_per_meter(from))?;
    dense.try_map_coords(|c| tf.apply(c.x, c.y).map(|(x, y)| Coord::new(x, y)))
}

/// Bounds, in `to`, of the image of `ext` given in `from`. The boundary is
/// sampled densely; points without an image are skipped.
pub(crate) fn extent_in(ext: &Extent, from: &Srs, to: &Srs) -> Result<Extent> {
    let tf = Transformer::new(from, to)?;
    if tf.is_identity() {
        return Ok(*ext);
    }
    const STEPS: usize = 32;
    let mut out: Option<Extent> = None;
    let mut first_err = None;
    for k in 0..=STEPS {
        let t = k as f64 / STEPS as f64;
        let x = ext.x_min + t * ext.width();
        let y = ext.y_min + t * ext.height();
        for (px, py) in [(x, ext.y_min), (x, ext.y_max), (ext.x_min, y), (ext.x_max, y)] {
            match tf.apply(px, py) {
                Ok((qx, qy)) => {
                    let p = Extent { x_min: qx, y_min: qy, x_max: qx, y_max: qy };
                    out = Some(out.map_or(p, |e| e.union(&p)));
                }
                Err(e) => first_err = first_err.or(Some(e)),
            }
        }
    }
    out.ok_or_else(|| first_err.unwrap_or(Error::NoOverlap))
}

/// Rasterizes `region` (given in `region_srs`) onto a lattice of `dx`×`dy`
/// anchored at the `out_srs` origin. The extent is the smallest lattice
/// rectangle containing the transformed region.
pub fn make_region_mask(region: &Geometry, region_srs: &Srs, out_srs: &Srs, dx: f64, dy: f64) -> Result<RegionMask> {
    if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
        return Err(Error::NonPositiveResolution);
    }
    if region.polygons().is_empty() {
        return Err(Error::EmptyRegion);
    }
    let areal = Geometry::MultiPolygon(region.polygons().to_vec());
    let spacing_m = dx.min(dy) / 2.0 / units_per_meter(out_srs);
    let g = transform_geometry(&areal, region_srs, out_srs, spacing_m)?;
    let env = crate::geometry::envelope(&g).map_err(|_| Error::EmptyRegion)?;
    let snap_lo = |v: f64, d: f64| (v / d + LATTICE_EPS).floor() * d;
    let snap_hi = |v: f64, d: f64| (v / d - LATTICE_EPS).ceil() * d;
    let x_min = snap_lo(env.x_min, dx);
    let y_min = snap_lo(env.y_min, dy);
    let nx = (((snap_hi(env.x_max, dx) - x_min) / dx).round() as usize).max(1);
    let ny = (((snap_hi(env.y_max, dy) - y_min) / dy).round() as usize).max(1);
    let georef = GeoRef::new(*out_srs, x_min, y_min + ny as f64 * dy, dx, dy, nx, ny)?;
    let mask = rasterize_geometries([&g], &georef, RasterizeRule::MostlyWithin);
    Ok(RegionMask { georef, mask, source_geometry: g })
}

/// Per-step bookkeeping of an availability matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub label: String,
    /// Pixels that this step turned from available to excluded.
    pub removed: usize,
    /// Available pixels after this step.
    pub remaining: usize,
}

#[derive(Clone, Debug)]
pub struct AvailabilityMatrix {
    pub georef: GeoRef,
    pub avail: BoolGrid,
    pub applied: Vec<String>,
    pub steps: Vec<StepRecord>,
    pub warnings: Vec<String>,
}

impl AvailabilityMatrix {
    pub fn available_pixels(&self) -> usize {
        self.avail.count_true()
    }

    /// `avail &= !excl`, recording the step under `label`.
    pub fn apply(&mut self, excl: &BoolGrid, label: &str) -> Result<()> {
        self.georef.check_congruent(excl.georef())?;
        let mut removed = 0;
        for (a, e) in self.avail.values_mut().iter_mut().zip(excl.values()) {
            if *a && *e {
                *a = false;
                removed += 1;
            }
        }
        self.applied.push(label.to_string());
        self.steps.push(StepRecord { label: label.to_string(), removed, remaining: self.available_pixels() });
        Ok(())
    }
}

/// Fresh availability: every region pixel is available.
pub fn init_availability(rm: &RegionMask) -> AvailabilityMatrix {
    AvailabilityMatrix {
        georef: rm.georef,
        avail: rm.mask.clone(),
        applied: Vec::new(),
        steps: Vec::new(),
        warnings: Vec::new(),
    }
}

pub fn apply_exclusion(mut am: AvailabilityMatrix, excl: &BoolGrid, label: &str) -> Result<AvailabilityMatrix> {
    am.apply(excl, label)?;
    Ok(am)
}

/// Available region pixels as a fraction of all region pixels; 0 for an
/// empty region.
pub fn percent_available(am: &AvailabilityMatrix, rm: &RegionMask) -> Result<f64> {
    am.georef.check_congruent(&rm.georef)?;
    let region = rm.region_pixels();
    if region == 0 {
        return Ok(0.0);
    }
    let avail = am.avail.values().iter().zip(rm.mask.values()).filter(|(a, m)| **a && **m).count();
    Ok(avail as f64 / region as f64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BufferMethod {
    /// Buffer the (transformed) geometries, then rasterize.
    #[default]
    GeometryBased,
    /// Rasterize, polygonize the pixels, buffer, rasterize again.
    AreaBased,
}

#[derive(Clone, Debug)]
pub enum ExclusionSource {
    /// Pixels with `min ≤ value ≤ max` are indicated.
    Raster { grid: Arc<FloatGrid>, min: Option<f64>, max: Option<f64> },
    /// Features passing the optional filter are indicated.
    Vector { features: Arc<FeatureSet>, filter: Option<AttributeFilter> },
    /// Criterion thresholds translated to prior edge indexes.
    Prior { prior: Arc<PriorDataset>, min: Option<f64>, max: Option<f64> },
}

/// One exclusion constraint.
#[derive(Clone, Debug)]
pub struct ExclusionRequest {
    pub label: String,
    pub motivation: Motivation,
    pub source: ExclusionSource,
    /// Buffer distance in meters; zero is the same as none.
    pub buffer: Option<f64>,
    pub method: BufferMethod,
    /// Exclude what lies outside the (buffered) indication instead of what
    /// lies inside. Expresses "distances above" constraints on vector and
    /// raster sources.
    pub invert: bool,
}

impl ExclusionRequest {
    pub fn new(label: &str, motivation: Motivation, source: ExclusionSource) -> Self {
        ExclusionRequest {
            label: label.to_string(),
            motivation,
            source,
            buffer: None,
            method: BufferMethod::GeometryBased,
            invert: false,
        }
    }

    pub fn with_buffer(mut self, meters: f64) -> Self {
        self.buffer = Some(meters);
        self
    }

    pub fn with_method(mut self, method: BufferMethod) -> Self {
        self.method = method;
        self
    }

    pub fn inverted(mut self) -> Self {
        self.invert = true;
        self
    }

    /// Evaluates the constraint on the region's lattice. The returned grid
    /// is already restricted to the region.
    pub fn evaluate(&self, rm: &RegionMask) -> Result<Evaluation> {
        self.evaluate_inner(rm).map_err(|e| e.in_constraint(&self.label))
    }

    fn evaluate_inner(&self, rm: &RegionMask) -> Result<Evaluation> {
        let buffer = match self.buffer {
            Some(b) if !(b >= 0.0 && b.is_finite()) => return Err(Error::NegativeDistance),
            Some(b) if b > 0.0 => Some(b),
            _ => None,
        };
        let georef = &rm.georef;
        let mut warnings = Vec::new();
        let indicated = match &self.source {
            ExclusionSource::Raster { grid, min, max } => {
                raster_indication(grid, *min, *max, georef, buffer, &mut warnings)?
            }
            ExclusionSource::Vector { features, filter } => {
                vector_indication(features, filter.as_ref(), georef, buffer, self.method, &mut warnings)?
            }
            ExclusionSource::Prior { prior, min, max } => {
                let (grid, w) = prior_exclusion(prior, georef, *min, *max)?;
                warnings.extend(w);
                match buffer {
                    Some(d) => area_buffer(&grid, georef, d)?,
                    None => grid,
                }
            }
        };
        let mut excluded = indicated;
        for (e, m) in excluded.values_mut().iter_mut().zip(rm.mask.values()) {
            *e = (*e != self.invert) && *m;
        }
        let warnings = warnings.into_iter().map(|w| format!("{}: {w}", self.label)).collect();
        Ok(Evaluation { excluded, warnings })
    }
}

/// Result of evaluating one constraint.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub excluded: BoolGrid,
    pub warnings: Vec<String>,
}

/// Evaluates `req` and applies it to `am`, keeping its warnings.
pub fn exclude(am: &mut AvailabilityMatrix, rm: &RegionMask, req: &ExclusionRequest) -> Result<()> {
    let ev = req.evaluate(rm)?;
    am.warnings.extend(ev.warnings);
    am.apply(&ev.excluded, &req.label)
}

/// Raster track: clip, indicate, warp, then optionally buffer.
pub fn exclude_raster(
    am: &mut AvailabilityMatrix,
    rm: &RegionMask,
    src: Arc<FloatGrid>,
    min: Option<f64>,
    max: Option<f64>,
    buffer: Option<f64>,
    label: &str,
) -> Result<()> {
    let mut req = ExclusionRequest::new(label, Motivation::Physical, ExclusionSource::Raster { grid: src, min, max });
    req.buffer = buffer;
    exclude(am, rm, &req)
}

/// Vector track: filter, then geometry- or area-based buffering.
pub fn exclude_vector(
    am: &mut AvailabilityMatrix,
    rm: &RegionMask,
    src: Arc<FeatureSet>,
    filter: Option<AttributeFilter>,
    buffer: Option<f64>,
    method: BufferMethod,
    label: &str,
) -> Result<()> {
    let mut req =
        ExclusionRequest::new(label, Motivation::Sociopolitical, ExclusionSource::Vector { features: src, filter });
    req.buffer = buffer;
    req.method = method;
    exclude(am, rm, &req)
}

/// Grid on the same lattice as `g`, grown by whole pixels on every side so
/// that indications within `d` meters of the extent are kept.
fn padded(g: &GeoRef, d: f64) -> Result<GeoRef> {
    let d = d * units_per_meter(&g.srs);
    let px = (d / g.dx).ceil() as usize;
    let py = (d / g.dy).ceil() as usize;
    GeoRef::new(
        g.srs,
        g.x_min() - px as f64 * g.dx,
        g.y_max() + py as f64 * g.dy,
        g.dx,
        g.dy,
        g.nx + 2 * px,
        g.ny + 2 * py,
    )
}

fn arc_tolerance(g: &GeoRef) -> f64 {
    g.dx.min(g.dy) / 8.0
}

/// Polygonizes `ind`, buffers by `d` meters and rasterizes onto `target`.
fn area_buffer(ind: &BoolGrid, target: &GeoRef, d: f64) -> Result<BoolGrid> {
    let shapes = polygonize(ind);
    if shapes.is_empty() {
        return Ok(RasterGrid::filled(*target, false));
    }
    let grown = buffer(&shapes, d * units_per_meter(&target.srs), arc_tolerance(target))?;
    Ok(rasterize_geometries([&grown], target, RasterizeRule::MostlyWithin))
}

fn raster_indication(
    src: &FloatGrid,
    min: Option<f64>,
    max: Option<f64>,
    georef: &GeoRef,
    buffer: Option<f64>,
    warnings: &mut Vec<String>,
) -> Result<BoolGrid> {
    let work = match buffer {
        Some(d) => padded(georef, d)?,
        None => *georef,
    };
    let src_g = src.georef();
    // One source pixel of margin keeps bilinear neighbours at the edges.
    let margin = src_g.dx.max(src_g.dy);
    let want = extent_in(&work.extent, &work.srs, &src_g.srs)?.grow(margin);
    let clipped = match clip(src, &want) {
        Ok(c) => c,
        Err(Error::NoOverlap) => {
            warnings.push("raster source does not overlap the region".into());
            return Ok(RasterGrid::filled(*georef, false));
        }
        Err(e) => return Err(e),
    };
    let ind = indicate(&clipped, min, max)?;
    if ind.count_true() == 0 {
        warnings.push("indication matched no pixel".into());
        return Ok(RasterGrid::filled(*georef, false));
    }
    let warped = warp_indication(&ind, &work)?;
    match buffer {
        Some(d) => area_buffer(&warped, georef, d),
        None => Ok(warped),
    }
}

fn vector_indication(
    fs: &FeatureSet,
    filter: Option<&AttributeFilter>,
    georef: &GeoRef,
    buffer: Option<f64>,
    method: BufferMethod,
    warnings: &mut Vec<String>,
) -> Result<BoolGrid> {
    let reach = buffer.unwrap_or(0.0) * units_per_meter(&georef.srs);
    let want = extent_in(&georef.extent.grow(reach + georef.dx.max(georef.dy)), &georef.srs, &fs.srs)?;
    let mut selected = filter_spatial(fs, &want);
    if let Some(f) = filter {
        selected = filter_attributes(&selected, f);
    }
    if selected.is_empty() {
        warnings.push("no feature selected".into());
        return Ok(RasterGrid::filled(*georef, false));
    }
    let spacing_m = georef.dx.min(georef.dy) / 2.0 / units_per_meter(&georef.srs);
    let geoms = selected
        .geometries()
        .map(|g| transform_geometry(g, &fs.srs, &georef.srs, spacing_m))
        .collect::<Result<Vec<_>>>()?;
    let Some(d) = buffer else {
        return Ok(rasterize_geometries(geoms.iter(), georef, RasterizeRule::MostlyWithin));
    };
    match method {
        BufferMethod::GeometryBased => {
            let tol = arc_tolerance(georef);
            let d = d * units_per_meter(&georef.srs);
            let grown = geoms.iter().map(|g| crate::geometry::buffer(g, d, tol)).collect::<Result<Vec<_>>>()?;
            Ok(rasterize_geometries(grown.iter(), georef, RasterizeRule::MostlyWithin))
        }
        BufferMethod::AreaBased => {
            let work = padded(georef, d)?;
            let ind = rasterize_geometries(geoms.iter(), &work, RasterizeRule::MostlyWithin);
            area_buffer(&ind, georef, d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_segment_distance;
    use crate::vector::{AttrValue, Feature};
    use crate::{LineString, Polygon};

    fn square_region(n: usize, d: f64) -> RegionMask {
        let p = Polygon::rect(0.0, 0.0, n as f64 * d, n as f64 * d).unwrap();
        make_region_mask(&Geometry::Polygon(p), &Srs::LocalMeters, &Srs::LocalMeters, d, d).unwrap()
    }

    #[test]
    fn aligned_square_region() {
        let rm = square_region(10, 100.0);
        assert_eq!((rm.georef.nx, rm.georef.ny), (10, 10));
        assert_eq!(rm.georef.extent, Extent::new(0.0, 0.0, 1000.0, 1000.0).unwrap());
        assert_eq!(rm.region_pixels(), 100);
    }

    #[test]
    fn straddling_region_snaps_outward() {
        let p = Polygon::rect(130.0, -70.0, 520.0, 260.0).unwrap();
        let rm = make_region_mask(&Geometry::Polygon(p), &Srs::LocalMeters, &Srs::LocalMeters, 100.0, 100.0).unwrap();
        assert_eq!(rm.georef.extent, Extent::new(100.0, -100.0, 600.0, 300.0).unwrap());
    }

    #[test]
    fn region_errors() {
        let pt = Geometry::Point(Coord::new(0.0, 0.0));
        assert!(matches!(
            make_region_mask(&pt, &Srs::LocalMeters, &Srs::LocalMeters, 1.0, 1.0),
            Err(Error::EmptyRegion)
        ));
        let sq = Geometry::Polygon(Polygon::rect(0.0, 0.0, 1.0, 1.0).unwrap());
        assert!(matches!(
            make_region_mask(&sq, &Srs::LocalMeters, &Srs::LocalMeters, 0.0, 1.0),
            Err(Error::NonPositiveResolution)
        ));
        assert!(matches!(
            make_region_mask(&sq, &Srs::LocalMeters, &Srs::Geographic, 1.0, 1.0),
            Err(Error::UnsupportedSrsPair { .. })
        ));
    }

    #[test]
    fn geographic_region_into_laea() {
        let p = Polygon::rect(9.0, 51.0, 10.0, 52.0).unwrap();
        let rm = make_region_mask(&Geometry::Polygon(p), &Srs::Geographic, &Srs::laea3035(), 1000.0, 1000.0).unwrap();
        // A 1°×1° cell at 51.5°N is about 69 km × 111 km.
        let area = rm.region_pixels() as f64 * 1e6;
        assert!((area / 7.7e9 - 1.0).abs() < 0.02, "{area}");
    }

    #[test]
    fn availability_starts_as_mask_and_apply_counts() {
        let rm = square_region(2, 1.0);
        let mut am = init_availability(&rm);
        assert_eq!(am.avail, rm.mask);
        let excl = RasterGrid::new(rm.georef, vec![true, false, false, false], None).unwrap();
        am.apply(&excl, "a").unwrap();
        assert_eq!(am.avail.values(), &[false, true, true, true]);
        assert_eq!(percent_available(&am, &rm).unwrap(), 0.75);
        am.apply(&excl, "a again").unwrap();
        assert_eq!(am.steps[1].removed, 0);
        assert_eq!(am.applied, vec!["a", "a again"]);
    }

    #[test]
    fn apply_checks_shape() {
        let rm = square_region(2, 1.0);
        let other = square_region(3, 1.0);
        let mut am = init_availability(&rm);
        assert!(matches!(am.apply(&other.mask, "x"), Err(Error::ShapeMismatch(_))));
    }

    fn constant_raster(rm: &RegionMask, v: f32) -> FloatGrid {
        RasterGrid::filled(rm.georef, v)
    }

    #[test]
    fn raster_indication_of_nothing_leaves_am() {
        let rm = square_region(8, 10.0);
        let mut am = init_availability(&rm);
        exclude_raster(&mut am, &rm, Arc::new(constant_raster(&rm, 1.0)), Some(5.0), None, None, "none").unwrap();
        assert_eq!(am.available_pixels(), 64);
        assert_eq!(am.applied, vec!["none"]);
        assert_eq!(am.warnings.len(), 1);
    }

    #[test]
    fn raster_single_pixel_no_buffer() {
        let rm = square_region(8, 10.0);
        let mut r = constant_raster(&rm, 0.0);
        r.set(3, 4, 9.0);
        let mut am = init_availability(&rm);
        exclude_raster(&mut am, &rm, Arc::new(r), Some(9.0), Some(9.0), None, "one").unwrap();
        assert_eq!(am.available_pixels(), 63);
        assert!(!am.avail.get(3, 4));
    }

    #[test]
    fn raster_no_overlap_is_warning() {
        let rm = square_region(4, 10.0);
        let far = GeoRef::new(Srs::LocalMeters, 1e6, 1e6, 10.0, 10.0, 2, 2).unwrap();
        let mut am = init_availability(&rm);
        exclude_raster(&mut am, &rm, Arc::new(RasterGrid::filled(far, 1.0)), Some(0.0), None, None, "far").unwrap();
        assert_eq!(am.available_pixels(), 16);
        assert!(am.warnings[0].contains("does not overlap"));
    }

    #[test]
    fn polygon_without_buffer_matches_rasterize() {
        let rm = square_region(20, 10.0);
        let poly = Geometry::Polygon(Polygon::rect(33.0, 41.0, 127.0, 158.0).unwrap());
        let fs = FeatureSet::new(Srs::LocalMeters, vec![Feature::new(poly.clone())]);
        let ev = ExclusionRequest::new(
            "p",
            Motivation::Physical,
            ExclusionSource::Vector { features: Arc::new(fs), filter: None },
        )
        .evaluate(&rm)
        .unwrap();
        assert_eq!(ev.excluded, rasterize_geometries([&poly], &rm.georef, RasterizeRule::MostlyWithin));
    }

    #[test]
    fn line_buffer_matches_brute_force() {
        let rm = square_region(40, 10.0);
        let (a, b) = (Coord::new(35.0, 52.0), Coord::new(310.0, 287.0));
        let line = Geometry::LineString(LineString::new(vec![a, b]).unwrap());
        let fs = Arc::new(FeatureSet::new(Srs::LocalMeters, vec![Feature::new(line)]));
        let ev =
            ExclusionRequest::new("l", Motivation::Physical, ExclusionSource::Vector { features: fs, filter: None })
                .with_buffer(60.0)
                .evaluate(&rm)
                .unwrap();
        let band = 0.5 * 10f64.hypot(10.0);
        for r in 0..40 {
            for c in 0..40 {
                let d = point_segment_distance(&rm.georef.pixel_center(r, c), &a, &b);
                if d < 60.0 - band {
                    assert!(ev.excluded.get(r, c), "{r},{c} d={d}");
                } else if d > 60.0 + band {
                    assert!(!ev.excluded.get(r, c), "{r},{c} d={d}");
                }
            }
        }
    }

    #[test]
    fn attribute_filter_and_empty_selection() {
        let rm = square_region(10, 10.0);
        let pt = |x: f64, kind: &str| {
            Feature::new(Geometry::Point(Coord::new(x, 50.0))).with_attr("kind", AttrValue::Str(kind.into()))
        };
        let fs = Arc::new(FeatureSet::new(Srs::LocalMeters, vec![pt(15.0, "a"), pt(75.0, "b")]));
        let mut am = init_availability(&rm);
        let f = AttributeFilter::parse("kind = \"b\"").unwrap();
        exclude_vector(&mut am, &rm, fs.clone(), Some(f), None, BufferMethod::GeometryBased, "b").unwrap();
        // A point on a pixel edge touches two pixels.
        assert_eq!(am.available_pixels(), 98);
        let f = AttributeFilter::parse("kind = \"zzz\"").unwrap();
        exclude_vector(&mut am, &rm, fs, Some(f), Some(100.0), BufferMethod::GeometryBased, "zzz").unwrap();
        assert_eq!(am.available_pixels(), 98);
        assert!(am.warnings.iter().any(|w| w.starts_with("zzz:")));
    }

    #[test]
    fn geometry_and_area_buffering_agree_within_a_band() {
        let rm = square_region(40, 10.0);
        let poly = Geometry::Polygon(
            Polygon::new(vec![Coord::new(100.0, 100.0), Coord::new(250.0, 120.0), Coord::new(180.0, 260.0)], vec![])
                .unwrap(),
        );
        let fs = Arc::new(FeatureSet::new(Srs::LocalMeters, vec![Feature::new(poly.clone())]));
        let run = |m: BufferMethod| {
            ExclusionRequest::new(
                "p",
                Motivation::Physical,
                ExclusionSource::Vector { features: fs.clone(), filter: None },
            )
            .with_buffer(50.0)
            .with_method(m)
            .evaluate(&rm)
            .unwrap()
            .excluded
        };
        let g = run(BufferMethod::GeometryBased);
        let a = run(BufferMethod::AreaBased);
        let grown = buffer(&poly, 50.0, 0.5).unwrap();
        let band = 1.5 * 10f64.hypot(10.0);
        for r in 0..40 {
            for c in 0..40 {
                if g.get(r, c) != a.get(r, c) {
                    let d = poly.distance_to(&rm.georef.pixel_center(r, c));
                    assert!((d - 50.0).abs() <= band, "{r},{c} d={d}");
                }
            }
        }
        assert!(grown.contains(&Coord::new(175.0, 175.0)));
    }

    #[test]
    fn inverted_request_excludes_far_pixels() {
        let rm = square_region(10, 10.0);
        let fs =
            Arc::new(FeatureSet::new(Srs::LocalMeters, vec![Feature::new(Geometry::Point(Coord::new(5.0, 95.0)))]));
        let ev =
            ExclusionRequest::new("far", Motivation::Economic, ExclusionSource::Vector { features: fs, filter: None })
                .with_buffer(30.0)
                .inverted()
                .evaluate(&rm)
                .unwrap();
        assert!(!ev.excluded.get(0, 0));
        assert!(ev.excluded.get(9, 9));
    }

    #[test]
    fn errors_name_the_constraint() {
        let rm = square_region(4, 10.0);
        let fs = Arc::new(FeatureSet::new(Srs::Geographic, vec![]));
        let err = ExclusionRequest::new(
            "roads",
            Motivation::Physical,
            ExclusionSource::Vector { features: fs, filter: None },
        )
        .evaluate(&rm)
        .unwrap_err();
        assert!(err.to_string().contains("roads"));
    }
}
