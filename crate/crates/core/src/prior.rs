//! Edge-indexed prior datasets.
//!
//! A prior is a byte raster whose values index a strictly increasing list of
//! criterion thresholds ("edges"). Value 254 marks pixels captured by no
//! edge and 255 marks nodata.
//!
//! Three criterion kinds exist:
//!
//! * `Proximity`: value `i` is the smallest edge with
//!   `distance(pixel center, indication) <= edges[i]`; pixels touched by the
//!   raw indication get 0.
//! * `ValueBelow`: value `i` is the smallest edge with `v < edges[i]`.
//! * `ValueAbove`: value `i` is the largest edge with `v > edges[i]`.
//!
//! Thresholds are snapped to the nearest edge (ties to the smaller one).
//! Exclusion works on "buckets" ordered by increasing criterion value, so
//! that a maximum threshold removes the low buckets and a minimum threshold
//! removes the high ones, whatever the kind.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exclusion::{transform_geometry, units_per_meter, AvailabilityMatrix};
use crate::geometry::{point_in_polygon, point_segment_distance, polygonize};
use crate::raster::io::{read_asc, write_asc};
use crate::raster::{
    distance_transform, warp_nearest, BoolGrid, ByteGrid, FloatGrid, GeoRef, RasterGrid, FLOAT_NODATA,
};
use crate::vector::{rasterize_geometries, FeatureSet, RasterizeRule};
use crate::{Coord, Geometry};

pub const NO_INDICATION: u8 = 254;
pub const PRIOR_NODATA: u8 = 255;
pub const MAX_EDGES: usize = 254;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    Proximity,
    ValueBelow,
    ValueAbove,
}

impl CriterionKind {
    pub fn name(&self) -> &'static str {
        match self {
            CriterionKind::Proximity => "proximity",
            CriterionKind::ValueBelow => "value_below",
            CriterionKind::ValueAbove => "value_above",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PriorDataset {
    pub grid: ByteGrid,
    pub edges: Vec<f64>,
    pub kind: CriterionKind,
    pub units: String,
    pub name: String,
}

pub fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.is_empty() || edges.len() > MAX_EDGES {
        return Err(Error::EdgeCount(edges.len()));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NonMonotoneEdges);
    }
    Ok(())
}

/// Raw indication for a proximity prior.
#[derive(Clone, Copy, Debug)]
pub enum ProximitySource<'a> {
    /// Features, transformed to the target SRS when needed.
    Features(&'a FeatureSet),
    /// Indicated pixels on the target lattice; distances are measured to
    /// their footprints.
    Mask(&'a BoolGrid),
}

/// Builds a proximity prior on `georef`.
pub fn build_prior_proximity(source: ProximitySource<'_>, georef: &GeoRef, edges: &[f64]) -> Result<PriorDataset> {
    validate_edges(edges)?;
    if edges[0] < 0.0 {
        return Err(Error::NonMonotoneEdges);
    }
    let (touched, shapes) = match source {
        ProximitySource::Features(fs) => {
            let spacing = georef.dx.min(georef.dy) / 2.0 / units_per_meter(&georef.srs);
            let geoms = fs
                .geometries()
                .filter(|g| !g.is_empty())
                .map(|g| transform_geometry(g, &fs.srs, &georef.srs, spacing))
                .collect::<Result<Vec<_>>>()?;
            if geoms.is_empty() {
                return Err(Error::EmptyIndication);
            }
            (rasterize_geometries(geoms.iter(), georef, RasterizeRule::Touched), geoms)
        }
        ProximitySource::Mask(mask) => {
            georef.check_congruent(mask.georef())?;
            if mask.count_true() == 0 {
                return Err(Error::EmptyIndication);
            }
            (mask.clone(), vec![polygonize(mask)])
        }
    };
    let reach = edges[edges.len() - 1] * units_per_meter(&georef.srs);
    let dist = nearest_distances(&shapes, georef, reach);
    let scale = units_per_meter(&georef.srs);
    let values = touched
        .values()
        .par_iter()
        .zip(dist.par_iter())
        .map(|(&t, &d)| {
            if t {
                return 0;
            }
            let d_m = d / scale;
            let i = edges.partition_point(|e| *e < d_m);
            if i == edges.len() {
                NO_INDICATION
            } else {
                i as u8
            }
        })
        .collect();
    Ok(PriorDataset {
        grid: RasterGrid::new(*georef, values, Some(PRIOR_NODATA))?,
        edges: edges.to_vec(),
        kind: CriterionKind::Proximity,
        units: "m".into(),
        name: String::new(),
    })
}

enum Piece {
    Point(Coord),
    Segment(Coord, Coord),
}

impl Piece {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        match self {
            Piece::Point(p) => (p.x, p.y, p.x, p.y),
            Piece::Segment(a, b) => (a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y)),
        }
    }

    fn distance(&self, c: &Coord) -> f64 {
        match self {
            Piece::Point(p) => c.distance(p),
            Piece::Segment(a, b) => point_segment_distance(c, a, b),
        }
    }
}

/// Exact distance from every pixel center to the union of `shapes`, searched
/// only within `reach`; farther pixels get infinity. Polygon interiors are
/// at distance zero.
fn nearest_distances(shapes: &[Geometry], g: &GeoRef, reach: f64) -> Vec<f64> {
    let mut pieces = Vec::new();
    let mut polys = Vec::new();
    for s in shapes {
        pieces.extend(s.points().iter().map(|p| Piece::Point(*p)));
        for path in s.paths() {
            if path.len() == 1 {
                pieces.push(Piece::Point(path[0]));
            }
            pieces.extend(path.windows(2).map(|w| Piece::Segment(w[0], w[1])));
        }
        polys.extend(s.polygons().iter());
    }
    let bounds: Vec<_> = pieces.iter().map(Piece::bounds).collect();
    let poly_env: Vec<_> = polys
        .iter()
        .map(|p| crate::geometry::envelope(&Geometry::Polygon((*p).clone())).expect("polygons are non-empty"))
        .collect();
    let mut out = vec![f64::INFINITY; g.len()];
    out.par_chunks_mut(g.nx).enumerate().for_each(|(row, line)| {
        let yc = g.y_max() - (row as f64 + 0.5) * g.dy;
        for (piece, &(x0, y0, x1, y1)) in pieces.iter().zip(&bounds) {
            if yc < y0 - reach || yc > y1 + reach {
                continue;
            }
            let c_lo = (((x0 - reach - g.x_min()) / g.dx - 0.5).ceil().max(0.0)) as usize;
            let c_hi = ((x1 + reach - g.x_min()) / g.dx - 0.5).floor();
            if c_hi < 0.0 {
                continue;
            }
            let c_hi = (c_hi as usize).min(g.nx - 1);
            for (col, best) in line.iter_mut().enumerate().take(c_hi + 1).skip(c_lo) {
                let c = Coord::new(g.x_min() + (col as f64 + 0.5) * g.dx, yc);
                let d = piece.distance(&c);
                if d < *best {
                    *best = d;
                }
            }
        }
        for (p, e) in polys.iter().zip(&poly_env) {
            if yc < e.y_min || yc > e.y_max {
                continue;
            }
            for (col, v) in line.iter_mut().enumerate() {
                let c = Coord::new(g.x_min() + (col as f64 + 0.5) * g.dx, yc);
                if *v > 0.0 && e.contains(&c) && point_in_polygon(&c, p) {
                    *v = 0.0;
                }
            }
        }
    });
    out
}

/// Builds a value prior from a criterion raster.
pub fn build_prior_value(criterion: &FloatGrid, edges: &[f64], kind: CriterionKind) -> Result<PriorDataset> {
    validate_edges(edges)?;
    if kind == CriterionKind::Proximity {
        return Err(Error::WrongKind { expected: "value" });
    }
    let values = criterion
        .values()
        .par_iter()
        .map(|&v| {
            if criterion.is_nodata(v) || v.is_nan() {
                return PRIOR_NODATA;
            }
            let v = v as f64;
            match kind {
                CriterionKind::ValueBelow => {
                    let i = edges.partition_point(|e| *e <= v);
                    if i == edges.len() {
                        NO_INDICATION
                    } else {
                        i as u8
                    }
                }
                _ => match edges.partition_point(|e| *e < v) {
                    0 => NO_INDICATION,
                    n => (n - 1) as u8,
                },
            }
        })
        .collect();
    Ok(PriorDataset {
        grid: RasterGrid::new(*criterion.georef(), values, Some(PRIOR_NODATA))?,
        edges: edges.to_vec(),
        kind,
        units: String::new(),
        name: String::new(),
    })
}

/// A criterion threshold snapped onto a prior's edges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PriorThreshold {
    pub requested: f64,
    pub snapped_edge: f64,
    pub snapped_index: u8,
    pub snap_error: f64,
}

/// Snaps `t` to the nearest edge, ties going to the smaller edge. Also
/// returns a warning when the error exceeds a tenth of the local edge
/// spacing.
pub fn edge_index_for_threshold(p: &PriorDataset, t: f64) -> (PriorThreshold, Option<String>) {
    snap_threshold(&p.edges, t)
}

fn snap_threshold(edges: &[f64], t: f64) -> (PriorThreshold, Option<String>) {
    let n = edges.len();
    let i = edges.partition_point(|e| *e < t);
    let k = if i == 0 {
        0
    } else if i == n {
        n - 1
    } else if t - edges[i - 1] <= edges[i] - t {
        i - 1
    } else {
        i
    };
    let snap_error = (t - edges[k]).abs();
    let spacing = if n == 1 {
        0.0
    } else if i == 0 {
        edges[1] - edges[0]
    } else if i == n {
        edges[n - 1] - edges[n - 2]
    } else {
        edges[i] - edges[i - 1]
    };
    let warning = (snap_error > 0.1 * spacing)
        .then(|| format!("threshold {t} snapped to edge {} (error {snap_error}, edge spacing {spacing})", edges[k]));
    let th = PriorThreshold { requested: t, snapped_edge: edges[k], snapped_index: k as u8, snap_error };
    (th, warning)
}

impl PriorDataset {
    pub fn with_name(mut self, name: &str, units: &str) -> Self {
        self.name = name.to_string();
        self.units = units.to_string();
        self
    }

    /// Sets pixels outside `study` to nodata.
    pub fn masked(mut self, study: &BoolGrid) -> Result<Self> {
        self.grid.georef().check_congruent(study.georef())?;
        for (v, m) in self.grid.values_mut().iter_mut().zip(study.values()) {
            if !m {
                *v = PRIOR_NODATA;
            }
        }
        Ok(self)
    }

    /// Bucket of a code in increasing-criterion order, `None` for nodata.
    fn bucket(&self, code: u8) -> Option<usize> {
        let n = self.edges.len();
        match (code, self.kind) {
            (PRIOR_NODATA, _) => None,
            (NO_INDICATION, CriterionKind::ValueAbove) => Some(0),
            (NO_INDICATION, _) => Some(n),
            (c, CriterionKind::ValueAbove) if (c as usize) < n => Some(c as usize + 1),
            (c, _) if (c as usize) < n => Some(c as usize),
            _ => None,
        }
    }

    /// Pixels whose criterion lies within `[min, max]` after snapping both
    /// bounds to edges. Nodata is never selected.
    pub fn select(&self, min: Option<f64>, max: Option<f64>) -> Result<(BoolGrid, Vec<String>)> {
        if min.is_none() && max.is_none() {
            return Err(Error::NoBound);
        }
        if let (Some(lo), Some(hi)) = (min, max) {
            if lo > hi {
                return Err(Error::EmptyRange);
            }
        }
        let mut warnings = Vec::new();
        let mut snap = |t: f64| {
            let (th, w) = snap_threshold(&self.edges, t);
            warnings.extend(w);
            th.snapped_index as usize
        };
        // Bounds past either end select the open-ended bucket as well.
        let (e0, en) = (self.edges[0], self.edges[self.edges.len() - 1]);
        let first = min.map_or(0, |t| if t < e0 { 0 } else { snap(t) + 1 });
        let last = max.map_or(usize::MAX, |t| if t > en { usize::MAX } else { snap(t) });
        let lut: Vec<bool> = (0..=255u8).map(|c| self.bucket(c).is_some_and(|b| b >= first && b <= last)).collect();
        let values = self.grid.values().iter().map(|&c| lut[c as usize]).collect();
        Ok((RasterGrid::new(*self.grid.georef(), values, None)?, warnings))
    }

    pub fn histogram(&self) -> [usize; 256] {
        let mut h = [0usize; 256];
        for &v in self.grid.values() {
            h[v as usize] += 1;
        }
        h
    }
}

/// Warps the prior onto `georef` (nearest neighbour, nodata outside) and
/// selects pixels within the thresholds.
pub fn prior_exclusion(
    p: &PriorDataset,
    georef: &GeoRef,
    min: Option<f64>,
    max: Option<f64>,
) -> Result<(BoolGrid, Vec<String>)> {
    if p.grid.georef().congruent(georef) {
        return p.select(min, max).and_then(|(g, w)| Ok((g.with_georef(*georef)?, w)));
    }
    let warped = PriorDataset { grid: warp_nearest(&p.grid, georef, PRIOR_NODATA)?, ..p.clone() };
    warped.select(min, max)
}

/// Removes the selected pixels of a prior congruent with `am`.
pub fn exclude_prior(
    am: &mut AvailabilityMatrix,
    p: &PriorDataset,
    min: Option<f64>,
    max: Option<f64>,
    label: &str,
) -> Result<()> {
    am.georef.check_congruent(p.grid.georef())?;
    let (excl, warnings) = p.select(min, max)?;
    am.warnings.extend(warnings.into_iter().map(|w| format!("{label}: {w}")));
    am.apply(&excl.with_georef(am.georef)?, label)
}

/// Estimates the criterion value of every pixel of a proximity prior by
/// interpolating between the edges of its ring, using the pixel's relative
/// distance to the inner and outer neighbouring rings.
pub fn interpolate_criterion(p: &PriorDataset) -> Result<FloatGrid> {
    if p.kind != CriterionKind::Proximity {
        return Err(Error::WrongKind { expected: "proximity" });
    }
    let g = *p.grid.georef();
    let codes = p.grid.values();
    let n = p.edges.len();
    let mut out = vec![FLOAT_NODATA; g.len()];
    for (o, &c) in out.iter_mut().zip(codes) {
        if c == 0 {
            *o = p.edges[0] as f32;
        }
    }
    let present: Vec<u8> = {
        let h = p.histogram();
        (1..n.min(254) as u8).filter(|v| h[*v as usize] > 0).collect()
    };
    for v in present {
        let inner: Vec<bool> = codes.iter().map(|&c| c < v).collect();
        let outer: Vec<bool> = codes.iter().map(|&c| c > v && c != PRIOR_NODATA).collect();
        let a = distance_transform(&inner, g.nx, g.ny, g.dx, g.dy).ok();
        let b = distance_transform(&outer, g.nx, g.ny, g.dx, g.dy).ok();
        let (lo, hi) = (p.edges[v as usize - 1], p.edges[v as usize]);
        for i in 0..g.len() {
            if codes[i] != v {
                continue;
            }
            let frac = match (&a, &b) {
                (Some(a), Some(b)) => a[i] / (a[i] + b[i]),
                _ => 0.5,
            };
            out[i] = (lo + (hi - lo) * frac) as f32;
        }
    }
    RasterGrid::new(g, out, Some(FLOAT_NODATA))
}

#[derive(Serialize, Deserialize)]
struct PriorMeta {
    name: String,
    criterion_kind: CriterionKind,
    units: String,
    edges: Vec<f64>,
    nodata: u8,
    no_indication: u8,
}

/// Writes the prior as an ASCII grid whose sidecar also carries the edges.
pub fn write_prior(p: &PriorDataset, path: &Path) -> Result<()> {
    let meta = PriorMeta {
        name: p.name.clone(),
        criterion_kind: p.kind,
        units: p.units.clone(),
        edges: p.edges.clone(),
        nodata: PRIOR_NODATA,
        no_indication: NO_INDICATION,
    };
    let Value::Object(extra) = serde_json::to_value(meta)? else { unreachable!() };
    write_asc(&p.grid, path, Some(&extra))
}

pub fn read_prior(path: &Path) -> Result<PriorDataset> {
    let (mut grid, meta): (ByteGrid, Map<String, Value>) = read_asc(path)?;
    let meta: PriorMeta = serde_json::from_value(Value::Object(meta))
        .map_err(|e| Error::Format { path: path.to_path_buf(), message: format!("prior sidecar: {e}") })?;
    validate_edges(&meta.edges)?;
    if meta.nodata != PRIOR_NODATA || meta.no_indication != NO_INDICATION {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: "prior sidecar must use nodata 255 and no_indication 254".into(),
        });
    }
    let n = meta.edges.len();
    if let Some(bad) = grid.values().iter().find(|&&v| (v as usize) >= n && v < NO_INDICATION) {
        return Err(Error::Format { path: path.to_path_buf(), message: format!("value {bad} exceeds the {n} edges") });
    }
    grid.set_nodata(Some(PRIOR_NODATA));
    Ok(PriorDataset { grid, edges: meta.edges, kind: meta.criterion_kind, units: meta.units, name: meta.name })
}

/// The railway edge list used by the worked example in the tests and docs.
pub fn railway_edges() -> Vec<f64> {
    let mut e: Vec<f64> = (0..=10).map(|i| i as f64 * 100.0).collect();
    e.extend([1200.0, 1400.0, 1600.0, 1800.0, 2000.0, 2500.0, 3000.0, 4000.0, 5000.0]);
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exclusion::{init_availability, RegionMask};
    use crate::vector::Feature;
    use crate::{LineString, Srs};
    use proptest::prelude::*;

    fn georef(n: usize, d: f64) -> GeoRef {
        GeoRef::new(Srs::LocalMeters, 0.0, n as f64 * d, d, d, n, n).unwrap()
    }

    fn line_prior(edges: &[f64]) -> (PriorDataset, Coord, Coord) {
        let g = georef(120, 50.0);
        let (a, b) = (Coord::new(1025.0, 300.0), Coord::new(1025.0, 5800.0));
        let fs = FeatureSet::new(
            Srs::LocalMeters,
            vec![Feature::new(Geometry::LineString(LineString::new(vec![a, b]).unwrap()))],
        );
        (build_prior_proximity(ProximitySource::Features(&fs), &g, edges).unwrap(), a, b)
    }

    #[test]
    fn railway_edges_match_listing() {
        let e = railway_edges();
        assert_eq!(e.len(), 20);
        assert_eq!(e[6], 600.0);
        assert_eq!(e[10], 1000.0);
        assert_eq!(e[19], 5000.0);
    }

    #[test]
    fn edge_validation() {
        assert!(matches!(validate_edges(&[]), Err(Error::EdgeCount(0))));
        assert!(matches!(validate_edges(&[1.0, 1.0]), Err(Error::NonMonotoneEdges)));
        assert!(matches!(validate_edges(&vec![0.0; 255]), Err(Error::EdgeCount(255))));
        let g = georef(4, 1.0);
        let fs = FeatureSet::new(Srs::LocalMeters, vec![]);
        assert!(matches!(
            build_prior_proximity(ProximitySource::Features(&fs), &g, &[0.0]),
            Err(Error::EmptyIndication)
        ));
        assert!(matches!(
            build_prior_proximity(ProximitySource::Features(&fs), &g, &[-1.0, 2.0]),
            Err(Error::NonMonotoneEdges)
        ));
    }

    #[test]
    fn proximity_codes_follow_distance() {
        let edges = railway_edges();
        let (p, a, b) = line_prior(&edges);
        let g = *p.grid.georef();
        for r in 0..g.ny {
            for c in 0..g.nx {
                let code = p.grid.get(r, c);
                let d = point_segment_distance(&g.pixel_center(r, c), &a, &b);
                if code == 0 {
                    assert!(d <= 0.5 * g.dx.hypot(g.dy) + 1e-9);
                } else if code == NO_INDICATION {
                    assert!(d > 5000.0);
                } else {
                    let i = code as usize;
                    assert!(d > edges[i - 1] && d <= edges[i], "code {code} d {d}");
                }
            }
        }
        // Column 31 has its centers at x = 1575, 550 m from the line.
        let col = 31;
        assert_eq!(g.pixel_center(60, col).x - a.x, 550.0);
        assert_eq!(p.grid.get(60, col), 6);
    }

    #[test]
    fn value_prior_sweeps() {
        let g = georef(3, 1.0);
        let vals = vec![1700.0, 1750.0, 1000.0, 2500.0, -9999.0, 1499.0, 1500.0, 1999.0, 2000.0];
        let crit = RasterGrid::new(g, vals, Some(-9999.0)).unwrap();
        let edges = [1500.0, 1750.0, 2000.0];
        let below = build_prior_value(&crit, &edges, CriterionKind::ValueBelow).unwrap();
        assert_eq!(below.grid.values(), &[1, 2, 0, 254, 255, 0, 1, 2, 254]);
        let above = build_prior_value(&crit, &edges, CriterionKind::ValueAbove).unwrap();
        assert_eq!(above.grid.values(), &[0, 0, 254, 2, 255, 254, 254, 1, 1]);
        let nodata = RasterGrid::new(g, vec![-1.0; 9], Some(-1.0)).unwrap();
        let p = build_prior_value(&nodata, &edges, CriterionKind::ValueBelow).unwrap();
        assert!(p.grid.values().iter().all(|v| *v == 255));
    }

    #[test]
    fn threshold_snapping() {
        let (p, _, _) = line_prior(&railway_edges());
        let (t, w) = edge_index_for_threshold(&p, 800.0);
        assert_eq!((t.snapped_edge, t.snapped_index, t.snap_error), (800.0, 8, 0.0));
        assert!(w.is_none());
        let (t, w) = edge_index_for_threshold(&p, 1100.0);
        assert_eq!((t.snapped_edge, t.snapped_index, t.snap_error), (1000.0, 10, 100.0));
        assert!(w.is_some());
        let (t, _) = edge_index_for_threshold(&p, -50.0);
        assert_eq!(t.snapped_index, 0);
        let (t, w) = edge_index_for_threshold(&p, 1010.0);
        assert_eq!(t.snapped_index, 10);
        assert!(w.is_none());
    }

    #[test]
    fn exclude_below_threshold() {
        let (p, _, _) = line_prior(&railway_edges());
        let rm = RegionMask::from_mask(RasterGrid::filled(*p.grid.georef(), true));
        let mut am = init_availability(&rm);
        exclude_prior(&mut am, &p, None, Some(1000.0), "rail").unwrap();
        for (a, c) in am.avail.values().iter().zip(p.grid.values()) {
            assert_eq!(!a, *c <= 10);
        }
        let mut low = init_availability(&rm);
        exclude_prior(&mut low, &p, None, Some(-5.0), "rail").unwrap();
        for (a, c) in low.avail.values().iter().zip(p.grid.values()) {
            assert_eq!(!a, *c == 0);
        }
        assert!(matches!(exclude_prior(&mut am, &p, None, None, "x"), Err(Error::NoBound)));
    }

    #[test]
    fn bucket_ranges_for_value_kinds() {
        let g = georef(3, 1.0);
        let vals = vec![0.5, 1.5, 2.5, 3.5, 4.5, 1.0, 2.0, 3.0, f32::NAN];
        let crit = RasterGrid::new(g, vals.clone(), None).unwrap();
        let edges = [1.0, 2.0, 3.0, 4.0];
        for kind in [CriterionKind::ValueBelow, CriterionKind::ValueAbove] {
            let p = build_prior_value(&crit, &edges, kind).unwrap();
            // "values above 2" and "values below 3".
            let (above, _) = p.select(Some(2.0), None).unwrap();
            let (below, _) = p.select(None, Some(3.0)).unwrap();
            for i in [0, 1, 2, 3, 4] {
                let v = vals[i] as f64;
                assert_eq!(above.values()[i], v > 2.0, "{kind:?} above {v}");
                assert_eq!(below.values()[i], v < 3.0, "{kind:?} below {v}");
            }
            assert!(!above.values()[8] && !below.values()[8]);
        }
    }

    #[test]
    fn nodata_never_excluded() {
        let g = georef(2, 1.0);
        let grid = RasterGrid::new(g, vec![0, 1, 254, 255], Some(255)).unwrap();
        let p = PriorDataset {
            grid,
            edges: vec![0.0, 10.0],
            kind: CriterionKind::Proximity,
            units: "m".into(),
            name: "x".into(),
        };
        let (s, _) = p.select(Some(-1.0), Some(1e9)).unwrap();
        assert_eq!(s.values(), &[true, true, true, false]);
        let (s, _) = p.select(Some(10.0), None).unwrap();
        assert_eq!(s.values(), &[false, false, true, false]);
    }

    proptest! {
        #[test]
        fn exclusion_is_monotone_in_threshold(t1 in -100.0f64..6000.0, t2 in -100.0f64..6000.0) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let g = georef(12, 100.0);
            let mut m = RasterGrid::filled(g, false);
            m.set(5, 6, true);
            let p = build_prior_proximity(ProximitySource::Mask(&m), &g, &railway_edges()).unwrap();
            let (a, _) = p.select(None, Some(lo)).unwrap();
            let (b, _) = p.select(None, Some(hi)).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!(!x || *y);
            }
        }
    }

    #[test]
    fn mask_source_measures_to_footprints() {
        let g = georef(9, 10.0);
        let mut m = RasterGrid::filled(g, false);
        m.set(4, 4, true);
        let p = build_prior_proximity(ProximitySource::Mask(&m), &g, &[0.0, 5.0, 10.0, 15.0]).unwrap();
        assert_eq!(p.grid.get(4, 4), 0);
        assert_eq!(p.grid.get(4, 5), 1); // 5 m to the footprint edge
        assert_eq!(p.grid.get(3, 5), 2); // 5·√2 m to the corner
        assert_eq!(p.grid.get(4, 6), 3);
        assert_eq!(p.grid.get(4, 7), NO_INDICATION);
    }

    #[test]
    fn ring_monotonicity() {
        let edges = railway_edges();
        let (p, _, _) = line_prior(&edges);
        for i in 1..edges.len() as u8 {
            let (inner, _) = p.select(None, Some(edges[i as usize - 1])).unwrap();
            let (outer, _) = p.select(None, Some(edges[i as usize])).unwrap();
            assert!(inner.values().iter().zip(outer.values()).all(|(a, b)| !a || *b));
        }
    }

    #[test]
    fn interpolation_tracks_true_distance() {
        let g = georef(101, 10.0);
        let center = Coord::new(505.0, 505.0);
        let fs = FeatureSet::new(Srs::LocalMeters, vec![Feature::new(Geometry::Point(center))]);
        let edges: Vec<f64> = (0..=8).map(|i| i as f64 * 50.0).collect();
        let p = build_prior_proximity(ProximitySource::Features(&fs), &g, &edges).unwrap();
        let est = interpolate_criterion(&p).unwrap();
        let (mut err, mut count) = (0.0, 0);
        for r in 0..g.ny {
            for c in 0..g.nx {
                let code = p.grid.get(r, c);
                if code == 0 || code == NO_INDICATION {
                    continue;
                }
                let v = est.get(r, c) as f64;
                let (lo, hi) = (edges[code as usize - 1], edges[code as usize]);
                assert!(v > lo && v <= hi, "{v} outside ({lo}, {hi}]");
                err += (v - g.pixel_center(r, c).distance(&center)).abs();
                count += 1;
            }
        }
        assert!(err / (count as f64) < 25.0, "mae {}", err / count as f64);
        assert!(matches!(
            interpolate_criterion(&PriorDataset { kind: CriterionKind::ValueBelow, ..p }),
            Err(Error::WrongKind { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rail.asc");
        let (p, _, _) = line_prior(&railway_edges());
        let p = p.with_name("railways", "m");
        write_prior(&p, &path).unwrap();
        let back = read_prior(&path).unwrap();
        assert_eq!(back, p);
    }
}
