//! Feature collections, spatial and attribute filtering, and rasterization.

mod filter;
pub mod geojson;

pub use filter::{AttributeFilter, CmpOp, Expr};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{envelope, scan};
use crate::raster::{BoolGrid, GeoRef, RasterGrid};
use crate::{Extent, Geometry, Srs};

#[derive(Clone, Debug, PartialEq)]
pub enum AttrValue {
    Str(String),
    Num(f64),
    Bool(bool),
    Null,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Feature {
    pub geometry: Geometry,
    pub attributes: BTreeMap<String, AttrValue>,
}

impl Feature {
    pub fn new(geometry: Geometry) -> Self {
        Feature { geometry, attributes: BTreeMap::new() }
    }

    pub fn with_attr(mut self, key: &str, value: AttrValue) -> Self {
        self.attributes.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSet {
    pub srs: Srs,
    pub features: Vec<Feature>,
}

impl FeatureSet {
    pub fn new(srs: Srs, features: Vec<Feature>) -> Self {
        FeatureSet { srs, features }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Bounds of every non-empty feature, `None` when there is none.
    pub fn envelope(&self) -> Option<Extent> {
        self.features.iter().filter_map(|f| envelope(&f.geometry).ok()).reduce(|a, b| a.union(&b))
    }

    pub fn geometries(&self) -> impl Iterator<Item = &Geometry> {
        self.features.iter().map(|f| &f.geometry)
    }
}

/// Keeps features whose envelope meets `ext`.
pub fn filter_spatial(fs: &FeatureSet, ext: &Extent) -> FeatureSet {
    let features =
        fs.features.iter().filter(|f| envelope(&f.geometry).is_ok_and(|e| e.intersects(ext))).cloned().collect();
    FeatureSet { srs: fs.srs, features }
}

/// Keeps features that satisfy `f`, in their original order.
pub fn filter_attributes(fs: &FeatureSet, f: &AttributeFilter) -> FeatureSet {
    let features = fs.features.iter().filter(|ft| f.matches(&ft.attributes)).cloned().collect();
    FeatureSet { srs: fs.srs, features }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterizeRule {
    /// Pixels more than half covered by the union of the polygons. Points and
    /// lines have no area and fall back to `Touched`.
    MostlyWithin,
    /// Pixels whose closed footprint meets any geometry.
    Touched,
}

/// Burns geometries expressed in `georef.srs` into a boolean grid.
pub fn rasterize_geometries<'a>(
    geoms: impl IntoIterator<Item = &'a Geometry>,
    georef: &GeoRef,
    rule: RasterizeRule,
) -> BoolGrid {
    let spec = georef.grid_spec();
    let mut out = vec![false; spec.len()];
    let mut polys = Vec::new();
    for g in geoms {
        for p in g.points() {
            scan::burn_point(p, &spec, &mut out);
        }
        for l in g.lines() {
            for w in l.coords().windows(2) {
                scan::burn_segment(&w[0], &w[1], &spec, &mut out);
            }
        }
        polys.extend(g.polygons().iter());
    }
    match rule {
        RasterizeRule::MostlyWithin => scan::burn_mostly_within(polys.iter().copied(), &spec, &mut out),
        RasterizeRule::Touched => scan::burn_touched_polygons(polys.iter().copied(), &spec, &mut out),
    }
    RasterGrid::new(*georef, out, None).expect("grid length matches georef")
}

pub fn rasterize_geometry(g: &Geometry, georef: &GeoRef, rule: RasterizeRule) -> BoolGrid {
    rasterize_geometries([g], georef, rule)
}

/// Rasterizes a feature set onto `georef`; both must share an SRS.
pub fn rasterize(fs: &FeatureSet, georef: &GeoRef, rule: RasterizeRule) -> Result<BoolGrid> {
    if fs.srs != georef.srs {
        return Err(Error::SrsMismatch { expected: georef.srs.name().to_string(), found: fs.srs.name().to_string() });
    }
    Ok(rasterize_geometries(fs.geometries(), georef, rule))
}
