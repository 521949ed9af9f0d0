//! Config-driven runs: build the region mask, apply every constraint in
//! order, run the requested analyses and write the artifacts.
//!
//! Configs are JSON. Keys starting with `_` are ignored at every level, so
//! `"_comment"` can annotate any object. Paths are relative to the config
//! file's directory.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::{
    evaluate_all, motivation_map, overlap_heatmap, overlap_matrix, write_impact_csv, write_impact_table_csv,
    write_motivation_pgm, write_motivation_shares, write_overlap_csv, ConstraintResult, ImpactRow, ImpactTable,
};
use crate::catalog::{Catalog, Level, Motivation};
use crate::error::{Error, Result};
use crate::exclusion::{
    init_availability, make_region_mask, percent_available, BufferMethod, ExclusionRequest, ExclusionSource, RegionMask,
};
use crate::prior::{read_prior, PriorDataset};
use crate::raster::io::{read_asc, write_asc, write_pgm};
use crate::raster::{FloatGrid, RasterGrid};
use crate::vector::geojson::{parse_geometry, read_geojson};
use crate::vector::{filter_attributes, AttributeFilter, FeatureSet};
use crate::{Geometry, Srs};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkflowConfig {
    pub region: RegionConfig,
    /// Further regions for the per-region impact table.
    #[serde(default)]
    pub impact_regions: Vec<RegionConfig>,
    pub out_srs: String,
    pub resolution: Resolution,
    pub constraints: Vec<ConstraintConfig>,
    #[serde(default)]
    pub analyses: Analyses,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    #[serde(default)]
    pub name: Option<String>,
    /// GeoJSON file; every polygon of the selected features is used.
    #[serde(default)]
    pub vector: Option<PathBuf>,
    /// Attribute filter applied to `vector`.
    #[serde(default, rename = "where")]
    pub selector: Option<String>,
    /// Inline GeoJSON geometry, in `srs`.
    #[serde(default)]
    pub geometry: Option<Value>,
    #[serde(default)]
    pub srs: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Resolution {
    Square(f64),
    Rect([f64; 2]),
}

impl Resolution {
    pub fn dx_dy(self) -> (f64, f64) {
        match self {
            Resolution::Square(d) => (d, d),
            Resolution::Rect([dx, dy]) => (dx, dy),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Analyses {
    #[serde(default)]
    pub impact: bool,
    #[serde(default)]
    pub overlap: bool,
    #[serde(default)]
    pub motivation_map: bool,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRef {
    pub name: String,
    #[serde(default = "typical")]
    pub level: Level,
}

fn typical() -> Level {
    Level::Typical
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Geometry,
    Area,
}

/// One constraint. Exactly one of `vector`, `raster` and `prior` is set.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintConfig {
    pub label: String,
    /// Defaults to the catalog entry's group when `catalog` is set.
    #[serde(default)]
    pub motivation: Option<Motivation>,
    #[serde(default)]
    pub vector: Option<PathBuf>,
    #[serde(default)]
    pub filter: Option<String>,
    #[serde(default)]
    pub raster: Option<PathBuf>,
    #[serde(default)]
    pub prior: Option<PathBuf>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    /// Buffer distance in meters.
    #[serde(default)]
    pub buffer: Option<f64>,
    #[serde(default)]
    pub method: Option<MethodName>,
    #[serde(default)]
    pub invert: bool,
    /// Threshold taken from the built-in catalog.
    #[serde(default)]
    pub catalog: Option<CatalogRef>,
}

fn strip_private_keys(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.retain(|k, _| !k.starts_with('_'));
            m.values_mut().for_each(strip_private_keys);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_private_keys),
        _ => {}
    }
}

impl WorkflowConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut v: Value = serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        strip_private_keys(&mut v);
        let cfg: WorkflowConfig = serde_json::from_value(v).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config; the second value is the directory paths resolve against.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::parse(&text)?, base))
    }

    fn validate(&self) -> Result<()> {
        if self.constraints.is_empty() {
            return Err(Error::ConfigParse("at least one constraint is required".into()));
        }
        let (dx, dy) = self.resolution.dx_dy();
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::NonPositiveResolution);
        }
        let mut seen = HashSet::new();
        for c in &self.constraints {
            if !seen.insert(c.label.as_str()) {
                return Err(Error::ConfigParse(format!("duplicate constraint label `{}`", c.label)));
            }
            let sources = [c.vector.is_some(), c.raster.is_some(), c.prior.is_some()];
            if sources.iter().filter(|s| **s).count() != 1 {
                return Err(Error::ConfigParse(format!(
                    "constraint `{}` needs exactly one of vector, raster, prior",
                    c.label
                )));
            }
            if c.motivation.is_none() && c.catalog.is_none() {
                return Err(Error::ConfigParse(format!("constraint `{}` has no motivation", c.label)));
            }
        }
        Ok(())
    }
}

/// Loaded inputs, shared between constraints that name the same file.
#[derive(Default)]
struct Sources {
    vectors: BTreeMap<PathBuf, Arc<FeatureSet>>,
    rasters: BTreeMap<PathBuf, Arc<FloatGrid>>,
    priors: BTreeMap<PathBuf, Arc<PriorDataset>>,
}

impl Sources {
    fn vector(&mut self, p: PathBuf) -> Result<Arc<FeatureSet>> {
        if let Some(v) = self.vectors.get(&p) {
            return Ok(v.clone());
        }
        let v = Arc::new(read_geojson(&p)?);
        self.vectors.insert(p, v.clone());
        Ok(v)
    }

    fn raster(&mut self, p: PathBuf) -> Result<Arc<FloatGrid>> {
        if let Some(v) = self.rasters.get(&p) {
            return Ok(v.clone());
        }
        let v = Arc::new(read_asc::<f32>(&p)?.0);
        self.rasters.insert(p, v.clone());
        Ok(v)
    }

    fn prior(&mut self, p: PathBuf) -> Result<Arc<PriorDataset>> {
        if let Some(v) = self.priors.get(&p) {
            return Ok(v.clone());
        }
        let v = Arc::new(read_prior(&p)?);
        self.priors.insert(p, v.clone());
        Ok(v)
    }
}

fn build_region(rc: &RegionConfig, base: &Path, out_srs: &Srs, dx: f64, dy: f64) -> Result<RegionMask> {
    let (geom, srs) = match (&rc.vector, &rc.geometry) {
        (Some(p), None) => {
            let mut fs = read_geojson(&base.join(p))?;
            if let Some(sel) = &rc.selector {
                fs = filter_attributes(&fs, &AttributeFilter::parse(sel)?);
            }
            let polys: Vec<_> = fs.geometries().flat_map(|g| g.polygons().to_vec()).collect();
            (Geometry::MultiPolygon(polys), fs.srs)
        }
        (None, Some(g)) => {
            let srs = rc.srs.as_deref().map_or(Ok(Srs::Geographic), Srs::from_name)?;
            (parse_geometry(g)?, srs)
        }
        _ => return Err(Error::ConfigParse("region needs exactly one of `vector` and `geometry`".into())),
    };
    make_region_mask(&geom, &srs, out_srs, dx, dy)
}

fn build_request(c: &ConstraintConfig, base: &Path, sources: &mut Sources) -> Result<ExclusionRequest> {
    let source = if let Some(p) = &c.vector {
        let filter = c.filter.as_deref().map(AttributeFilter::parse).transpose()?;
        ExclusionSource::Vector { features: sources.vector(base.join(p))?, filter }
    } else if let Some(p) = &c.raster {
        ExclusionSource::Raster { grid: sources.raster(base.join(p))?, min: c.min, max: c.max }
    } else if let Some(p) = &c.prior {
        ExclusionSource::Prior { prior: sources.prior(base.join(p))?, min: c.min, max: c.max }
    } else {
        unreachable!("validated: one source per constraint")
    };
    if c.filter.is_some() && c.vector.is_none() {
        return Err(Error::ConfigParse("`filter` only applies to vector sources".into()));
    }
    let mut req = match &c.catalog {
        Some(cat) => {
            let is_prior = matches!(source, ExclusionSource::Prior { .. });
            if c.buffer.is_some() || c.invert || (is_prior && (c.min.is_some() || c.max.is_some())) {
                return Err(Error::ConfigParse("catalog thresholds conflict with explicit ones".into()));
            }
            let spec = Catalog::builtin().lookup(&cat.name, cat.level)?;
            spec.to_request(&c.label, source)?
        }
        None => {
            let mut r = ExclusionRequest::new(&c.label, Motivation::Physical, source);
            r.buffer = c.buffer;
            r.invert = c.invert;
            r
        }
    };
    if let Some(m) = c.motivation {
        req.motivation = m;
    }
    if let Some(m) = c.method {
        req.method = match m {
            MethodName::Geometry => BufferMethod::GeometryBased,
            MethodName::Area => BufferMethod::AreaBased,
        };
    }
    Ok(req)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub label: String,
    pub motivation: Motivation,
    pub removed: usize,
    pub remaining: usize,
    /// Available fraction of the region after this step.
    pub percent_available: f64,
}

/// Contents of `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub srs: String,
    pub resolution: [f64; 2],
    pub shape: [usize; 2],
    pub region_pixels: usize,
    pub steps: Vec<StepReport>,
    /// Available fraction of the region after all constraints.
    pub percent_available: f64,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impact: Option<Vec<ImpactRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impact_table: Option<ImpactTable>,
}

/// Builds the region mask and the constraint requests without evaluating
/// anything. Inputs named by several constraints are loaded once.
pub fn prepare(cfg: &WorkflowConfig, base: &Path) -> Result<(RegionMask, Vec<ExclusionRequest>)> {
    let out_srs = Srs::from_name(&cfg.out_srs)?;
    let (dx, dy) = cfg.resolution.dx_dy();
    let rm = build_region(&cfg.region, base, &out_srs, dx, dy)?;
    let mut sources = Sources::default();
    let reqs = cfg
        .constraints
        .iter()
        .map(|c| build_request(c, base, &mut sources).map_err(|e| e.in_constraint(&c.label)))
        .collect::<Result<Vec<_>>>()?;
    Ok((rm, reqs))
}

/// Runs `cfg`, resolving paths against `base`, and writes the artifacts
/// into `out_dir` (the config's `output_dir` when `None`).
pub fn run_workflow(cfg: &WorkflowConfig, base: &Path, out_dir: Option<&Path>) -> Result<RunReport> {
    let out_srs = Srs::from_name(&cfg.out_srs)?;
    let (dx, dy) = cfg.resolution.dx_dy();
    let (rm, reqs) = prepare(cfg, base)?;

    // Constraints are independent of each other, so evaluate them in
    // parallel and fold them in config order.
    let results = evaluate_all(&rm, &reqs).into_iter().collect::<Result<Vec<ConstraintResult>>>()?;
    let mut am = init_availability(&rm);
    let region = rm.region_pixels();
    let frac = |n: usize| if region == 0 { 0.0 } else { n as f64 / region as f64 };
    let mut steps = Vec::with_capacity(results.len());
    for r in &results {
        am.warnings.extend(r.warnings.iter().cloned());
        am.apply(&r.excluded, &r.label)?;
        let s = am.steps.last().expect("step recorded");
        steps.push(StepReport {
            label: r.label.clone(),
            motivation: r.motivation,
            removed: s.removed,
            remaining: s.remaining,
            percent_available: frac(s.remaining),
        });
    }

    let out = out_dir.map_or_else(|| base.join(&cfg.output_dir), Path::to_path_buf);
    fs::create_dir_all(&out)?;
    let codes = RasterGrid::new(
        rm.georef,
        am.avail.values().iter().zip(rm.mask.values()).map(|(&a, &m)| if !m { 255u8 } else { a as u8 }).collect(),
        Some(255),
    )?;
    write_asc(&codes, &out.join("availability.asc"), None)?;
    write_pgm(&am.avail, &out.join("availability.pgm"))?;

    let mut report = RunReport {
        srs: out_srs.name().to_string(),
        resolution: [dx, dy],
        shape: [rm.georef.nx, rm.georef.ny],
        region_pixels: region,
        steps,
        percent_available: percent_available(&am, &rm)?,
        warnings: am.warnings.clone(),
        impact: None,
        impact_table: None,
    };

    if cfg.analyses.impact {
        let mut rows: Vec<ImpactRow> = results
            .iter()
            .map(|r| ImpactRow {
                label: r.label.clone(),
                motivation: r.motivation,
                fraction: Some(r.fraction()),
                error: None,
            })
            .collect();
        rows.sort_by(|a, b| b.fraction.unwrap_or(0.0).total_cmp(&a.fraction.unwrap_or(0.0)));
        write_impact_csv(&rows, &out.join("impact.csv"))?;
        report.impact = Some(rows);
        if !cfg.impact_regions.is_empty() {
            let mut regions = vec![(cfg.region.name.clone().unwrap_or_else(|| "region".into()), rm.clone())];
            for (i, rc) in cfg.impact_regions.iter().enumerate() {
                let name = rc.name.clone().unwrap_or_else(|| format!("region_{}", i + 1));
                regions.push((name, build_region(rc, base, &out_srs, dx, dy)?));
            }
            let table = crate::analysis::impact_table(&regions, &reqs);
            write_impact_table_csv(&table, &out.join("impact_table.csv"))?;
            report.impact_table = Some(table);
        }
    }
    if cfg.analyses.overlap && results.len() >= 2 {
        let m = overlap_matrix(&results)?;
        write_overlap_csv(&m, &out.join("overlap.csv"))?;
        write_pgm(&overlap_heatmap(&m)?, &out.join("overlap.pgm"))?;
    }
    if cfg.analyses.motivation_map {
        let mm = motivation_map(&rm, &results)?;
        write_motivation_pgm(&mm, &out.join("motivation_map.pgm"))?;
        write_asc(&mm.codes, &out.join("motivation_map.asc"), None)?;
        write_motivation_shares(&mm, region, &out.join("motivation_shares.json"))?;
    }
    fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(report)
}
