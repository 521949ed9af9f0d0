//! Constraint interaction analytics: independent impact, pairwise overlap
//! and motivation-group combination maps.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::Motivation;
use crate::error::{Error, Result};
use crate::exclusion::{ExclusionRequest, RegionMask};
use crate::raster::io::write_pgm;
use crate::raster::{BoolGrid, ByteGrid, GeoRef, RasterGrid};

/// Code written outside the region in a motivation map.
pub const OUTSIDE_REGION: u8 = 255;

/// One constraint evaluated alone on a region.
#[derive(Clone, Debug)]
pub struct ConstraintResult {
    pub label: String,
    pub motivation: Motivation,
    /// Excluded pixels, already restricted to the region.
    pub excluded: BoolGrid,
    pub region_pixels: usize,
    pub warnings: Vec<String>,
}

impl ConstraintResult {
    pub fn excluded_pixels(&self) -> usize {
        self.excluded.count_true()
    }

    /// Excluded share of the region; 0 for an empty region.
    pub fn fraction(&self) -> f64 {
        if self.region_pixels == 0 {
            0.0
        } else {
            self.excluded_pixels() as f64 / self.region_pixels as f64
        }
    }
}

/// Evaluates every request on `rm` in parallel. Output order follows input.
pub fn evaluate_all(rm: &RegionMask, reqs: &[ExclusionRequest]) -> Vec<Result<ConstraintResult>> {
    let region_pixels = rm.region_pixels();
    reqs.par_iter()
        .map(|r| {
            let ev = r.evaluate(rm)?;
            Ok(ConstraintResult {
                label: r.label.clone(),
                motivation: r.motivation,
                excluded: ev.excluded,
                region_pixels,
                warnings: ev.warnings,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImpactRow {
    pub label: String,
    pub motivation: Motivation,
    /// `None` when the constraint failed to evaluate.
    pub fraction: Option<f64>,
    pub error: Option<String>,
}

/// Each constraint applied alone to a fresh availability matrix, sorted by
/// excluded fraction, largest first. Failed constraints are kept, last.
pub fn independent_impact(rm: &RegionMask, reqs: &[ExclusionRequest]) -> (Vec<ImpactRow>, Vec<ConstraintResult>) {
    let mut rows = Vec::with_capacity(reqs.len());
    let mut results = Vec::new();
    for (req, res) in reqs.iter().zip(evaluate_all(rm, reqs)) {
        let (fraction, error) = match res {
            Ok(r) => {
                let f = r.fraction();
                results.push(r);
                (Some(f), None)
            }
            Err(e) => (None, Some(e.to_string())),
        };
        rows.push(ImpactRow { label: req.label.clone(), motivation: req.motivation, fraction, error });
    }
    sort_descending(&mut rows, |r| r.fraction);
    (rows, results)
}

fn sort_descending<T>(rows: &mut [T], key: impl Fn(&T) -> Option<f64>) {
    // Stable: ties keep input order. Missing keys sort last.
    rows.sort_by(|a, b| match (key(a), key(b)) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImpactTableRow {
    pub label: String,
    pub motivation: Motivation,
    /// One entry per region, in region order.
    pub fractions: Vec<Option<f64>>,
    /// Mean over the regions where the constraint evaluated.
    pub average: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImpactTable {
    pub regions: Vec<String>,
    pub rows: Vec<ImpactTableRow>,
}

/// Independent impact over several regions, ordered by the average over
/// all of them.
pub fn impact_table(regions: &[(String, RegionMask)], reqs: &[ExclusionRequest]) -> ImpactTable {
    let per_region: Vec<Vec<Option<f64>>> = regions
        .iter()
        .map(|(_, rm)| evaluate_all(rm, reqs).into_iter().map(|r| r.ok().map(|r| r.fraction())).collect())
        .collect();
    let mut rows: Vec<ImpactTableRow> = reqs
        .iter()
        .enumerate()
        .map(|(i, req)| {
            let fractions: Vec<Option<f64>> = per_region.iter().map(|v| v[i]).collect();
            let ok: Vec<f64> = fractions.iter().flatten().copied().collect();
            let average = (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64);
            ImpactTableRow { label: req.label.clone(), motivation: req.motivation, fractions, average }
        })
        .collect();
    sort_descending(&mut rows, |r| r.average);
    ImpactTable { regions: regions.iter().map(|(n, _)| n.clone()).collect(), rows }
}

/// Pairwise overlap `|E_i ∩ E_j| / |E_i|`, with `i` the given constraint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapMatrix {
    pub labels: Vec<String>,
    /// `None` on rows whose constraint excludes nothing.
    pub overlap: Vec<Vec<Option<f64>>>,
    /// Defined rows by ascending row average (most exclusive first).
    pub given_rank: Vec<usize>,
    /// Defined columns by descending column average (most overlapping first).
    pub overlapping_rank: Vec<usize>,
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

pub fn overlap_matrix(results: &[ConstraintResult]) -> Result<OverlapMatrix> {
    if results.len() < 2 {
        return Err(Error::InvalidParams("overlap needs at least two constraints".into()));
    }
    let g = results[0].excluded.georef();
    for r in &results[1..] {
        g.check_congruent(r.excluded.georef())?;
    }
    let n = results.len();
    let counts: Vec<usize> = results.iter().map(|r| r.excluded_pixels()).collect();
    let mut inter = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in i..n {
            let c = results[i]
                .excluded
                .values()
                .iter()
                .zip(results[j].excluded.values())
                .filter(|(a, b)| **a && **b)
                .count();
            inter[i][j] = c;
            inter[j][i] = c;
        }
    }
    let overlap: Vec<Vec<Option<f64>>> = (0..n)
        .map(|i| (0..n).map(|j| (counts[i] > 0).then(|| inter[i][j] as f64 / counts[i] as f64)).collect())
        .collect();
    let defined: Vec<usize> = (0..n).filter(|&i| counts[i] > 0).collect();
    let row_avg = |i: usize| mean(defined.iter().filter(|&&j| j != i).filter_map(|&j| overlap[i][j]));
    let col_avg = |j: usize| mean(defined.iter().filter(|&&i| i != j).filter_map(|&i| overlap[i][j]));
    let mut given: Vec<(usize, f64)> = defined.iter().map(|&i| (i, row_avg(i).unwrap_or(0.0))).collect();
    given.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut overlapping: Vec<(usize, f64)> = defined.iter().map(|&j| (j, col_avg(j).unwrap_or(0.0))).collect();
    overlapping.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(OverlapMatrix {
        labels: results.iter().map(|r| r.label.clone()).collect(),
        overlap,
        given_rank: given.into_iter().map(|x| x.0).collect(),
        overlapping_rank: overlapping.into_iter().map(|x| x.0).collect(),
    })
}

/// Motivation-group combination codes and their shares of the region.
#[derive(Clone, Debug)]
pub struct MotivationMap {
    /// Bit-packed groups per region pixel, [`OUTSIDE_REGION`] elsewhere.
    pub codes: ByteGrid,
    /// Share of region pixels per code present.
    pub shares: BTreeMap<u8, f64>,
    /// Share of region pixels excluded by each group.
    pub group_impact: BTreeMap<Motivation, f64>,
}

pub fn motivation_map(rm: &RegionMask, results: &[ConstraintResult]) -> Result<MotivationMap> {
    for r in results {
        rm.georef.check_congruent(r.excluded.georef())?;
    }
    let mut codes: Vec<u8> = rm.mask.values().iter().map(|&m| if m { 0 } else { OUTSIDE_REGION }).collect();
    for r in results {
        let bit = r.motivation.bit();
        for (c, &e) in codes.iter_mut().zip(r.excluded.values()) {
            if e && *c != OUTSIDE_REGION {
                *c |= bit;
            }
        }
    }
    let region = rm.region_pixels();
    let mut hist = [0usize; 16];
    for &c in &codes {
        if c != OUTSIDE_REGION {
            hist[c as usize] += 1;
        }
    }
    let share = |n: usize| if region == 0 { 0.0 } else { n as f64 / region as f64 };
    let shares = (0..16u8).filter(|&c| hist[c as usize] > 0).map(|c| (c, share(hist[c as usize]))).collect();
    let group_impact = Motivation::ALL
        .iter()
        .map(|&m| {
            let n: usize = (0..16).filter(|c| c & m.bit() != 0).map(|c| hist[c as usize]).sum();
            (m, share(n))
        })
        .collect();
    let codes = RasterGrid::new(rm.georef, codes, Some(OUTSIDE_REGION))?;
    Ok(MotivationMap { codes, shares, group_impact })
}

fn fmt_fraction(f: Option<f64>) -> String {
    f.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6}"))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::Format { path: path.to_path_buf(), message: e.to_string() })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Format { path: path.to_path_buf(), message: e.to_string() }
}

/// `label,motivation,fraction` rows; failed constraints show `n/a`.
pub fn write_impact_csv(rows: &[ImpactRow], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["label", "motivation", "fraction"]).map_err(csv_err(path))?;
    for r in rows {
        w.write_record([r.label.as_str(), r.motivation.name(), &fmt_fraction(r.fraction)]).map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_impact_table_csv(t: &ImpactTable, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["label".to_string(), "motivation".to_string()];
    header.extend(t.regions.iter().cloned());
    header.push("average".into());
    w.write_record(&header).map_err(csv_err(path))?;
    for r in &t.rows {
        let mut rec = vec![r.label.clone(), r.motivation.name().to_string()];
        rec.extend(r.fractions.iter().map(|f| fmt_fraction(*f)));
        rec.push(fmt_fraction(r.average));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

/// n×n matrix with labels as header row and first column.
pub fn write_overlap_csv(m: &OverlapMatrix, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["given \\ overlapping".to_string()];
    header.extend(m.labels.iter().cloned());
    w.write_record(&header).map_err(csv_err(path))?;
    for (label, row) in m.labels.iter().zip(&m.overlap) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|v| fmt_fraction(*v)));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush()?;
    Ok(())
}

/// Heat map of the matrix, one pixel per cell, overlap scaled to 0..=255.
/// Undefined rows render black.
pub fn overlap_heatmap(m: &OverlapMatrix) -> Result<ByteGrid> {
    let n = m.labels.len();
    let georef = GeoRef::new(crate::Srs::LocalMeters, 0.0, n as f64, 1.0, 1.0, n, n)?;
    let values = m.overlap.iter().flatten().map(|v| v.map_or(0, |f| (f * 255.0).round() as u8)).collect();
    RasterGrid::new(georef, values, None)
}

/// Gray level of a motivation code: `code * 16`, with the outside at 255.
pub fn motivation_gray(code: u8) -> u8 {
    if code == OUTSIDE_REGION {
        255
    } else {
        code * 16
    }
}

pub fn write_motivation_pgm(map: &MotivationMap, path: &Path) -> Result<()> {
    write_pgm(&map.codes.map(None, motivation_gray), path)
}

#[derive(Serialize)]
struct SharesDoc<'a> {
    region_pixels: usize,
    shares: BTreeMap<String, f64>,
    groups: BTreeMap<&'a str, f64>,
}

pub fn write_motivation_shares(map: &MotivationMap, region_pixels: usize, path: &Path) -> Result<()> {
    let doc = SharesDoc {
        region_pixels,
        shares: map.shares.iter().map(|(c, s)| (format!("{c:02}"), *s)).collect(),
        groups: map.group_impact.iter().map(|(m, s)| (m.name(), *s)).collect(),
    };
    fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(())
}
