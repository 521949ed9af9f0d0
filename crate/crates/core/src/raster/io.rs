//! ESRI ASCII grids with a JSON sidecar, and binary PGM export.
//!
//! The sidecar `<file>.asc.meta.json` carries the SRS name and, when the
//! pixels are not square, `dy`. Callers may store extra members in it (the
//! prior format does); they are returned untouched by [`read_asc`].

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use super::{GeoRef, RasterGrid};
use crate::error::{Error, Result};
use crate::Srs;

/// Values that can be stored in an ASCII grid.
pub trait AscValue: Copy + PartialEq {
    fn format(self, out: &mut String);
    fn parse(token: &str) -> Option<Self>;
}

impl AscValue for u8 {
    fn format(self, out: &mut String) {
        let _ = write!(out, "{self}");
    }
    fn parse(token: &str) -> Option<Self> {
        token.parse().ok().or_else(|| {
            let v: f64 = token.parse().ok()?;
            (v.fract() == 0.0 && (0.0..=255.0).contains(&v)).then_some(v as u8)
        })
    }
}

impl AscValue for f32 {
    fn format(self, out: &mut String) {
        let _ = write!(out, "{self}");
    }
    fn parse(token: &str) -> Option<Self> {
        token.parse().ok()
    }
}

impl AscValue for bool {
    fn format(self, out: &mut String) {
        out.push(if self { '1' } else { '0' });
    }
    fn parse(token: &str) -> Option<Self> {
        match token {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes `grid` as an ASCII grid plus sidecar. `extra` members are merged
/// into the sidecar.
pub fn write_asc<V: AscValue>(grid: &RasterGrid<V>, path: &Path, extra: Option<&Map<String, Value>>) -> Result<()> {
    let g = grid.georef();
    let mut s = String::with_capacity(g.len() * 4 + 200);
    let _ = writeln!(s, "ncols {}", g.nx);
    let _ = writeln!(s, "nrows {}", g.ny);
    let _ = writeln!(s, "xllcorner {}", g.extent.x_min);
    let _ = writeln!(s, "yllcorner {}", g.extent.y_min);
    let _ = writeln!(s, "cellsize {}", g.dx);
    if let Some(nd) = grid.nodata() {
        s.push_str("NODATA_value ");
        nd.format(&mut s);
        s.push('\n');
    }
    for row in grid.values().chunks(g.nx) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            v.format(&mut s);
        }
        s.push('\n');
    }
    fs::write(path, s)?;

    let mut meta = Map::new();
    meta.insert("srs".into(), Value::from(g.srs.name()));
    if g.dy != g.dx {
        meta.insert("dy".into(), Value::from(g.dy));
    }
    if let Some(extra) = extra {
        for (k, v) in extra {
            meta.insert(k.clone(), v.clone());
        }
    }
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&Value::Object(meta))? + "\n")?;
    Ok(())
}

/// Reads an ASCII grid and its sidecar. A missing sidecar means square
/// pixels in `local_meters`.
pub fn read_asc<V: AscValue>(path: &Path) -> Result<(RasterGrid<V>, Map<String, Value>)> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let bad = |message: String| Error::Format { path: path.to_path_buf(), message };

    let meta = match fs::read_to_string(sidecar_path(path)) {
        Ok(s) => match serde_json::from_str::<Value>(&s)? {
            Value::Object(m) => m,
            _ => return Err(bad("sidecar is not a JSON object".into())),
        },
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Map::new(),
        Err(e) => return Err(e.into()),
    };
    let srs = match meta.get("srs").and_then(Value::as_str) {
        Some(name) => Srs::from_name(name)?,
        None => Srs::LocalMeters,
    };

    let mut tokens = text.split_whitespace().peekable();
    let mut header = std::collections::HashMap::new();
    while let Some(t) = tokens.peek() {
        if t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            let key = tokens.next().unwrap().to_ascii_lowercase();
            let val = tokens.next().ok_or_else(|| bad(format!("header `{key}` has no value")))?;
            header.insert(key, val);
        } else {
            break;
        }
    }
    let num = |k: &str| -> Result<f64> {
        header
            .get(k)
            .ok_or_else(|| bad(format!("missing header `{k}`")))?
            .parse::<f64>()
            .map_err(|_| bad(format!("header `{k}` is not a number")))
    };
    let nx = num("ncols")? as usize;
    let ny = num("nrows")? as usize;
    let dx = num("cellsize")?;
    let dy = meta.get("dy").and_then(Value::as_f64).unwrap_or(dx);
    let (x_min, y_min) = match (header.contains_key("xllcenter"), header.contains_key("yllcenter")) {
        (true, true) => (num("xllcenter")? - dx / 2.0, num("yllcenter")? - dy / 2.0),
        _ => (num("xllcorner")?, num("yllcorner")?),
    };
    let nodata = match header.get("nodata_value") {
        Some(t) => Some(V::parse(t).ok_or_else(|| bad(format!("bad NODATA_value `{t}`")))?),
        None => None,
    };
    let values: Vec<V> =
        tokens.map(|t| V::parse(t).ok_or_else(|| bad(format!("bad cell value `{t}`")))).collect::<Result<_>>()?;
    if values.len() != nx * ny {
        return Err(bad(format!("expected {} cells, found {}", nx * ny, values.len())));
    }
    let georef = GeoRef::new(srs, x_min, y_min + ny as f64 * dy, dx, dy, nx, ny)?;
    Ok((RasterGrid::new(georef, values, nodata)?, meta))
}

/// Pixel bytes for PGM output.
pub trait PgmValue: Copy {
    fn gray(self) -> u8;
}

impl PgmValue for bool {
    fn gray(self) -> u8 {
        if self {
            255
        } else {
            0
        }
    }
}

impl PgmValue for u8 {
    fn gray(self) -> u8 {
        self
    }
}

/// Encodes a grid as binary PGM (P5): booleans as 0/255, bytes unchanged.
pub fn encode_pgm<V: PgmValue + PartialEq>(grid: &RasterGrid<V>) -> Vec<u8> {
    let g = grid.georef();
    let mut out = format!("P5\n{} {}\n255\n", g.nx, g.ny).into_bytes();
    out.extend(grid.values().iter().map(|v| v.gray()));
    out
}

pub fn write_pgm<V: PgmValue + PartialEq>(grid: &RasterGrid<V>, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_pgm(grid))?;
    Ok(())
}
