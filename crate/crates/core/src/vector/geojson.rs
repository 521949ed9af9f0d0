//! GeoJSON subset: a FeatureCollection of Point, LineString, Polygon and
//! their Multi* forms, with a top-level `"srs"` member (default `"wgs84"`).

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{AttrValue, Feature, FeatureSet};
use crate::error::{Error, Result};
use crate::{Coord, Geometry, LineString, Polygon, Srs};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format { path: "<geojson>".into(), message: msg.into() }
}

pub fn read_geojson(path: &Path) -> Result<FeatureSet> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    parse_geojson(&text).map_err(|e| match e {
        Error::Format { message, .. } => Error::Format { path: path.to_path_buf(), message },
        other => other,
    })
}

pub fn parse_geojson(text: &str) -> Result<FeatureSet> {
    let v: Value = serde_json::from_str(text)?;
    let srs = match v.get("srs") {
        None => Srs::Geographic,
        Some(Value::String(s)) => Srs::from_name(s)?,
        Some(_) => return Err(bad("`srs` must be a string")),
    };
    let features = match v.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => v
            .get("features")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("FeatureCollection without a `features` array"))?
            .iter()
            .enumerate()
            .map(|(i, f)| parse_feature(f).map_err(|e| bad(format!("feature {i}: {e}"))))
            .collect::<Result<Vec<_>>>()?,
        Some("Feature") => vec![parse_feature(&v)?],
        Some(_) => vec![Feature::new(parse_geometry(&v)?)],
        None => return Err(bad("missing `type`")),
    };
    Ok(FeatureSet { srs, features })
}

fn parse_feature(v: &Value) -> Result<Feature> {
    if v.get("type").and_then(Value::as_str) != Some("Feature") {
        return Err(bad("expected a Feature"));
    }
    let geometry = parse_geometry(v.get("geometry").ok_or_else(|| bad("feature without geometry"))?)?;
    let mut attributes = std::collections::BTreeMap::new();
    if let Some(Value::Object(props)) = v.get("properties") {
        for (k, p) in props {
            let a = match p {
                Value::String(s) => AttrValue::Str(s.clone()),
                Value::Number(n) => AttrValue::Num(n.as_f64().unwrap_or(f64::NAN)),
                Value::Bool(b) => AttrValue::Bool(*b),
                Value::Null => AttrValue::Null,
                other => AttrValue::Str(other.to_string()),
            };
            attributes.insert(k.clone(), a);
        }
    }
    Ok(Feature { geometry, attributes })
}

fn coord(v: &Value) -> Result<Coord> {
    let a = v.as_array().ok_or_else(|| bad("position is not an array"))?;
    match (a.first().and_then(Value::as_f64), a.get(1).and_then(Value::as_f64)) {
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Ok(Coord::new(x, y)),
        _ => Err(bad("position needs two finite numbers")),
    }
}

fn coords(v: &Value) -> Result<Vec<Coord>> {
    v.as_array().ok_or_else(|| bad("expected an array of positions"))?.iter().map(coord).collect()
}

fn polygon(v: &Value) -> Result<Polygon> {
    let rings = v.as_array().ok_or_else(|| bad("polygon is not an array of rings"))?;
    let mut rings = rings.iter().map(coords);
    let exterior = rings.next().ok_or_else(|| bad("polygon without rings"))??;
    let holes = rings.collect::<Result<Vec<_>>>()?;
    Polygon::new(exterior, holes)
}

pub fn parse_geometry(v: &Value) -> Result<Geometry> {
    let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| bad("geometry without `type`"))?;
    let c = v.get("coordinates").ok_or_else(|| bad(format!("{kind} without coordinates")))?;
    let list = |c: &Value| -> Result<Vec<Value>> { Ok(c.as_array().ok_or_else(|| bad("expected an array"))?.clone()) };
    Ok(match kind {
        "Point" => Geometry::Point(coord(c)?),
        "MultiPoint" => Geometry::MultiPoint(coords(c)?),
        "LineString" => Geometry::LineString(LineString::new(coords(c)?)?),
        "MultiLineString" => {
            Geometry::MultiLineString(list(c)?.iter().map(|l| LineString::new(coords(l)?)).collect::<Result<_>>()?)
        }
        "Polygon" => Geometry::Polygon(polygon(c)?),
        "MultiPolygon" => Geometry::MultiPolygon(list(c)?.iter().map(polygon).collect::<Result<_>>()?),
        other => return Err(bad(format!("unsupported geometry type `{other}`"))),
    })
}

fn pos(c: &Coord) -> Value {
    json!([c.x, c.y])
}

fn ring(r: &[Coord]) -> Value {
    Value::Array(r.iter().map(pos).collect())
}

fn poly(p: &Polygon) -> Value {
    Value::Array(p.rings().map(ring).collect())
}

pub fn geometry_to_json(g: &Geometry) -> Value {
    let (kind, coordinates) = match g {
        Geometry::Point(c) => ("Point", pos(c)),
        Geometry::MultiPoint(v) => ("MultiPoint", ring(v)),
        Geometry::LineString(l) => ("LineString", ring(l.coords())),
        Geometry::MultiLineString(v) => ("MultiLineString", Value::Array(v.iter().map(|l| ring(l.coords())).collect())),
        Geometry::Polygon(p) => ("Polygon", poly(p)),
        Geometry::MultiPolygon(v) => ("MultiPolygon", Value::Array(v.iter().map(poly).collect())),
    };
    json!({ "type": kind, "coordinates": coordinates })
}

pub fn to_geojson(fs: &FeatureSet) -> Value {
    let features: Vec<Value> = fs
        .features
        .iter()
        .map(|f| {
            let props: Map<String, Value> = f
                .attributes
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        AttrValue::Str(s) => Value::from(s.clone()),
                        AttrValue::Num(n) => Value::from(*n),
                        AttrValue::Bool(b) => Value::from(*b),
                        AttrValue::Null => Value::Null,
                    };
                    (k.clone(), v)
                })
                .collect();
            json!({ "type": "Feature", "properties": props, "geometry": geometry_to_json(&f.geometry) })
        })
        .collect();
    json!({ "type": "FeatureCollection", "srs": fs.srs.name(), "features": features })
}

pub fn write_geojson(fs: &FeatureSet, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&to_geojson(fs))? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "type": "FeatureCollection",
        "srs": "local_meters",
        "features": [
          {"type": "Feature", "properties": {"highway": "motorway", "lanes": 4, "lit": true, "ref": null},
           "geometry": {"type": "LineString", "coordinates": [[0, 0], [100, 50]]}},
          {"type": "Feature", "properties": {},
           "geometry": {"type": "Polygon", "coordinates": [[[0,0],[0,10],[10,10],[10,0],[0,0]]]}},
          {"type": "Feature", "geometry": {"type": "MultiPoint", "coordinates": [[1,2],[3,4]]}}
        ]
    }"#;

    #[test]
    fn parses_subset() {
        let fs = parse_geojson(SAMPLE).unwrap();
        assert_eq!(fs.srs, Srs::LocalMeters);
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.features[0].attributes["lanes"], AttrValue::Num(4.0));
        assert_eq!(fs.features[0].attributes["ref"], AttrValue::Null);
        // Clockwise input ring is normalized to counter-clockwise.
        assert!(fs.features[1].geometry.polygons()[0].area() > 0.0);
    }

    #[test]
    fn default_srs_is_wgs84() {
        let fs = parse_geojson(r#"{"type":"FeatureCollection","features":[]}"#).unwrap();
        assert_eq!(fs.srs, Srs::Geographic);
    }

    #[test]
    fn round_trip() {
        let fs = parse_geojson(SAMPLE).unwrap();
        let back = parse_geojson(&to_geojson(&fs).to_string()).unwrap();
        assert_eq!(back, fs);
    }

    #[test]
    fn rejects_unsupported() {
        let gc = r#"{"type":"FeatureCollection","features":[{"type":"Feature","geometry":{"type":"GeometryCollection","geometries":[]}}]}"#;
        assert!(parse_geojson(gc).is_err());
        assert!(parse_geojson(r#"{"type":"Point","coordinates":[1]}"#).is_err());
        assert!(matches!(
            parse_geojson(r#"{"srs":"epsg:9999","type":"FeatureCollection","features":[]}"#),
            Err(Error::UnknownSrs(_))
        ));
    }
}
