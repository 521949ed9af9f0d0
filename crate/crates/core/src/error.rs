use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point is antipodal to the projection center")]
    AntipodalPoint,
    #[error("projected coordinate ({x}, {y}) lies outside the valid projection disk")]
    OutOfDomain { x: f64, y: f64 },
    #[error("no transform path from {from} to {to}")]
    UnsupportedSrsPair { from: String, to: String },
    #[error("unknown spatial reference system `{0}`")]
    UnknownSrs(String),
    #[error("invalid projection parameters: {0}")]
    InvalidParams(String),

    #[error("segment length must be positive")]
    NonPositiveSegment,
    #[error("buffer distance must be non-negative")]
    NegativeDistance,
    #[error("arc tolerance must be positive")]
    NonPositiveTolerance,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("geometry is empty")]
    EmptyGeometry,
    #[error("geometry contains a NaN or infinite coordinate")]
    NonFiniteCoordinate,

    #[error("raster does not overlap the requested extent")]
    NoOverlap,
    #[error("indication range is empty (min > max)")]
    EmptyRange,
    #[error("at least one bound is required")]
    NoBound,
    #[error("mask has no true pixel")]
    EmptyMask,
    #[error("grid shapes differ: {0}")]
    ShapeMismatch(String),
    #[error("invalid georeference: {0}")]
    InvalidGeoRef(String),
    #[error("feature set SRS {found} does not match grid SRS {expected}")]
    SrsMismatch { expected: String, found: String },
    #[error("malformed filter expression: {0}")]
    MalformedExpression(String),

    #[error("region geometry is empty")]
    EmptyRegion,
    #[error("resolution must be positive")]
    NonPositiveResolution,

    #[error("edges must be strictly increasing and finite")]
    NonMonotoneEdges,
    #[error("prior supports between 1 and 254 edges, got {0}")]
    EdgeCount(usize),
    #[error("proximity source indicates no location")]
    EmptyIndication,
    #[error("operation requires a {expected} prior")]
    WrongKind { expected: &'static str },

    #[error("unknown criterion `{0}`")]
    UnknownCriterion(String),
    #[error("criterion `{name}` has no {level} threshold")]
    MissingLevel { name: String, level: String },

    #[error("config error: {0}")]
    ConfigParse(String),
    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{path}: {message}", path = .path.display())]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("constraint `{label}`: {source}")]
    Constraint {
        label: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_constraint(self, label: &str) -> Error {
        match self {
            e @ Error::Constraint { .. } => e,
            e => Error::Constraint { label: label.to_string(), source: Box::new(e) },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
