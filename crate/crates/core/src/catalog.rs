//! Built-in criterion catalog.
//!
//! The catalog lives in `data/catalog.json` and is embedded at build time.
//! It lists the general criteria, their sub-criteria with low/typical/high
//! exclusion thresholds, and the prior datasets that express them.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exclusion::{ExclusionRequest, ExclusionSource};

/// Raw bytes of the shipped catalog.
pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motivation {
    Sociopolitical,
    Physical,
    Conservation,
    #[serde(alias = "economical")]
    Economic,
}

impl Motivation {
    pub const ALL: [Motivation; 4] =
        [Motivation::Sociopolitical, Motivation::Physical, Motivation::Conservation, Motivation::Economic];

    /// Bit of this group in a motivation-combination code.
    pub fn bit(self) -> u8 {
        match self {
            Motivation::Sociopolitical => 1,
            Motivation::Physical => 2,
            Motivation::Conservation => 4,
            Motivation::Economic => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Motivation::Sociopolitical => "sociopolitical",
            Motivation::Physical => "physical",
            Motivation::Conservation => "conservation",
            Motivation::Economic => "economic",
        }
    }
}

impl fmt::Display for Motivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Motivation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sociopolitical" => Ok(Motivation::Sociopolitical),
            "physical" => Ok(Motivation::Physical),
            "conservation" => Ok(Motivation::Conservation),
            "economic" | "economical" => Ok(Motivation::Economic),
            other => Err(Error::InvalidParams(format!("unknown motivation group `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Value,
    Proximity,
}

/// Which criterion values are more desirable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    High,
    Low,
    Range,
    Unspecified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Excludes {
    DistancesBelow,
    ValuesAbove,
    ValuesBelow,
    DistancesAbove,
}

impl Excludes {
    /// True when larger thresholds exclude more.
    pub fn grows_with_threshold(self) -> bool {
        matches!(self, Excludes::DistancesBelow | Excludes::ValuesBelow)
    }

    pub fn phrase(self) -> &'static str {
        match self {
            Excludes::DistancesBelow => "distances below",
            Excludes::ValuesAbove => "values above",
            Excludes::ValuesBelow => "values below",
            Excludes::DistancesAbove => "distances above",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionRate {
    pub general: f64,
    pub constraint: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub name: String,
    pub motivation: Motivation,
    pub kind: EntryKind,
    pub preference: Preference,
    pub excludes: Option<Excludes>,
    pub low: Option<f64>,
    pub typical: Option<f64>,
    pub high: Option<f64>,
    pub unit: Option<String>,
    pub sub_of: Option<String>,
    /// Share of reviewed studies using the criterion at all and as a
    /// constraint, in percent. General criteria only.
    pub inclusion_rate: Option<InclusionRate>,
}

impl CriterionEntry {
    pub fn is_general(&self) -> bool {
        self.sub_of.is_none()
    }

    pub fn threshold(&self, level: Level) -> Option<f64> {
        match level {
            Level::Low => self.low,
            Level::Typical => self.typical,
            Level::High => self.high,
        }
    }

    /// Levels with a tabulated threshold.
    pub fn levels(&self) -> Vec<Level> {
        Level::ALL.into_iter().filter(|l| self.threshold(*l).is_some()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorEntry {
    pub name: String,
    pub description: String,
    pub edges: usize,
    /// Catalog criterion the prior expresses.
    pub criterion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub criteria: Vec<CriterionEntry>,
    pub priors: Vec<PriorEntry>,
}

/// Exclusion strength of a tabulated threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Low,
    Typical,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Typical, Level::High];

    pub fn name(self) -> &'static str {
        match self {
            Level::Low => "low",
            Level::Typical => "typical",
            Level::High => "high",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(Level::Low),
            "typical" => Ok(Level::Typical),
            "high" => Ok(Level::High),
            other => Err(Error::InvalidParams(format!("unknown level `{other}`"))),
        }
    }
}

/// A catalog threshold resolved at one level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintSpec {
    pub criterion: String,
    pub motivation: Motivation,
    pub level: Level,
    pub excludes: Excludes,
    pub threshold: f64,
    pub unit: String,
}

impl ConstraintSpec {
    /// `(min, max)` criterion bounds of the excluded range.
    pub fn bounds(&self) -> (Option<f64>, Option<f64>) {
        if self.excludes.grows_with_threshold() {
            (None, Some(self.threshold))
        } else {
            (Some(self.threshold), None)
        }
    }

    /// Fills a request for `source` with this threshold.
    ///
    /// Priors and value rasters take the threshold as an indication bound.
    /// Vector sources and indicator rasters take it as a buffer distance;
    /// "distances above" then excludes everything outside that buffer.
    pub fn to_request(&self, label: &str, source: ExclusionSource) -> Result<ExclusionRequest> {
        let (lo, hi) = self.bounds();
        let distance = matches!(self.excludes, Excludes::DistancesBelow | Excludes::DistancesAbove);
        let source = match source {
            ExclusionSource::Prior { prior, .. } => ExclusionSource::Prior { prior, min: lo, max: hi },
            ExclusionSource::Raster { grid, .. } if !distance => ExclusionSource::Raster { grid, min: lo, max: hi },
            ExclusionSource::Vector { .. } if !distance => {
                return Err(Error::InvalidParams(format!(
                    "`{}` excludes {} and needs a raster or prior source",
                    self.criterion,
                    self.excludes.phrase()
                )))
            }
            s => s,
        };
        let mut req = ExclusionRequest::new(label, self.motivation, source);
        if distance && !matches!(req.source, ExclusionSource::Prior { .. }) {
            req = req.with_buffer(self.threshold);
            if self.excludes == Excludes::DistancesAbove {
                req = req.inverted();
            }
        }
        Ok(req)
    }
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.criterion, self.excludes.phrase(), self.threshold, self.unit)
    }
}

fn normalize(name: &str) -> String {
    name.split_whitespace()
        .map(|w| if w == "and" { "&".to_string() } else { w.to_lowercase() })
        .collect::<Vec<_>>()
        .join(" ")
}

impl Catalog {
    /// The embedded catalog, parsed once.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::parse(CATALOG_JSON).expect("embedded catalog is valid"))
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let c: Catalog = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        for e in &self.criteria {
            if let Some(p) = &e.sub_of {
                if self.criteria.iter().all(|c| &c.name != p || !c.is_general()) {
                    return bad(format!("`{}` refers to unknown parent `{p}`", e.name));
                }
            }
            let vals: Vec<f64> = e.levels().into_iter().filter_map(|l| e.threshold(l)).collect();
            if !vals.is_empty() && e.excludes.is_none() {
                return bad(format!("`{}` has thresholds but no direction", e.name));
            }
            if let (Some(x), Some(l), Some(t), Some(h)) = (e.excludes, e.low, e.typical, e.high) {
                let ordered = if x.grows_with_threshold() { l <= t && t <= h } else { l >= t && t >= h };
                if !ordered {
                    return bad(format!("`{}` thresholds are out of order", e.name));
                }
            }
        }
        Ok(())
    }

    /// Case- and whitespace-insensitive lookup; "and" matches "&".
    pub fn entry(&self, name: &str) -> Result<&CriterionEntry> {
        let key = normalize(name);
        self.criteria
            .iter()
            .find(|e| normalize(&e.name) == key)
            .ok_or_else(|| Error::UnknownCriterion(name.to_string()))
    }

    pub fn lookup(&self, name: &str, level: Level) -> Result<ConstraintSpec> {
        let e = self.entry(name)?;
        let missing = || Error::MissingLevel { name: e.name.clone(), level: level.name().to_string() };
        let threshold = e.threshold(level).ok_or_else(missing)?;
        let excludes = e.excludes.ok_or_else(missing)?;
        Ok(ConstraintSpec {
            criterion: e.name.clone(),
            motivation: e.motivation,
            level,
            excludes,
            threshold,
            unit: e.unit.clone().unwrap_or_default(),
        })
    }

    /// Entries in catalog order, optionally restricted to one group.
    pub fn list(&self, filter: Option<Motivation>) -> Vec<&CriterionEntry> {
        self.criteria.iter().filter(|e| filter.is_none_or(|m| e.motivation == m)).collect()
    }

    pub fn general(&self) -> impl Iterator<Item = &CriterionEntry> {
        self.criteria.iter().filter(|e| e.is_general())
    }

    pub fn sub_criteria<'a>(&'a self, parent: &'a str) -> impl Iterator<Item = &'a CriterionEntry> {
        self.criteria.iter().filter(move |e| e.sub_of.as_deref() == Some(parent))
    }

    /// Priors expressing `criterion`.
    pub fn priors_for<'a>(&'a self, criterion: &'a str) -> impl Iterator<Item = &'a PriorEntry> {
        self.priors.iter().filter(move |p| p.criterion == criterion)
    }
}

/// Looks a threshold up in the built-in catalog.
pub fn lookup(name: &str, level: Level) -> Result<ConstraintSpec> {
    Catalog::builtin().lookup(name, level)
}

/// Lists built-in entries, optionally restricted to one group.
pub fn list_catalog(filter: Option<Motivation>) -> Vec<CriterionEntry> {
    Catalog::builtin().list(filter).into_iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn embedded_bytes_match_data_file() {
        let on_disk = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/data/catalog.json")).unwrap();
        assert_eq!(Sha256::digest(&on_disk), Sha256::digest(CATALOG_JSON.as_bytes()));
        assert_eq!(
            format!("{:x}", Sha256::digest(CATALOG_JSON.as_bytes())),
            "0d78a04cca7fb346e4f66d4e8f7135aefd4093663cb2ffb60c77b01741d27ce3"
        );
    }

    #[test]
    fn tabulated_examples() {
        let s = lookup("settlements", Level::Typical).unwrap();
        assert_eq!((s.excludes, s.threshold, s.unit.as_str()), (Excludes::DistancesBelow, 800.0, "m"));
        let s = lookup("slope", Level::High).unwrap();
        assert_eq!((s.excludes, s.threshold, s.unit.as_str()), (Excludes::ValuesAbove, 1.0, "deg"));
        let s = lookup("wind speed", Level::Typical).unwrap();
        assert_eq!((s.excludes, s.threshold, s.unit.as_str()), (Excludes::ValuesBelow, 4.5, "m/s"));
        assert_eq!(s.motivation, Motivation::Economic);
        assert_eq!(lookup("Access", Level::Low).unwrap().threshold, 45_000.0);
        assert_eq!(lookup("leisure and camping", Level::High).unwrap().threshold, 3000.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(lookup("unicorns", Level::Low), Err(Error::UnknownCriterion(_))));
        for name in ["Ground Composition", "Aspect", "Vegetation", "Resource", "Land Value"] {
            assert!(matches!(lookup(name, Level::Typical), Err(Error::MissingLevel { .. })), "{name}");
        }
    }

    #[test]
    fn general_criteria_by_group() {
        let c = Catalog::builtin();
        let count = |m| c.general().filter(|e| e.motivation == m).count();
        assert_eq!(c.general().count(), 28);
        assert_eq!(count(Motivation::Sociopolitical), 13);
        assert_eq!(count(Motivation::Physical), 9);
        assert_eq!(count(Motivation::Conservation), 2);
        assert_eq!(count(Motivation::Economic), 4);
        let cons: Vec<_> = list_catalog(Some(Motivation::Conservation));
        let general: Vec<_> = cons.iter().filter(|e| e.is_general()).map(|e| e.name.as_str()).collect();
        assert_eq!(general, ["Protected FFH", "Protected Areas"]);
        assert!(cons
            .iter()
            .all(|e| e.is_general() || ["Protected FFH", "Protected Areas"].contains(&e.sub_of.as_deref().unwrap())));
        assert_eq!(cons.len(), 7);
    }

    #[test]
    fn kinds_and_preferences() {
        use EntryKind::*;
        use Preference::*;
        let c = Catalog::builtin();
        let expect = [
            ("Settlements", Proximity, High),
            ("Power Plants", Proximity, High),
            ("Slope", Value, Low),
            ("Elevation", Value, Low),
            ("Ground Composition", Value, Unspecified),
            ("Aspect", Value, Range),
            ("Resource", Value, High),
            ("Access", Proximity, Low),
            ("Connection", Proximity, Low),
            ("Land Value", Value, Unspecified),
        ];
        for (name, kind, pref) in expect {
            let e = c.entry(name).unwrap();
            assert_eq!((e.kind, e.preference), (kind, pref), "{name}");
        }
        let s = c.entry("Settlements").unwrap().inclusion_rate.unwrap();
        assert_eq!((s.general, s.constraint), (85.0, 84.0));
    }

    #[test]
    fn every_entry_round_trips_through_lookup() {
        let c = Catalog::builtin();
        for e in &c.criteria {
            for level in Level::ALL {
                match (e.threshold(level), c.lookup(&e.name, level)) {
                    (Some(t), Ok(spec)) => {
                        assert_eq!(spec.threshold, t);
                        assert_eq!(spec.criterion, e.name);
                    }
                    (None, Err(Error::MissingLevel { .. })) => {}
                    (t, r) => panic!("{}: {t:?} vs {r:?}", e.name),
                }
            }
        }
    }

    #[test]
    fn thresholds_follow_direction() {
        for e in &Catalog::builtin().criteria {
            if let (Some(x), Some(l), Some(t), Some(h)) = (e.excludes, e.low, e.typical, e.high) {
                if x.grows_with_threshold() {
                    assert!(l <= t && t <= h, "{}", e.name);
                } else {
                    assert!(l >= t && t >= h, "{}", e.name);
                }
            }
        }
    }

    #[test]
    fn priors_reference_known_criteria() {
        let c = Catalog::builtin();
        assert_eq!(c.priors.len(), 45);
        for p in &c.priors {
            assert!(c.entry(&p.criterion).is_ok(), "{}", p.criterion);
        }
        assert_eq!(c.priors_for("Railways").next().unwrap().edges, 34);
    }

    #[test]
    fn rejects_inconsistent_catalog() {
        let mut doc: serde_json::Value = serde_json::from_str(CATALOG_JSON).unwrap();
        doc["criteria"][0]["low"] = serde_json::json!(5000.0);
        assert!(Catalog::parse(&doc.to_string()).is_err());
    }

    #[test]
    fn motivation_bits_are_distinct() {
        let all = Motivation::ALL.iter().fold(0u8, |acc, m| {
            assert_eq!(acc & m.bit(), 0);
            acc | m.bit()
        });
        assert_eq!(all, 15);
        assert_eq!("Economical".parse::<Motivation>().unwrap(), Motivation::Economic);
    }

    #[test]
    fn bounds_follow_direction() {
        assert_eq!(lookup("settlements", Level::Typical).unwrap().bounds(), (None, Some(800.0)));
        assert_eq!(lookup("slope", Level::Typical).unwrap().bounds(), (Some(10.0), None));
        assert_eq!(lookup("access", Level::Typical).unwrap().bounds(), (Some(5000.0), None));
    }
}
