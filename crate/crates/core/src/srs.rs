//! Spatial reference systems and the ellipsoidal Lambert azimuthal
//! equal-area projection.
//!
//! Three kinds are supported: geographic WGS84 longitude/latitude in degrees,
//! Lambert azimuthal equal-area (LAEA) on an ellipsoid, and an identity
//! planar system in meters with no geographic anchor. Every transform goes
//! through geographic coordinates, so a new projected kind only needs a
//! forward and an inverse.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Angular distance (radians) from the antipode below which the forward
/// projection is treated as singular.
pub const ANTIPODE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipsoid<T> {
    /// Semi-major axis in meters.
    pub a: T,
    /// Inverse flattening.
    pub inv_f: T,
}

impl<T: Real> Ellipsoid<T> {
    pub fn grs80() -> Self {
        Ellipsoid { a: T::lit(6_378_137.0), inv_f: T::lit(298.257_222_101) }
    }

    pub fn wgs84() -> Self {
        Ellipsoid { a: T::lit(6_378_137.0), inv_f: T::lit(298.257_223_563) }
    }

    pub fn flattening(&self) -> T {
        T::one() / self.inv_f
    }

    /// First eccentricity squared.
    pub fn e2(&self) -> T {
        let f = self.flattening();
        f * (T::lit(2.0) - f)
    }

    pub fn semi_minor(&self) -> T {
        self.a * (T::one() - self.flattening())
    }
}

/// Parameters of an ellipsoidal Lambert azimuthal equal-area projection.
///
/// The default instance is ETRS89-LAEA (EPSG:3035).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaeaParams<T> {
    /// Latitude of the projection center, degrees.
    pub lat_0: T,
    /// Longitude of the projection center, degrees.
    pub lon_0: T,
    pub false_easting: T,
    pub false_northing: T,
    pub ellipsoid: Ellipsoid<T>,
}

impl<T: Real> Default for LaeaParams<T> {
    fn default() -> Self {
        LaeaParams {
            lat_0: T::lit(52.0),
            lon_0: T::lit(10.0),
            false_easting: T::lit(4_321_000.0),
            false_northing: T::lit(3_210_000.0),
            ellipsoid: Ellipsoid::grs80(),
        }
    }
}

impl<T: Real> LaeaParams<T> {
    pub fn epsg3035() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        let finite =
            [self.lat_0, self.lon_0, self.false_easting, self.false_northing, self.ellipsoid.a, self.ellipsoid.inv_f]
                .iter()
                .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite LAEA parameter".into()));
        }
        if self.lat_0.abs() > T::lit(90.0) || self.lon_0.abs() > T::lit(180.0) {
            return Err(Error::InvalidParams(format!(
                "projection center ({}, {}) out of range",
                self.lon_0, self.lat_0
            )));
        }
        if self.ellipsoid.a <= T::zero() || self.ellipsoid.inv_f <= T::one() {
            return Err(Error::InvalidParams("ellipsoid needs a > 0 and inverse flattening > 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Srs<T> {
    /// WGS84 longitude/latitude in degrees, ordered (lon, lat).
    Geographic,
    LambertAzimuthalEqualArea(LaeaParams<T>),
    /// Planar meters without a geographic anchor.
    LocalMeters,
}

impl<T: Real> Srs<T> {
    pub fn laea3035() -> Self {
        Srs::LambertAzimuthalEqualArea(LaeaParams::epsg3035())
    }

    /// Parses the names used in configuration and sidecar files.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "wgs84" | "epsg:4326" => Ok(Srs::Geographic),
            "laea3035" | "epsg:3035" => Ok(Self::laea3035()),
            "local_meters" => Ok(Srs::LocalMeters),
            other => Err(Error::UnknownSrs(other.to_string())),
        }
    }

    /// Config-file name. LAEA instances that differ from EPSG:3035 are
    /// reported as `laea_custom` and cannot be round-tripped by name.
    pub fn name(&self) -> &'static str {
        match self {
            Srs::Geographic => "wgs84",
            Srs::LambertAzimuthalEqualArea(p) if *p == LaeaParams::epsg3035() => "laea3035",
            Srs::LambertAzimuthalEqualArea(_) => "laea_custom",
            Srs::LocalMeters => "local_meters",
        }
    }

    pub fn is_geographic(&self) -> bool {
        matches!(self, Srs::Geographic)
    }
}

impl<T: Real> fmt::Display for Srs<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Aspect {
    Oblique,
    NorthPolar,
    SouthPolar,
}

/// Precomputed constants for one LAEA parameter set.
#[derive(Clone, Copy, Debug)]
pub struct LaeaProjection<T> {
    params: LaeaParams<T>,
    aspect: Aspect,
    e: T,
    e2: T,
    qp: T,
    rq: T,
    beta0: T,
    d: T,
    lon0: T,
}

impl<T: Real> LaeaProjection<T> {
    pub fn new(params: LaeaParams<T>) -> Result<Self> {
        params.validate()?;
        let e2 = params.ellipsoid.e2();
        let e = e2.sqrt();
        let a = params.ellipsoid.a;
        let phi0 = params.lat_0.to_radians();
        let qp = authalic_q(T::one(), e, e2);
        let rq = a * (qp / T::lit(2.0)).sqrt();
        let pole_eps = T::lit(1e-12);
        let aspect = if (phi0 - T::FRAC_PI_2()).abs() < pole_eps {
            Aspect::NorthPolar
        } else if (phi0 + T::FRAC_PI_2()).abs() < pole_eps {
            Aspect::SouthPolar
        } else {
            Aspect::Oblique
        };
        let (sin_phi0, cos_phi0) = phi0.sin_cos();
        let beta0 = clamp_unit(authalic_q(sin_phi0, e, e2) / qp).asin();
        let d = if aspect == Aspect::Oblique {
            a * cos_phi0 / ((T::one() - e2 * sin_phi0 * sin_phi0).sqrt() * rq * beta0.cos())
        } else {
            T::one()
        };
        Ok(LaeaProjection { params, aspect, e, e2, qp, rq, beta0, d, lon0: params.lon_0.to_radians() })
    }

    pub fn params(&self) -> &LaeaParams<T> {
        &self.params
    }

    /// Radius of the valid disk around the projection center, in meters.
    pub fn disk_radius(&self) -> T {
        T::lit(2.0) * self.rq
    }

    /// Geographic (degrees) to projected (meters).
    pub fn forward(&self, lon: T, lat: T) -> Result<(T, T)> {
        if !lon.is_finite() || !lat.is_finite() {
            return Err(Error::NonFiniteCoordinate);
        }
        if lat.abs() > T::lit(90.0) {
            return Err(Error::InvalidParams(format!("latitude {lat} outside [-90, 90]")));
        }
        let p = &self.params;
        let phi = lat.to_radians();
        let dlon = lon.to_radians() - self.lon0;
        let (sin_dlon, cos_dlon) = dlon.sin_cos();
        let q = authalic_q(phi.sin(), self.e, self.e2);
        let a = p.ellipsoid.a;

        match self.aspect {
            Aspect::NorthPolar | Aspect::SouthPolar => {
                let north = self.aspect == Aspect::NorthPolar;
                let inner = if north { self.qp - q } else { self.qp + q };
                // Angular distance to the opposite pole; q loses the
                // resolution needed for this near the pole, latitude does not.
                let to_antipode = if north { phi + T::FRAC_PI_2() } else { T::FRAC_PI_2() - phi };
                if to_antipode < T::lit(ANTIPODE_TOLERANCE) {
                    return Err(Error::AntipodalPoint);
                }
                let rho = a * inner.max(T::zero()).sqrt();
                let x = p.false_easting + rho * sin_dlon;
                let y = if north { p.false_northing - rho * cos_dlon } else { p.false_northing + rho * cos_dlon };
                Ok((x, y))
            }
            Aspect::Oblique => {
                let beta = clamp_unit(q / self.qp).asin();
                let (sin_b, cos_b) = beta.sin_cos();
                let (sin_b0, cos_b0) = self.beta0.sin_cos();

                // Haversine distance to the antipode (-beta0, lon0 + pi).
                let half = T::lit(0.5);
                let hav = |x: T| {
                    let s = (x * half).sin();
                    s * s
                };
                let h = hav(beta + self.beta0) + cos_b * cos_b0 * hav(dlon - T::PI());
                let psi = T::lit(2.0) * h.max(T::zero()).sqrt().min(T::one()).asin();
                if psi < T::lit(ANTIPODE_TOLERANCE) {
                    return Err(Error::AntipodalPoint);
                }

                let denom = T::one() + sin_b0 * sin_b + cos_b0 * cos_b * cos_dlon;
                let b = self.rq * (T::lit(2.0) / denom).sqrt();
                let x = p.false_easting + b * self.d * cos_b * sin_dlon;
                let y = p.false_northing + (b / self.d) * (cos_b0 * sin_b - sin_b0 * cos_b * cos_dlon);
                Ok((x, y))
            }
        }
    }

    /// Projected (meters) to geographic (degrees).
    pub fn inverse(&self, x: T, y: T) -> Result<(T, T)> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteCoordinate);
        }
        let p = &self.params;
        let a = p.ellipsoid.a;
        let de = x - p.false_easting;
        let dn = y - p.false_northing;
        let out_of_domain = || Error::OutOfDomain { x: x.to_f64_lossy(), y: y.to_f64_lossy() };

        let (beta, lam) = match self.aspect {
            Aspect::NorthPolar | Aspect::SouthPolar => {
                let north = self.aspect == Aspect::NorthPolar;
                let rho = de.hypot(dn);
                if rho > self.disk_radius() * (T::one() + T::lit(1e-12)) {
                    return Err(out_of_domain());
                }
                let rr = rho * rho / (a * a);
                let q = if north { self.qp - rr } else { rr - self.qp };
                let beta = clamp_unit(q / self.qp).asin();
                let lam = if north { de.atan2(-dn) } else { de.atan2(dn) };
                (beta, lam)
            }
            Aspect::Oblique => {
                let rho = (de / self.d).hypot(self.d * dn);
                if rho > self.disk_radius() * (T::one() + T::lit(1e-12)) {
                    return Err(out_of_domain());
                }
                if rho == T::zero() {
                    return Ok((p.lon_0, p.lat_0));
                }
                let c = T::lit(2.0) * clamp_unit(rho / (T::lit(2.0) * self.rq)).asin();
                let (sin_c, cos_c) = c.sin_cos();
                let (sin_b0, cos_b0) = self.beta0.sin_cos();
                let beta = clamp_unit(cos_c * sin_b0 + self.d * dn * sin_c * cos_b0 / rho).asin();
                let lam = (de * sin_c).atan2(self.d * rho * cos_b0 * cos_c - self.d * self.d * dn * sin_b0 * sin_c);
                (beta, lam)
            }
        };

        let q = self.qp * beta.sin();
        let phi = self.latitude_from_q(q, beta);
        let mut lon = (self.lon0 + lam).to_degrees();
        let full = T::lit(360.0);
        let half = T::lit(180.0);
        if lon > half {
            lon = lon - full;
        } else if lon < -half {
            lon = lon + full;
        }
        Ok((lon, phi.to_degrees()))
    }

    /// Geodetic latitude whose authalic `q` equals the given value. Starts
    /// from the standard series and polishes with Newton iterations.
    fn latitude_from_q(&self, q: T, beta: T) -> T {
        if (q.abs() - self.qp).abs() <= T::lit(1e-15) * self.qp {
            return T::FRAC_PI_2().copysign(q);
        }
        let e2 = self.e2;
        let e4 = e2 * e2;
        let e6 = e4 * e2;
        let two = T::lit(2.0);
        let mut phi = beta
            + (e2 / T::lit(3.0) + T::lit(31.0) * e4 / T::lit(180.0) + T::lit(517.0) * e6 / T::lit(5040.0))
                * (two * beta).sin()
            + (T::lit(23.0) * e4 / T::lit(360.0) + T::lit(251.0) * e6 / T::lit(3780.0)) * (T::lit(4.0) * beta).sin()
            + (T::lit(761.0) * e6 / T::lit(45360.0)) * (T::lit(6.0) * beta).sin();
        let e = self.e;
        for _ in 0..20 {
            let (sin_phi, cos_phi) = phi.sin_cos();
            if cos_phi.abs() < T::lit(1e-12) {
                break;
            }
            let w = T::one() - e2 * sin_phi * sin_phi;
            let step = w * w / (two * cos_phi)
                * (q / (T::one() - e2) - sin_phi / w
                    + ((T::one() - e * sin_phi) / (T::one() + e * sin_phi)).ln() / (two * e));
            phi = phi + step;
            if step.abs() < T::lit(1e-15) {
                break;
            }
        }
        phi
    }
}

/// Authalic `q(phi)` from `sin(phi)`.
fn authalic_q<T: Real>(sin_phi: T, e: T, e2: T) -> T {
    let one = T::one();
    let es = e * sin_phi;
    (one - e2) * (sin_phi / (one - e2 * sin_phi * sin_phi) - ((one - es) / (one + es)).ln() / (T::lit(2.0) * e))
}

fn clamp_unit<T: Real>(v: T) -> T {
    v.max(-T::one()).min(T::one())
}

/// Projects geographic (lon, lat) degrees to LAEA meters.
pub fn laea_forward<T: Real>(lon: T, lat: T, params: &LaeaParams<T>) -> Result<(T, T)> {
    LaeaProjection::new(*params)?.forward(lon, lat)
}

/// Inverts LAEA meters back to geographic (lon, lat) degrees.
pub fn laea_inverse<T: Real>(x: T, y: T, params: &LaeaParams<T>) -> Result<(T, T)> {
    LaeaProjection::new(*params)?.inverse(x, y)
}

#[derive(Clone, Copy, Debug)]
enum Leg<T> {
    Identity,
    Laea(LaeaProjection<T>),
}

/// A reusable point transform between two reference systems, routed
/// through geographic coordinates.
#[derive(Clone, Copy, Debug)]
pub struct Transformer<T> {
    same: bool,
    to_geo: Leg<T>,
    from_geo: Leg<T>,
}

impl<T: Real> Transformer<T> {
    pub fn new(from: &Srs<T>, to: &Srs<T>) -> Result<Self> {
        if from == to {
            return Ok(Transformer { same: true, to_geo: Leg::Identity, from_geo: Leg::Identity });
        }
        let unsupported = || Error::UnsupportedSrsPair { from: from.name().to_string(), to: to.name().to_string() };
        let leg = |s: &Srs<T>| -> Result<Leg<T>> {
            match s {
                Srs::Geographic => Ok(Leg::Identity),
                Srs::LambertAzimuthalEqualArea(p) => Ok(Leg::Laea(LaeaProjection::new(*p)?)),
                Srs::LocalMeters => Err(unsupported()),
            }
        };
        Ok(Transformer { same: false, to_geo: leg(from)?, from_geo: leg(to)? })
    }

    pub fn is_identity(&self) -> bool {
        self.same
    }

    pub fn apply(&self, x: T, y: T) -> Result<(T, T)> {
        if self.same {
            return Ok((x, y));
        }
        let (lon, lat) = match &self.to_geo {
            Leg::Identity => (x, y),
            Leg::Laea(p) => p.inverse(x, y)?,
        };
        match &self.from_geo {
            Leg::Identity => Ok((lon, lat)),
            Leg::Laea(p) => p.forward(lon, lat),
        }
    }
}

/// Transforms one point between reference systems. `from == to` returns the
/// input unchanged.
pub fn transform_point<T: Real>(pt: (T, T), from: &Srs<T>, to: &Srs<T>) -> Result<(T, T)> {
    Transformer::new(from, to)?.apply(pt.0, pt.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3035() -> LaeaParams<f64> {
        LaeaParams::epsg3035()
    }

    #[test]
    fn center_maps_to_false_origin() {
        let (x, y) = laea_forward(10.0, 52.0, &p3035()).unwrap();
        assert_eq!((x, y), (4_321_000.0, 3_210_000.0));
        let (lon, lat) = laea_inverse(4_321_000.0, 3_210_000.0, &p3035()).unwrap();
        assert_eq!((lon, lat), (10.0, 52.0));
    }

    #[test]
    fn round_trip_over_europe() {
        let proj = LaeaProjection::new(p3035()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let lon = -10.0 + 10.0 * i as f64;
                let lat = 35.0 + 8.75 * j as f64;
                let (x, y) = proj.forward(lon, lat).unwrap();
                let (lon2, lat2) = proj.inverse(x, y).unwrap();
                assert!((lon - lon2).abs() < 1e-9, "{lon} {lon2}");
                assert!((lat - lat2).abs() < 1e-9, "{lat} {lat2}");
            }
        }
    }

    #[test]
    fn known_reference_point() {
        // EPSG guidance note 7-2 worked example: 50N 5E -> (3962799.45, 2999718.85).
        let (x, y) = laea_forward(5.0, 50.0, &p3035()).unwrap();
        assert!((x - 3_962_799.45).abs() < 0.01, "{x}");
        assert!((y - 2_999_718.85).abs() < 0.01, "{y}");
    }

    #[test]
    fn far_point_is_out_of_domain() {
        let d = 3.0 * 2.0 * 6_378_137.0;
        let err = laea_inverse(4_321_000.0 + d, 3_210_000.0, &p3035()).unwrap_err();
        assert!(matches!(err, Error::OutOfDomain { .. }));
    }

    #[test]
    fn antipode_is_rejected() {
        let p = LaeaParams { lat_0: 0.0, lon_0: 0.0, ..p3035() };
        let err = laea_forward(180.0, 0.0, &p).unwrap_err();
        assert!(matches!(err, Error::AntipodalPoint));
        assert!(laea_forward(179.9, 0.0, &p).is_ok());
    }

    #[test]
    fn polar_aspect_round_trip() {
        let p = LaeaParams {
            lat_0: 90.0,
            lon_0: 0.0,
            false_easting: 0.0,
            false_northing: 0.0,
            ellipsoid: Ellipsoid::wgs84(),
        };
        let proj = LaeaProjection::new(p).unwrap();
        for &(lon, lat) in &[(10.0f64, 80.0f64), (-120.0, 45.0), (170.0, -30.0)] {
            let (x, y) = proj.forward(lon, lat).unwrap();
            let (lon2, lat2) = proj.inverse(x, y).unwrap();
            assert!((lon - lon2).abs() < 1e-9 && (lat - lat2).abs() < 1e-9);
        }
        assert!(matches!(proj.forward(0.0, -90.0), Err(Error::AntipodalPoint)));
    }

    #[test]
    fn identity_transform_is_bitwise() {
        let s: Srs<f64> = Srs::laea3035();
        let pt = (1234.5678901234, -9876.54321);
        assert_eq!(transform_point(pt, &s, &s).unwrap(), pt);
        let l: Srs<f64> = Srs::LocalMeters;
        assert_eq!(transform_point(pt, &l, &l).unwrap(), pt);
    }

    #[test]
    fn geographic_to_laea_matches_forward() {
        let laea: Srs<f64> = Srs::laea3035();
        let a = transform_point((12.5, 47.25), &Srs::Geographic, &laea).unwrap();
        let b = laea_forward(12.5, 47.25, &p3035()).unwrap();
        assert_eq!(a, b);
        let back = transform_point(a, &laea, &Srs::Geographic).unwrap();
        let again = transform_point(back, &Srs::Geographic, &laea).unwrap();
        assert!((again.0 - a.0).abs() < 1e-6 && (again.1 - a.1).abs() < 1e-6);
    }

    #[test]
    fn local_meters_has_no_geographic_path() {
        let err = transform_point((0.0, 0.0), &Srs::LocalMeters, &Srs::<f64>::Geographic);
        assert!(matches!(err, Err(Error::UnsupportedSrsPair { .. })));
    }

    #[test]
    fn names_round_trip() {
        for name in ["wgs84", "laea3035", "local_meters"] {
            let s: Srs<f64> = Srs::from_name(name).unwrap();
            assert_eq!(s.name(), name);
        }
        assert!(Srs::<f64>::from_name("epsg:32632").is_err());
    }

    #[test]
    fn single_precision_instantiation() {
        let (x, y) = laea_forward(10.0f32, 52.0f32, &LaeaParams::<f32>::default()).unwrap();
        assert!((x - 4_321_000.0).abs() < 1.0 && (y - 3_210_000.0).abs() < 1.0);
    }

    #[test]
    fn invalid_params_rejected() {
        let p = LaeaParams { lat_0: 95.0, ..p3035() };
        assert!(LaeaProjection::new(p).is_err());
        let p = LaeaParams { ellipsoid: Ellipsoid { a: 1.0, inv_f: 0.5 }, ..p3035() };
        assert!(LaeaProjection::new(p).is_err());
    }
}
