//! Planar geometry kernel: points, lines, polygons, segmentation,
//! buffering, area, containment and polygonization of boolean grids.

mod buffer;
mod polygonize;
pub mod scan;

pub use buffer::buffer;
pub use polygonize::polygonize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Coord<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Coord<T> {
    pub fn new(x: T, y: T) -> Self {
        Coord { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Coord<T>) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl<T: Real> From<(T, T)> for Coord<T> {
    fn from((x, y): (T, T)) -> Self {
        Coord { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extent<T> {
    pub x_min: T,
    pub y_min: T,
    pub x_max: T,
    pub y_max: T,
}

impl<T: Real> Extent<T> {
    pub fn new(x_min: T, y_min: T, x_max: T, y_max: T) -> Result<Self> {
        if !(x_min <= x_max && y_min <= y_max) {
            return Err(Error::InvalidGeoRef(format!(
                "extent ({x_min}, {y_min}, {x_max}, {y_max}) is inverted or NaN"
            )));
        }
        Ok(Extent { x_min, y_min, x_max, y_max })
    }

    pub fn width(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> T {
        self.y_max - self.y_min
    }

    /// Closed-box intersection test.
    pub fn intersects(&self, other: &Extent<T>) -> bool {
        self.x_min <= other.x_max && other.x_min <= self.x_max && self.y_min <= other.y_max && other.y_min <= self.y_max
    }

    pub fn intersection(&self, other: &Extent<T>) -> Option<Extent<T>> {
        let e = Extent {
            x_min: self.x_min.max(other.x_min),
            y_min: self.y_min.max(other.y_min),
            x_max: self.x_max.min(other.x_max),
            y_max: self.y_max.min(other.y_max),
        };
        (e.x_min <= e.x_max && e.y_min <= e.y_max).then_some(e)
    }

    pub fn contains(&self, c: &Coord<T>) -> bool {
        c.x >= self.x_min && c.x <= self.x_max && c.y >= self.y_min && c.y <= self.y_max
    }

    pub fn grow(&self, d: T) -> Extent<T> {
        Extent { x_min: self.x_min - d, y_min: self.y_min - d, x_max: self.x_max + d, y_max: self.y_max + d }
    }

    pub fn union(&self, other: &Extent<T>) -> Extent<T> {
        Extent {
            x_min: self.x_min.min(other.x_min),
            y_min: self.y_min.min(other.y_min),
            x_max: self.x_max.max(other.x_max),
            y_max: self.y_max.max(other.y_max),
        }
    }

    fn of_coords<'a, I>(coords: I) -> Option<Extent<T>>
    where
        I: IntoIterator<Item = &'a Coord<T>>,
    {
        let mut it = coords.into_iter();
        let first = it.next()?;
        let mut e = Extent { x_min: first.x, y_min: first.y, x_max: first.x, y_max: first.y };
        for c in it {
            e.x_min = e.x_min.min(c.x);
            e.y_min = e.y_min.min(c.y);
            e.x_max = e.x_max.max(c.x);
            e.y_max = e.y_max.max(c.y);
        }
        Some(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineString<T>(Vec<Coord<T>>);

impl<T: Real> LineString<T> {
    pub fn new(coords: Vec<Coord<T>>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidRing("line string needs at least 2 vertices".into()));
        }
        if !coords.iter().all(Coord::is_finite) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(LineString(coords))
    }

    pub fn coords(&self) -> &[Coord<T>] {
        &self.0
    }

    pub fn length(&self) -> T {
        self.0.windows(2).fold(T::zero(), |acc, w| acc + w[0].distance(&w[1]))
    }
}

/// Polygon with one exterior ring and any number of holes.
///
/// Rings are stored closed. Construction normalizes the exterior to
/// counter-clockwise and holes to clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon<T> {
    exterior: Vec<Coord<T>>,
    holes: Vec<Vec<Coord<T>>>,
}

impl<T: Real> Polygon<T> {
    pub fn new(exterior: Vec<Coord<T>>, holes: Vec<Vec<Coord<T>>>) -> Result<Self> {
        let exterior = normalize_ring(exterior, true)?;
        let holes = holes.into_iter().map(|h| normalize_ring(h, false)).collect::<Result<Vec<_>>>()?;
        Ok(Polygon { exterior, holes })
    }

    /// Axis-aligned rectangle.
    pub fn rect(x_min: T, y_min: T, x_max: T, y_max: T) -> Result<Self> {
        Polygon::new(
            vec![
                Coord::new(x_min, y_min),
                Coord::new(x_max, y_min),
                Coord::new(x_max, y_max),
                Coord::new(x_min, y_max),
            ],
            vec![],
        )
    }

    pub fn exterior(&self) -> &[Coord<T>] {
        &self.exterior
    }

    pub fn holes(&self) -> &[Vec<Coord<T>>] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &[Coord<T>]> {
        std::iter::once(self.exterior.as_slice()).chain(self.holes.iter().map(Vec::as_slice))
    }

    pub fn area(&self) -> T {
        let holes = self.holes.iter().fold(T::zero(), |acc, h| acc + signed_ring_area(h).abs());
        (signed_ring_area(&self.exterior).abs() - holes).max(T::zero())
    }

    pub fn contains(&self, pt: &Coord<T>) -> bool {
        point_in_polygon(pt, self)
    }
}

fn normalize_ring<T: Real>(mut ring: Vec<Coord<T>>, ccw: bool) -> Result<Vec<Coord<T>>> {
    if !ring.iter().all(Coord::is_finite) {
        return Err(Error::NonFiniteCoordinate);
    }
    if ring.first() != ring.last() {
        if let Some(&first) = ring.first() {
            ring.push(first);
        }
    }
    if ring.len() < 4 {
        return Err(Error::InvalidRing(format!("closed ring needs at least 4 vertices, got {}", ring.len())));
    }
    let area = signed_ring_area(&ring);
    if (area > T::zero()) != ccw && area != T::zero() {
        ring.reverse();
    }
    Ok(ring)
}

/// Shoelace signed area of a closed ring; positive when counter-clockwise.
pub fn signed_ring_area<T: Real>(ring: &[Coord<T>]) -> T {
    let sum = ring.windows(2).fold(T::zero(), |acc, w| acc + (w[0].x * w[1].y - w[1].x * w[0].y));
    sum / T::lit(2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry<T> {
    Point(Coord<T>),
    MultiPoint(Vec<Coord<T>>),
    LineString(LineString<T>),
    MultiLineString(Vec<LineString<T>>),
    Polygon(Polygon<T>),
    MultiPolygon(Vec<Polygon<T>>),
}

impl<T: Real> Geometry<T> {
    pub fn empty() -> Self {
        Geometry::MultiPolygon(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Geometry::MultiPoint(v) => v.is_empty(),
            Geometry::MultiLineString(v) => v.is_empty(),
            Geometry::MultiPolygon(v) => v.is_empty(),
            _ => false,
        }
    }

    pub fn is_areal(&self) -> bool {
        matches!(self, Geometry::Polygon(_) | Geometry::MultiPolygon(_))
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Geometry::Point(_) => "Point",
            Geometry::MultiPoint(_) => "MultiPoint",
            Geometry::LineString(_) => "LineString",
            Geometry::MultiLineString(_) => "MultiLineString",
            Geometry::Polygon(_) => "Polygon",
            Geometry::MultiPolygon(_) => "MultiPolygon",
        }
    }

    /// Every vertex, ring closing vertices included.
    pub fn coords(&self) -> Box<dyn Iterator<Item = &Coord<T>> + '_> {
        match self {
            Geometry::Point(c) => Box::new(std::iter::once(c)),
            Geometry::MultiPoint(v) => Box::new(v.iter()),
            Geometry::LineString(l) => Box::new(l.0.iter()),
            Geometry::MultiLineString(v) => Box::new(v.iter().flat_map(|l| l.0.iter())),
            Geometry::Polygon(p) => Box::new(p.rings().flatten()),
            Geometry::MultiPolygon(v) => Box::new(v.iter().flat_map(|p| p.rings().flatten())),
        }
    }

    pub fn points(&self) -> &[Coord<T>] {
        match self {
            Geometry::Point(c) => std::slice::from_ref(c),
            Geometry::MultiPoint(v) => v,
            _ => &[],
        }
    }

    pub fn lines(&self) -> &[LineString<T>] {
        match self {
            Geometry::LineString(l) => std::slice::from_ref(l),
            Geometry::MultiLineString(v) => v,
            _ => &[],
        }
    }

    pub fn polygons(&self) -> &[Polygon<T>] {
        match self {
            Geometry::Polygon(p) => std::slice::from_ref(p),
            Geometry::MultiPolygon(v) => v,
            _ => &[],
        }
    }

    /// Vertex chains that carry edges: line strings and polygon rings.
    pub fn paths(&self) -> Box<dyn Iterator<Item = &[Coord<T>]> + '_> {
        match self {
            Geometry::LineString(l) => Box::new(std::iter::once(l.coords())),
            Geometry::MultiLineString(v) => Box::new(v.iter().map(|l| l.coords())),
            Geometry::Polygon(p) => Box::new(p.rings()),
            Geometry::MultiPolygon(v) => Box::new(v.iter().flat_map(|p| p.rings())),
            _ => Box::new(std::iter::empty()),
        }
    }

    /// Total edge length of lines and rings.
    pub fn length(&self) -> T {
        self.paths().fold(T::zero(), |acc, p| acc + p.windows(2).fold(T::zero(), |a, w| a + w[0].distance(&w[1])))
    }

    /// Applies a fallible coordinate mapping, re-normalizing ring orientation.
    pub fn try_map_coords<F>(&self, mut f: F) -> Result<Geometry<T>>
    where
        F: FnMut(Coord<T>) -> Result<Coord<T>>,
    {
        let mut map_vec = |v: &[Coord<T>]| -> Result<Vec<Coord<T>>> { v.iter().map(|c| f(*c)).collect() };
        Ok(match self {
            Geometry::Point(c) => Geometry::Point(map_vec(std::slice::from_ref(c))?[0]),
            Geometry::MultiPoint(v) => Geometry::MultiPoint(map_vec(v)?),
            Geometry::LineString(l) => Geometry::LineString(LineString::new(map_vec(&l.0)?)?),
            Geometry::MultiLineString(v) => {
                Geometry::MultiLineString(v.iter().map(|l| LineString::new(map_vec(&l.0)?)).collect::<Result<_>>()?)
            }
            Geometry::Polygon(p) => Geometry::Polygon(map_polygon(p, &mut map_vec)?),
            Geometry::MultiPolygon(v) => {
                Geometry::MultiPolygon(v.iter().map(|p| map_polygon(p, &mut map_vec)).collect::<Result<_>>()?)
            }
        })
    }

    /// Membership in the closed point set: on a point, on a line, or inside
    /// (or on the boundary of) a polygon.
    pub fn contains(&self, pt: &Coord<T>) -> bool {
        self.distance_to(pt) == T::zero()
    }

    /// Euclidean distance from `pt` to the closed point set.
    pub fn distance_to(&self, pt: &Coord<T>) -> T {
        if self.polygons().iter().any(|p| point_in_polygon(pt, p)) {
            return T::zero();
        }
        let mut best = T::infinity();
        for c in self.points() {
            best = best.min(pt.distance(c));
        }
        for path in self.paths() {
            for w in path.windows(2) {
                best = best.min(point_segment_distance(pt, &w[0], &w[1]));
            }
            if path.len() == 1 {
                best = best.min(pt.distance(&path[0]));
            }
        }
        best
    }
}

fn map_polygon<T: Real, F>(p: &Polygon<T>, map_vec: &mut F) -> Result<Polygon<T>>
where
    F: FnMut(&[Coord<T>]) -> Result<Vec<Coord<T>>>,
{
    let ext = map_vec(&p.exterior)?;
    let holes = p.holes.iter().map(|h| map_vec(h)).collect::<Result<Vec<_>>>()?;
    Polygon::new(ext, holes)
}

/// Distance from `p` to the closed segment `a`–`b`.
pub fn point_segment_distance<T: Real>(p: &Coord<T>, a: &Coord<T>, b: &Coord<T>) -> T {
    let (abx, aby) = (b.x - a.x, b.y - a.y);
    let len2 = abx * abx + aby * aby;
    if len2 == T::zero() {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * abx + (p.y - a.y) * aby) / len2).max(T::zero()).min(T::one());
    let q = Coord::new(a.x + t * abx, a.y + t * aby);
    p.distance(&q)
}

/// Splits every edge so that no edge is longer than `max_segment`.
pub fn segmentize<T: Real>(g: &Geometry<T>, max_segment: T) -> Result<Geometry<T>> {
    if max_segment.is_nan() || max_segment <= T::zero() {
        return Err(Error::NonPositiveSegment);
    }
    let densify = |path: &[Coord<T>]| -> Vec<Coord<T>> {
        let mut out = Vec::with_capacity(path.len());
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            out.push(a);
            let len = a.distance(&b);
            let n = (len / max_segment).ceil().to_usize().unwrap_or(1).max(1);
            for k in 1..n {
                let t = T::from(k).unwrap() / T::from(n).unwrap();
                out.push(Coord::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t));
            }
        }
        if let Some(&last) = path.last() {
            out.push(last);
        }
        out
    };
    Ok(match g {
        Geometry::Point(_) | Geometry::MultiPoint(_) => g.clone(),
        Geometry::LineString(l) => Geometry::LineString(LineString(densify(&l.0))),
        Geometry::MultiLineString(v) => {
            Geometry::MultiLineString(v.iter().map(|l| LineString(densify(&l.0))).collect())
        }
        Geometry::Polygon(p) => Geometry::Polygon(densify_polygon(p, &densify)),
        Geometry::MultiPolygon(v) => Geometry::MultiPolygon(v.iter().map(|p| densify_polygon(p, &densify)).collect()),
    })
}

fn densify_polygon<T: Real>(p: &Polygon<T>, f: &impl Fn(&[Coord<T>]) -> Vec<Coord<T>>) -> Polygon<T> {
    Polygon { exterior: f(&p.exterior), holes: p.holes.iter().map(|h| f(h)).collect() }
}

/// Area of a polygon or multipolygon, holes subtracted.
pub fn polygon_area<T: Real>(g: &Geometry<T>) -> Result<T> {
    if !g.is_areal() {
        return Err(Error::InvalidRing(format!("{} has no area", g.type_name())));
    }
    Ok(g.polygons().iter().fold(T::zero(), |acc, p| acc + p.area()))
}

/// Even-odd containment test. Points on the boundary count as inside.
pub fn point_in_polygon<T: Real>(pt: &Coord<T>, poly: &Polygon<T>) -> bool {
    let mut inside = false;
    for ring in poly.rings() {
        for w in ring.windows(2) {
            let (a, b) = (w[0], w[1]);
            if on_segment(pt, &a, &b) {
                return true;
            }
            if (a.y > pt.y) != (b.y > pt.y) {
                let x = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if pt.x < x {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

fn on_segment<T: Real>(p: &Coord<T>, a: &Coord<T>, b: &Coord<T>) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    cross == T::zero() && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Tight axis-aligned bounds of all vertices.
pub fn envelope<T: Real>(g: &Geometry<T>) -> Result<Extent<T>> {
    Extent::of_coords(g.coords()).ok_or(Error::EmptyGeometry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Coord<f64> {
        Coord::new(x, y)
    }

    fn unit_square() -> Polygon<f64> {
        Polygon::rect(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn rings_are_closed_and_oriented() {
        let p = Polygon::new(
            vec![c(0.0, 0.0), c(0.0, 4.0), c(4.0, 4.0), c(4.0, 0.0)],
            vec![vec![c(1.0, 1.0), c(2.0, 1.0), c(2.0, 2.0), c(1.0, 2.0)]],
        )
        .unwrap();
        assert_eq!(p.exterior().first(), p.exterior().last());
        assert!(signed_ring_area(p.exterior()) > 0.0);
        assert!(signed_ring_area(&p.holes()[0]) < 0.0);
    }

    #[test]
    fn degenerate_ring_rejected() {
        assert!(Polygon::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![]).is_err());
        assert!(matches!(
            Polygon::new(vec![c(0.0, 0.0), c(f64::NAN, 0.0), c(1.0, 1.0)], vec![]),
            Err(Error::NonFiniteCoordinate)
        ));
    }

    #[test]
    fn area_with_hole() {
        assert_eq!(polygon_area(&Geometry::Polygon(unit_square())).unwrap(), 1.0);
        let p = Polygon::new(
            unit_square().exterior().to_vec(),
            vec![vec![c(0.25, 0.25), c(0.75, 0.25), c(0.75, 0.75), c(0.25, 0.75)]],
        )
        .unwrap();
        assert_eq!(polygon_area(&Geometry::Polygon(p)).unwrap(), 0.75);
        assert!(polygon_area(&Geometry::Point(c(0.0, 0.0))).is_err());
    }

    #[test]
    fn area_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let poly = star_polygon(&mut rng, 12, 10.0);
        let area = poly.area();
        let env = envelope(&Geometry::Polygon(poly.clone())).unwrap();
        let n = 200_000;
        let hits = (0..n)
            .filter(|_| {
                let p = c(rng.gen_range(env.x_min..env.x_max), rng.gen_range(env.y_min..env.y_max));
                winding_number(&p, poly.exterior()) != 0
            })
            .count();
        let mc = hits as f64 / n as f64 * env.width() * env.height();
        assert!((mc - area).abs() / area < 0.01, "{mc} vs {area}");
    }

    #[test]
    fn containment_basics() {
        let sq = unit_square();
        assert!(point_in_polygon(&c(0.5, 0.5), &sq));
        assert!(!point_in_polygon(&c(2.0, 2.0), &sq));
        assert!(point_in_polygon(&c(1.0, 0.5), &sq));
        assert!(point_in_polygon(&c(0.0, 0.0), &sq));
    }

    fn star_polygon(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Polygon<f64> {
        let cx = rng.gen_range(-5.0..5.0);
        let cy = rng.gen_range(-5.0..5.0);
        let ring = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * (k as f64 + rng.gen_range(0.0..0.8)) / n as f64;
                let rr = r * rng.gen_range(0.2..1.0);
                c(cx + rr * a.cos(), cy + rr * a.sin())
            })
            .collect();
        Polygon::new(ring, vec![]).unwrap()
    }

    /// Independent winding-number oracle.
    fn winding_number(p: &Coord<f64>, ring: &[Coord<f64>]) -> i32 {
        let mut wn = 0;
        for w in ring.windows(2) {
            let (a, b) = (w[0], w[1]);
            let side = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
            if a.y <= p.y {
                if b.y > p.y && side > 0.0 {
                    wn += 1;
                }
            } else if b.y <= p.y && side < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    #[test]
    fn even_odd_agrees_with_winding_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let n = rng.gen_range(3..12);
            let poly = star_polygon(&mut rng, n, 10.0);
            let p = c(rng.gen_range(-16.0..16.0), rng.gen_range(-16.0..16.0));
            assert_eq!(point_in_polygon(&p, &poly), winding_number(&p, poly.exterior()) != 0);
        }
    }

    #[test]
    fn segmentize_line() {
        let g = Geometry::LineString(LineString::new(vec![c(0.0, 0.0), c(1000.0, 0.0)]).unwrap());
        let s = segmentize(&g, 50.0).unwrap();
        let pts = s.lines()[0].coords();
        assert!(pts.len() > 20);
        assert!(pts.iter().all(|p| p.y == 0.0));
        assert!(pts.windows(2).all(|w| w[0].distance(&w[1]) <= 50.0 + 1e-12));
        assert_eq!(segmentize(&Geometry::Point(c(1.0, 2.0)), 5.0).unwrap(), Geometry::Point(c(1.0, 2.0)));
        assert!(matches!(segmentize(&g, 0.0), Err(Error::NonPositiveSegment)));
    }

    #[test]
    fn segmentize_preserves_perimeter_and_area() {
        let g = Geometry::Polygon(Polygon::rect(0.0, 0.0, 7.3, 3.1).unwrap());
        let s = segmentize(&g, 0.4).unwrap();
        let oracle: f64 = 2.0 * (7.3 + 3.1);
        assert!((s.length() - oracle).abs() < 1e-9);
        assert!((polygon_area(&s).unwrap() - 7.3 * 3.1).abs() < 1e-9 * 7.3 * 3.1);
        for w in s.polygons()[0].exterior().windows(2) {
            assert!(w[0].distance(&w[1]) <= 0.4 + 1e-12);
        }
    }

    #[test]
    fn envelope_is_tight() {
        assert_eq!(envelope(&Geometry::Polygon(unit_square())).unwrap(), Extent::new(0.0, 0.0, 1.0, 1.0).unwrap());
        assert_eq!(envelope(&Geometry::Point(c(3.0, 4.0))).unwrap(), Extent::new(3.0, 4.0, 3.0, 4.0).unwrap());
        assert!(matches!(envelope(&Geometry::<f64>::empty()), Err(Error::EmptyGeometry)));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Geometry::MultiPoint((0..50).map(|_| c(rng.gen(), rng.gen())).collect());
        let e = envelope(&g).unwrap();
        assert!(g.coords().all(|p| e.contains(p)));
        let eps = 1e-12;
        assert!(g.coords().any(|p| p.x < e.x_min + eps));
        assert!(g.coords().any(|p| p.x > e.x_max - eps));
        assert!(g.coords().any(|p| p.y < e.y_min + eps));
        assert!(g.coords().any(|p| p.y > e.y_max - eps));
    }

    #[test]
    fn distance_to_geometry() {
        let g = Geometry::Polygon(unit_square());
        assert_eq!(g.distance_to(&c(0.5, 0.5)), 0.0);
        assert!((g.distance_to(&c(2.0, 0.5)) - 1.0).abs() < 1e-12);
        let l = Geometry::LineString(LineString::new(vec![c(0.0, 0.0), c(10.0, 0.0)]).unwrap());
        assert!((l.distance_to(&c(-3.0, 4.0)) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn extent_operations() {
        let a = Extent::new(0.0, 0.0, 2.0, 2.0).unwrap();
        let b = Extent::new(1.0, 1.0, 3.0, 3.0).unwrap();
        assert!(a.intersects(&b));
        assert_eq!(a.intersection(&b), Some(Extent::new(1.0, 1.0, 2.0, 2.0).unwrap()));
        assert!(Extent::new(1.0, 0.0, 0.0, 1.0).is_err());
    }
}
