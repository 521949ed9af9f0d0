use super::{Coord, Geometry, Polygon};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Approximates the Minkowski sum of `g` with a disk of radius `dist`.
///
/// The result is a MultiPolygon whose parts may overlap: the input polygons,
/// one rectangle per edge and one polygonal disk per join or end point. Its
/// meaning is the union of its parts, which is how the rasterizer and
/// [`Geometry::contains`] read it. Every point within `dist - arc_tolerance`
/// of `g` is covered and no covered point is farther than
/// `dist + arc_tolerance`.
///
/// A zero distance returns the polygonal part of `g`; points and lines have
/// no area and vanish.
pub fn buffer<T: Real>(g: &Geometry<T>, dist: T, arc_tolerance: T) -> Result<Geometry<T>> {
    if dist.is_nan() || dist < T::zero() {
        return Err(Error::NegativeDistance);
    }
    if arc_tolerance.is_nan() || arc_tolerance <= T::zero() {
        return Err(Error::NonPositiveTolerance);
    }
    let mut parts: Vec<Polygon<T>> = g.polygons().to_vec();
    if dist == T::zero() {
        return Ok(Geometry::MultiPolygon(parts));
    }
    let disk = DiskTemplate::new(dist, arc_tolerance);

    for p in g.points() {
        parts.push(disk.at(*p)?);
    }
    for line in g.lines() {
        let pts = dedup(line.coords());
        if pts.len() == 1 {
            parts.push(disk.at(pts[0])?);
            continue;
        }
        for w in pts.windows(2) {
            parts.push(segment_rect(&w[0], &w[1], dist)?);
        }
        parts.push(disk.at(pts[0])?);
        parts.push(disk.at(pts[pts.len() - 1])?);
        for w in pts.windows(3) {
            let turn = cross(&w[0], &w[1], &w[2]);
            let forward = dot(&w[0], &w[1], &w[2]) > T::zero();
            if turn != T::zero() || !forward {
                parts.push(disk.at(w[1])?);
            }
        }
    }
    for poly in g.polygons() {
        for ring in poly.rings() {
            // Closed ring without the repeated closing vertex.
            let mut pts = dedup(ring);
            if pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
            let n = pts.len();
            if n < 3 {
                continue;
            }
            for i in 0..n {
                parts.push(segment_rect(&pts[i], &pts[(i + 1) % n], dist)?);
            }
            // Interior lies to the left of every ring after normalization, so
            // only left turns (convex corners) leave a wedge uncovered.
            for i in 0..n {
                let prev = pts[(i + n - 1) % n];
                let next = pts[(i + 1) % n];
                if cross(&prev, &pts[i], &next) > T::zero() {
                    parts.push(disk.at(pts[i])?);
                }
            }
        }
    }
    Ok(Geometry::MultiPolygon(parts))
}

fn dedup<T: Real>(pts: &[Coord<T>]) -> Vec<Coord<T>> {
    let mut out: Vec<Coord<T>> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last() != Some(p) {
            out.push(*p);
        }
    }
    out
}

fn cross<T: Real>(a: &Coord<T>, b: &Coord<T>, c: &Coord<T>) -> T {
    (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x)
}

fn dot<T: Real>(a: &Coord<T>, b: &Coord<T>, c: &Coord<T>) -> T {
    (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y)
}

fn segment_rect<T: Real>(a: &Coord<T>, b: &Coord<T>, dist: T) -> Result<Polygon<T>> {
    let len = a.distance(b);
    let nx = -(b.y - a.y) / len * dist;
    let ny = (b.x - a.x) / len * dist;
    Polygon::new(
        vec![
            Coord::new(a.x - nx, a.y - ny),
            Coord::new(b.x - nx, b.y - ny),
            Coord::new(b.x + nx, b.y + ny),
            Coord::new(a.x + nx, a.y + ny),
        ],
        vec![],
    )
}

/// Regular polygon approximating a disk. Vertices sit slightly outside the
/// circle so that the vertex overshoot equals the chord undershoot.
struct DiskTemplate<T> {
    offsets: Vec<Coord<T>>,
}

impl<T: Real> DiskTemplate<T> {
    fn new(dist: T, tol: T) -> Self {
        let ratio = ((dist - tol) / (dist + tol)).max(T::zero());
        let half_step = ratio.acos();
        let n = (T::PI() / half_step).ceil().to_usize().unwrap_or(8).clamp(8, 4096);
        let step = T::TAU() / T::from(n).unwrap();
        let radius = T::lit(2.0) * dist / (T::one() + (step / T::lit(2.0)).cos());
        let offsets = (0..n)
            .map(|k| {
                let a = step * T::from(k).unwrap();
                Coord::new(radius * a.cos(), radius * a.sin())
            })
            .collect();
        DiskTemplate { offsets }
    }

    fn at(&self, c: Coord<T>) -> Result<Polygon<T>> {
        Polygon::new(self.offsets.iter().map(|o| Coord::new(c.x + o.x, c.y + o.y)).collect(), vec![])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{polygon_area, LineString};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Coord<f64> {
        Coord::new(x, y)
    }

    #[test]
    fn point_buffer_is_near_circle() {
        let b = buffer(&Geometry::Point(c(5.0, -3.0)), 100.0, 1.0).unwrap();
        let area = polygon_area(&b).unwrap();
        let disk = std::f64::consts::PI * 100.0 * 100.0;
        assert!((area - disk).abs() / disk < 0.01, "{area} vs {disk}");
    }

    #[test]
    fn zero_distance() {
        let sq = Polygon::rect(0.0, 0.0, 2.0, 2.0).unwrap();
        let b = buffer(&Geometry::Polygon(sq.clone()), 0.0, 1.0).unwrap();
        assert_eq!(b, Geometry::MultiPolygon(vec![sq]));
        let b = buffer(&Geometry::Point(c(0.0, 0.0)), 0.0, 1.0).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn errors() {
        let g = Geometry::Point(c(0.0, 0.0));
        assert!(matches!(buffer(&g, -1.0, 1.0), Err(Error::NegativeDistance)));
        assert!(matches!(buffer(&g, 1.0, 0.0), Err(Error::NonPositiveTolerance)));
    }

    fn check_membership(g: &Geometry<f64>, dist: f64, tol: f64, seed: u64) {
        let b = buffer(g, dist, tol).unwrap();
        let env = crate::geometry::envelope(g).unwrap().grow(dist * 1.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        for _ in 0..1000 {
            let p = c(rng.gen_range(env.x_min..env.x_max), rng.gen_range(env.y_min..env.y_max));
            // Brute-force distance to the source vertices' segments.
            let d = g.distance_to(&p);
            if (d - dist).abs() <= tol {
                continue;
            }
            checked += 1;
            assert_eq!(b.contains(&p), d <= dist, "p={p:?} d={d}");
        }
        assert!(checked > 800);
    }

    #[test]
    fn membership_matches_brute_force_line() {
        let g = Geometry::LineString(
            LineString::new(vec![c(0.0, 0.0), c(300.0, 50.0), c(320.0, 400.0), c(-50.0, 420.0)]).unwrap(),
        );
        check_membership(&g, 80.0, 2.0, 1);
    }

    #[test]
    fn membership_matches_brute_force_polygon_with_hole() {
        let p = Polygon::new(
            vec![c(0.0, 0.0), c(500.0, 0.0), c(500.0, 300.0), c(250.0, 120.0), c(0.0, 300.0)],
            vec![vec![c(200.0, 20.0), c(300.0, 20.0), c(300.0, 60.0), c(200.0, 60.0)]],
        )
        .unwrap();
        check_membership(&Geometry::Polygon(p), 15.0, 0.5, 2);
    }

    #[test]
    fn membership_matches_brute_force_points() {
        let g = Geometry::MultiPoint(vec![c(0.0, 0.0), c(30.0, 10.0), c(100.0, -40.0)]);
        check_membership(&g, 25.0, 0.25, 3);
    }

    #[test]
    fn monotone_in_distance() {
        let g = Geometry::LineString(LineString::new(vec![c(0.0, 0.0), c(100.0, 100.0)]).unwrap());
        let tol = 0.5;
        let small = buffer(&g, 20.0, tol).unwrap();
        let large = buffer(&g, 35.0, tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let p = c(rng.gen_range(-50.0..150.0), rng.gen_range(-50.0..150.0));
            let d = g.distance_to(&p);
            if (d - 20.0).abs() <= tol || (d - 35.0).abs() <= tol {
                continue;
            }
            if small.contains(&p) {
                assert!(large.contains(&p));
            }
        }
    }
}
