//! Scanline kernels that burn geometries into a regular pixel lattice.
//!
//! Polygons are sampled on a fixed sub-pixel lattice with the nonzero
//! winding rule, so overlapping parts of a MultiPolygon read as their union.
//! Lines and points mark every pixel whose closed footprint they touch.

use super::{Coord, Extent, Polygon};

/// Sub-pixel samples per axis used for coverage estimates.
pub const SUBSAMPLES: usize = 4;

/// Pixel lattice: row 0 is the top (northern) row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub y_max: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pixel_center(&self, row: usize, col: usize) -> Coord<f64> {
        Coord::new(self.x_min + (col as f64 + 0.5) * self.dx, self.y_max - (row as f64 + 0.5) * self.dy)
    }

    pub fn footprint(&self, row: usize, col: usize) -> Extent<f64> {
        Extent {
            x_min: self.x_min + col as f64 * self.dx,
            x_max: self.x_min + (col + 1) as f64 * self.dx,
            y_min: self.y_max - (row + 1) as f64 * self.dy,
            y_max: self.y_max - row as f64 * self.dy,
        }
    }

    /// Inclusive column range whose closed footprints meet `[xa, xb]`.
    fn col_range(&self, xa: f64, xb: f64) -> Option<(usize, usize)> {
        let lo = ((xa - self.x_min) / self.dx).ceil() - 1.0;
        let hi = ((xb - self.x_min) / self.dx).floor();
        clamp_range(lo, hi, self.nx)
    }

    /// Inclusive row range whose closed footprints meet `[ya, yb]`.
    fn row_range(&self, ya: f64, yb: f64) -> Option<(usize, usize)> {
        let lo = ((self.y_max - yb) / self.dy).ceil() - 1.0;
        let hi = ((self.y_max - ya) / self.dy).floor();
        clamp_range(lo, hi, self.ny)
    }
}

fn clamp_range(lo: f64, hi: f64, n: usize) -> Option<(usize, usize)> {
    let lo = lo.max(0.0);
    let hi = hi.min(n as f64 - 1.0);
    if n == 0 || lo > hi || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    Some((lo as usize, hi as usize))
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    dir: i32,
}

impl Edge {
    fn x_at(&self, y: f64) -> f64 {
        self.x0 + (y - self.y0) * (self.x1 - self.x0) / (self.y1 - self.y0)
    }
}

fn collect_edges<'a>(polys: impl IntoIterator<Item = &'a Polygon<f64>>) -> Vec<Edge> {
    let mut edges = Vec::new();
    for p in polys {
        for ring in p.rings() {
            for w in ring.windows(2) {
                let (a, b) = (w[0], w[1]);
                if a.y == b.y {
                    continue;
                }
                let e = if a.y < b.y {
                    Edge { x0: a.x, y0: a.y, x1: b.x, y1: b.y, dir: 1 }
                } else {
                    Edge { x0: b.x, y0: b.y, x1: a.x, y1: a.y, dir: -1 }
                };
                edges.push(e);
            }
        }
    }
    edges
}

/// Number of covered samples per pixel on an `s × s` lattice, using the
/// nonzero winding rule over every ring of every polygon. Samples on a
/// boundary count as covered.
pub fn coverage_counts<'a>(polys: impl IntoIterator<Item = &'a Polygon<f64>>, grid: &GridSpec, s: usize) -> Vec<u16> {
    let mut counts = vec![0u16; grid.len()];
    let mut edges = collect_edges(polys);
    if edges.is_empty() || grid.is_empty() {
        return counts;
    }
    edges.sort_by(|a, b| b.y1.total_cmp(&a.y1));

    let sdx = grid.dx / s as f64;
    let ncols = grid.nx * s;
    let mut next_edge = 0;
    let mut active: Vec<Edge> = Vec::new();
    let mut crossings: Vec<(f64, i32)> = Vec::new();

    for row in 0..grid.ny {
        for k in 0..s {
            let y = grid.y_max - (row as f64 + (k as f64 + 0.5) / s as f64) * grid.dy;
            while next_edge < edges.len() && edges[next_edge].y1 > y {
                active.push(edges[next_edge]);
                next_edge += 1;
            }
            active.retain(|e| e.y0 <= y);
            if active.is_empty() {
                continue;
            }
            crossings.clear();
            crossings.extend(active.iter().filter(|e| e.y1 > y).map(|e| (e.x_at(y), e.dir)));
            crossings.sort_by(|a, b| a.0.total_cmp(&b.0));

            let row_counts = &mut counts[row * grid.nx..(row + 1) * grid.nx];
            let mut winding = 0;
            let mut next_m: i64 = 0;
            for i in 0..crossings.len() {
                let (xa, dir) = crossings[i];
                let before = winding;
                winding += dir;
                // Closed span [xa, xb] is inside when the winding is nonzero on
                // it; a crossing itself is inside if either side is.
                let xb = if winding != 0 {
                    crossings.get(i + 1).map_or(xa, |c| c.0)
                } else if before != 0 {
                    xa
                } else {
                    continue;
                };
                let m_lo = ((xa - grid.x_min) / sdx - 0.5).ceil().max(next_m as f64);
                let m_hi = ((xb - grid.x_min) / sdx - 0.5).floor().min(ncols as f64 - 1.0);
                if m_lo > m_hi {
                    continue;
                }
                let (m_lo, m_hi) = (m_lo as usize, m_hi as usize);
                for m in m_lo..=m_hi {
                    row_counts[m / s] += 1;
                }
                next_m = m_hi as i64 + 1;
            }
        }
    }
    counts
}

/// Marks pixels more than half covered by the union of `polys`.
pub fn burn_mostly_within<'a>(polys: impl IntoIterator<Item = &'a Polygon<f64>>, grid: &GridSpec, out: &mut [bool]) {
    let s = SUBSAMPLES;
    let half = (s * s / 2) as u16;
    for (o, c) in out.iter_mut().zip(coverage_counts(polys, grid, s)) {
        if c > half {
            *o = true;
        }
    }
}

/// Marks pixels whose center lies in the union of `polys`.
pub fn burn_centers<'a>(polys: impl IntoIterator<Item = &'a Polygon<f64>>, grid: &GridSpec, out: &mut [bool]) {
    for (o, c) in out.iter_mut().zip(coverage_counts(polys, grid, 1)) {
        if c > 0 {
            *o = true;
        }
    }
}

/// Marks every pixel whose closed footprint meets segment `a`–`b`.
pub fn burn_segment(a: &Coord<f64>, b: &Coord<f64>, grid: &GridSpec, out: &mut [bool]) {
    let Some((r_lo, r_hi)) = grid.row_range(a.y.min(b.y), a.y.max(b.y)) else {
        return;
    };
    for row in r_lo..=r_hi {
        let band_lo = grid.y_max - (row + 1) as f64 * grid.dy;
        let band_hi = grid.y_max - row as f64 * grid.dy;
        let (xa, xb) = if a.y == b.y {
            (a.x.min(b.x), a.x.max(b.x))
        } else {
            let ta = ((band_lo - a.y) / (b.y - a.y)).clamp(0.0, 1.0);
            let tb = ((band_hi - a.y) / (b.y - a.y)).clamp(0.0, 1.0);
            let xa = a.x + ta * (b.x - a.x);
            let xb = a.x + tb * (b.x - a.x);
            (xa.min(xb), xa.max(xb))
        };
        if let Some((c_lo, c_hi)) = grid.col_range(xa, xb) {
            out[row * grid.nx + c_lo..=row * grid.nx + c_hi].iter_mut().for_each(|v| *v = true);
        }
    }
}

pub fn burn_point(p: &Coord<f64>, grid: &GridSpec, out: &mut [bool]) {
    burn_segment(p, p, grid, out);
}

/// Marks every pixel whose closed footprint meets any of `polys`.
pub fn burn_touched_polygons<'a, I>(polys: I, grid: &GridSpec, out: &mut [bool])
where
    I: IntoIterator<Item = &'a Polygon<f64>> + Clone,
{
    burn_centers(polys.clone(), grid, out);
    for p in polys {
        for ring in p.rings() {
            for w in ring.windows(2) {
                burn_segment(&w[0], &w[1], grid, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nx: usize, ny: usize) -> GridSpec {
        GridSpec { x_min: 0.0, y_max: ny as f64, dx: 1.0, dy: 1.0, nx, ny }
    }

    #[test]
    fn aligned_rect_is_exact() {
        let g = grid(6, 6);
        let p = Polygon::rect(1.0, 2.0, 3.0, 4.0).unwrap();
        let mut out = vec![false; g.len()];
        burn_mostly_within([&p], &g, &mut out);
        let on: Vec<(usize, usize)> = (0..36).filter(|i| out[*i]).map(|i| (i / 6, i % 6)).collect();
        assert_eq!(on, vec![(2, 1), (2, 2), (3, 1), (3, 2)]);
    }

    #[test]
    fn overlapping_parts_are_a_union() {
        let g = grid(4, 1);
        let a = Polygon::rect(0.0, 0.0, 2.0, 1.0).unwrap();
        let b = Polygon::rect(1.0, 0.0, 3.0, 1.0).unwrap();
        let counts = coverage_counts([&a, &b], &g, 4);
        assert_eq!(counts, vec![16, 16, 16, 0]);
    }

    #[test]
    fn half_covered_pixel_is_out() {
        let g = grid(1, 1);
        let half = Polygon::rect(0.0, 0.0, 0.5, 1.0).unwrap();
        let mut out = vec![false];
        burn_mostly_within([&half], &g, &mut out);
        assert!(!out[0]);
        let more = Polygon::rect(0.0, 0.0, 0.7, 1.0).unwrap();
        burn_mostly_within([&more], &g, &mut out);
        assert!(out[0]);
    }

    #[test]
    fn hole_is_empty() {
        let g = grid(3, 3);
        let p = Polygon::new(
            Polygon::rect(0.0, 0.0, 3.0, 3.0).unwrap().exterior().to_vec(),
            vec![Polygon::rect(1.0, 1.0, 2.0, 2.0).unwrap().exterior().to_vec()],
        )
        .unwrap();
        let c = coverage_counts([&p], &g, 4);
        assert_eq!(c[4], 0);
        assert_eq!(c.iter().filter(|&&v| v == 16).count(), 8);
    }

    #[test]
    fn diagonal_segment_touches_staircase() {
        let g = grid(4, 4);
        let mut out = vec![false; 16];
        burn_segment(&Coord::new(0.5, 3.5), &Coord::new(3.5, 0.5), &g, &mut out);
        for r in 0..4 {
            assert!(out[r * 4 + r]);
        }
        assert!(!out[3]);
    }

    #[test]
    fn point_on_corner_touches_four() {
        let g = grid(3, 3);
        let mut out = vec![false; 9];
        burn_point(&Coord::new(1.0, 2.0), &g, &mut out);
        assert_eq!(out.iter().filter(|v| **v).count(), 4);
    }
}
