use std::collections::HashMap;

use super::{Coord, Geometry, Polygon};
use crate::raster::BoolGrid;

/// Converts every 4-connected component of true pixels into one polygon
/// whose rings follow pixel edges. Holes are kept. An all-false grid gives an
/// empty MultiPolygon.
pub fn polygonize(grid: &BoolGrid) -> Geometry<f64> {
    let g = grid.georef();
    let (nx, ny) = (g.nx, g.ny);
    let values = grid.values();
    let mut label = vec![usize::MAX; nx * ny];
    let mut polys = Vec::new();
    let mut stack = Vec::new();
    let mut members = Vec::new();

    for start in 0..nx * ny {
        if !values[start] || label[start] != usize::MAX {
            continue;
        }
        let id = polys.len();
        members.clear();
        label[start] = id;
        stack.push(start);
        while let Some(i) = stack.pop() {
            members.push(i);
            let (r, c) = (i / nx, i % nx);
            let mut visit = |j: usize| {
                if values[j] && label[j] == usize::MAX {
                    label[j] = id;
                    stack.push(j);
                }
            };
            if r > 0 {
                visit(i - nx);
            }
            if r + 1 < ny {
                visit(i + nx);
            }
            if c > 0 {
                visit(i - 1);
            }
            if c + 1 < nx {
                visit(i + 1);
            }
        }
        members.sort_unstable();
        let rings = trace_component(&members, &label, id, nx, ny);
        let to_world = |(i, j): (usize, usize)| Coord::new(g.x_min() + j as f64 * g.dx, g.y_max() - i as f64 * g.dy);
        let mut exterior = None;
        let mut holes = Vec::new();
        for ring in rings {
            let area2 = lattice_area2(&ring);
            let world: Vec<Coord<f64>> = ring.into_iter().map(to_world).collect();
            if area2 > 0 {
                exterior = Some(world);
            } else {
                holes.push(world);
            }
        }
        let exterior = exterior.expect("every component has an outer ring");
        polys.push(Polygon::new(exterior, holes).expect("pixel rings are valid"));
    }
    Geometry::MultiPolygon(polys)
}

type Vertex = (usize, usize);

/// Traces the boundary rings of one component in lattice coordinates
/// (row, col). Rings are closed and free of collinear vertices. With the
/// interior kept on the left, the outer ring is counter-clockwise in world
/// orientation and holes are clockwise.
fn trace_component(members: &[usize], label: &[usize], id: usize, nx: usize, ny: usize) -> Vec<Vec<Vertex>> {
    let inside = |r: isize, c: isize| -> bool {
        r >= 0 && c >= 0 && (r as usize) < ny && (c as usize) < nx && label[r as usize * nx + c as usize] == id
    };
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for &i in members {
        let (r, c) = (i / nx, i % nx);
        let (ri, ci) = (r as isize, c as isize);
        if !inside(ri + 1, ci) {
            edges.push(((r + 1, c), (r + 1, c + 1)));
        }
        if !inside(ri, ci + 1) {
            edges.push(((r + 1, c + 1), (r, c + 1)));
        }
        if !inside(ri - 1, ci) {
            edges.push(((r, c + 1), (r, c)));
        }
        if !inside(ri, ci - 1) {
            edges.push(((r, c), (r + 1, c)));
        }
    }
    let mut outgoing: HashMap<Vertex, Vec<usize>> = HashMap::with_capacity(edges.len());
    for (k, e) in edges.iter().enumerate() {
        outgoing.entry(e.0).or_default().push(k);
    }
    let mut used = vec![false; edges.len()];
    let mut rings = Vec::new();

    for first in 0..edges.len() {
        if used[first] {
            continue;
        }
        let mut ring = vec![edges[first].0];
        let mut cur = first;
        used[first] = true;
        loop {
            let (a, b) = edges[cur];
            if b == edges[first].0 {
                break;
            }
            ring.push(b);
            let din = world_dir(a, b);
            let candidates = &outgoing[&b];
            let next = candidates
                .iter()
                .copied()
                .filter(|&k| !used[k])
                .max_by_key(|&k| {
                    let dout = world_dir(edges[k].0, edges[k].1);
                    // Prefer the left turn so diagonal neighbours stay apart.
                    din.0 * dout.1 - din.1 * dout.0
                })
                .expect("boundary edges form closed rings");
            used[next] = true;
            cur = next;
        }
        rings.push(simplify(ring));
    }
    rings
}

fn world_dir(a: Vertex, b: Vertex) -> (i64, i64) {
    (b.1 as i64 - a.1 as i64, -(b.0 as i64 - a.0 as i64))
}

/// Drops collinear vertices and closes the ring.
fn simplify(ring: Vec<Vertex>) -> Vec<Vertex> {
    let n = ring.len();
    let mut out: Vec<Vertex> = Vec::with_capacity(n + 1);
    for k in 0..n {
        let prev = ring[(k + n - 1) % n];
        let next = ring[(k + 1) % n];
        let d1 = world_dir(prev, ring[k]);
        let d2 = world_dir(ring[k], next);
        if d1.0 * d2.1 - d1.1 * d2.0 != 0 {
            out.push(ring[k]);
        }
    }
    if let Some(&f) = out.first() {
        out.push(f);
    }
    out
}

/// Twice the signed world-orientation area of a closed lattice ring.
fn lattice_area2(ring: &[Vertex]) -> i64 {
    ring.windows(2)
        .map(|w| {
            let (x0, y0) = (w[0].1 as i64, -(w[0].0 as i64));
            let (x1, y1) = (w[1].1 as i64, -(w[1].0 as i64));
            x0 * y1 - x1 * y0
        })
        .sum()
}
