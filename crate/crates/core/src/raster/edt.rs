//! Exact Euclidean distance transform on anisotropic pixel lattices, using
//! the separable lower-envelope-of-parabolas method.

use rayon::prelude::*;

use super::{BoolGrid, RasterGrid};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Squared distance from each pixel center to the nearest true pixel center.
pub fn squared_distance_transform<T: Real>(mask: &[bool], nx: usize, ny: usize, dx: T, dy: T) -> Result<Vec<T>> {
    if mask.len() != nx * ny {
        return Err(Error::ShapeMismatch(format!("{} cells for {nx}x{ny}", mask.len())));
    }
    if !mask.iter().any(|b| *b) {
        return Err(Error::EmptyMask);
    }

    // Column pass: squared vertical distance to the nearest true cell in the
    // same column, or infinity.
    let mut cols: Vec<T> = vec![T::infinity(); nx * ny];
    cols.par_chunks_mut(ny).enumerate().for_each(|(c, out)| {
        let mut last: Option<usize> = None;
        let mut steps = vec![usize::MAX; ny];
        for r in 0..ny {
            if mask[r * nx + c] {
                last = Some(r);
            }
            if let Some(l) = last {
                steps[r] = r - l;
            }
        }
        last = None;
        for r in (0..ny).rev() {
            if mask[r * nx + c] {
                last = Some(r);
            }
            if let Some(l) = last {
                steps[r] = steps[r].min(l - r);
            }
        }
        for r in 0..ny {
            if steps[r] != usize::MAX {
                let d = T::from(steps[r]).unwrap() * dy;
                out[r] = d * d;
            }
        }
    });

    // Row pass over the column results (stored column-major above).
    let mut out = vec![T::zero(); nx * ny];
    out.par_chunks_mut(nx).enumerate().for_each(|(r, row)| {
        let f: Vec<T> = (0..nx).map(|c| cols[c * ny + r]).collect();
        lower_envelope(&f, dx, row);
    });
    Ok(out)
}

/// One-dimensional squared distance transform of `f` with sample spacing `w`.
/// Infinite entries are skipped; at least one entry must be finite.
fn lower_envelope<T: Real>(f: &[T], w: T, out: &mut [T]) {
    let n = f.len();
    let pos = |q: usize| T::from(q).unwrap() * w;
    let mut v: Vec<usize> = Vec::with_capacity(n);
    let mut z: Vec<T> = Vec::with_capacity(n + 1);
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let pq = pos(q);
        loop {
            let Some(&p) = v.last() else {
                v.push(q);
                z.clear();
                z.push(T::neg_infinity());
                break;
            };
            let pp = pos(p);
            let s = ((f[q] + pq * pq) - (f[p] + pp * pp)) / (T::lit(2.0) * (pq - pp));
            if s <= *z.last().unwrap() {
                v.pop();
                z.pop();
                continue;
            }
            v.push(q);
            z.push(s);
            break;
        }
    }
    z.push(T::infinity());
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        let xq = pos(q);
        while z[k + 1] < xq {
            k += 1;
        }
        let d = xq - pos(v[k]);
        // Pick the exact minimum among envelope neighbours to avoid
        // breakpoint rounding.
        let mut best = d * d + f[v[k]];
        if k + 1 < v.len() {
            let d1 = xq - pos(v[k + 1]);
            best = best.min(d1 * d1 + f[v[k + 1]]);
        }
        *o = best;
    }
}

/// Euclidean distance from each pixel center to the nearest true pixel
/// center, in the units of `dx` and `dy`. Zero on true pixels.
pub fn distance_transform<T: Real>(mask: &[bool], nx: usize, ny: usize, dx: T, dy: T) -> Result<Vec<T>> {
    let mut d = squared_distance_transform(mask, nx, ny, dx, dy)?;
    d.iter_mut().for_each(|v| *v = v.sqrt());
    Ok(d)
}

/// Distance transform of a boolean grid using its pixel size.
pub fn distance_grid(mask: &BoolGrid) -> Result<RasterGrid<f64>> {
    let g = *mask.georef();
    let d = distance_transform(mask.values(), g.nx, g.ny, g.dx, g.dy)?;
    RasterGrid::new(g, d, None)
}
