//! Binary rasters over uniform planar grids: even-odd polygon fill, exact
//! Euclidean distance transform and marching-squares contour extraction.
//!
//! Raster cell `(i, j)` has center `origin + ((i + ½)·cell, (j + ½)·cell)`.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub nx: usize,
    pub ny: usize,
    /// Lower-left corner of cell (0, 0).
    pub origin: [f64; 2],
    pub cell: f64,
    pub data: Vec<bool>,
}

impl Raster {
    pub fn new(nx: usize, ny: usize, origin: [f64; 2], cell: f64) -> Self {
        Raster {
            nx,
            ny,
            origin,
            cell,
            data: vec![false; nx * ny],
        }
    }

    /// Raster covering `[lo, hi]` padded by `margin` on every side.
    pub fn covering(lo: [f64; 2], hi: [f64; 2], margin: f64, cell: f64) -> Self {
        let o = [lo[0] - margin, lo[1] - margin];
        let nx = ((hi[0] - lo[0] + 2.0 * margin) / cell).ceil() as usize + 1;
        let ny = ((hi[1] - lo[1] + 2.0 * margin) / cell).ceil() as usize + 1;
        Raster::new(nx, ny, o, cell)
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.cell,
            self.origin[1] + (j as f64 + 0.5) * self.cell,
        ]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|b| **b).count()
    }

    /// Sets every cell whose center lies inside `poly` (even-odd rule).
    pub fn fill_polygon(&mut self, poly: &[[f64; 2]]) {
        let n = poly.len();
        let mut xs = Vec::new();
        for j in 0..self.ny {
            let y = self.origin[1] + (j as f64 + 0.5) * self.cell;
            xs.clear();
            for k in 0..n {
                let a = poly[k];
                let b = poly[(k + 1) % n];
                if (a[1] <= y) != (b[1] <= y) {
                    let t = (y - a[1]) / (b[1] - a[1]);
                    xs.push(a[0] + t * (b[0] - a[0]));
                }
            }
            xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
            for pair in xs.chunks_exact(2) {
                // centers x_c with pair[0] < x_c <= pair[1]
                let i0 = ((pair[0] - self.origin[0]) / self.cell - 0.5).floor() as i64 + 1;
                let i1 = ((pair[1] - self.origin[0]) / self.cell - 0.5).floor() as i64;
                let i0 = i0.max(0);
                let i1 = i1.min(self.nx as i64 - 1);
                for i in i0..=i1 {
                    let id = self.idx(i as usize, j);
                    self.data[id] = true;
                }
            }
        }
    }

    /// Squared distance, in cell units, from each cell center to the nearest
    /// set cell center. `f64::INFINITY` where the raster is empty.
    pub fn distance_transform_sq(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx, self.ny);
        let mut g = vec![f64::INFINITY; nx * ny];
        for (k, &b) in self.data.iter().enumerate() {
            if b {
                g[k] = 0.0;
            }
        }
        let mut f = vec![0.0; nx.max(ny)];
        let mut d = vec![0.0; nx.max(ny)];
        let mut v = vec![0usize; nx.max(ny)];
        let mut z = vec![0.0; nx.max(ny) + 1];
        // columns
        for i in 0..nx {
            for j in 0..ny {
                f[j] = g[j * nx + i];
            }
            edt_1d(&f[..ny], &mut d[..ny], &mut v, &mut z);
            for j in 0..ny {
                g[j * nx + i] = d[j];
            }
        }
        // rows
        for j in 0..ny {
            f[..nx].copy_from_slice(&g[j * nx..(j + 1) * nx]);
            edt_1d(&f[..nx], &mut d[..nx], &mut v, &mut z);
            g[j * nx..(j + 1) * nx].copy_from_slice(&d[..nx]);
        }
        g
    }

    /// All cells within Euclidean distance `radius` (center to center) of a
    /// set cell.
    pub fn dilate(&self, radius: f64) -> Raster {
        let dt = self.distance_transform_sq();
        let r2 = (radius / self.cell).powi(2) * (1.0 + 1e-12);
        let mut out = Raster::new(self.nx, self.ny, self.origin, self.cell);
        for (k, v) in dt.iter().enumerate() {
            out.data[k] = *v <= r2;
        }
        out
    }

    /// Closed contours separating set from unset cell centers, with the set
    /// side on the left (outer boundaries counterclockwise, holes clockwise).
    /// Cells outside the raster count as unset. Diagonally touching set cells
    /// are joined.
    pub fn contours(&self) -> Vec<Vec<[f64; 2]>> {
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let val = |i: i64, j: i64| -> bool {
            i >= 0 && j >= 0 && i < nx && j < ny && self.data[(j * nx + i) as usize]
        };
        // edge keys in doubled lattice coordinates: the midpoint between two
        // adjacent cell centers
        let mut next: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
        for j in -1..ny {
            for i in -1..nx {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let vals: Vec<bool> = corners.iter().map(|&(a, b)| val(a, b)).collect();
                let inside = vals.iter().filter(|b| **b).count();
                if inside == 0 || inside == 4 {
                    continue;
                }
                // crossing edges in ccw order; in->out starts a segment,
                // out->in ends one
                let mut starts = Vec::with_capacity(2);
                let mut ends = Vec::with_capacity(2);
                for e in 0..4 {
                    let (a, b) = (corners[e], corners[(e + 1) % 4]);
                    let key = (a.0 + b.0 + 1, a.1 + b.1 + 1);
                    match (vals[e], vals[(e + 1) % 4]) {
                        (true, false) => starts.push((e, key)),
                        (false, true) => ends.push((e, key)),
                        _ => {}
                    }
                }
                for &(e, key) in &starts {
                    // pair with the next end in ccw order (joins diagonals)
                    let end = ends
                        .iter()
                        .min_by_key(|(f, _)| (f + 4 - e) % 4)
                        .map(|(_, k)| *k)
                        .unwrap();
                    next.insert(key, end);
                }
            }
        }
        let mut keys: Vec<(i64, i64)> = next.keys().copied().collect();
        keys.sort_unstable();
        let mut used: HashMap<(i64, i64), bool> = HashMap::with_capacity(keys.len());
        let mut out = Vec::new();
        for start in keys {
            if used.contains_key(&start) {
                continue;
            }
            let mut poly = Vec::new();
            let mut k = start;
            loop {
                used.insert(k, true);
                poly.push([
                    self.origin[0] + (k.0 as f64 / 2.0) * self.cell,
                    self.origin[1] + (k.1 as f64 / 2.0) * self.cell,
                ]);
                k = next[&k];
                if k == start {
                    break;
                }
            }
            out.push(poly);
        }
        out
    }
}

/// Signed area (positive for counterclockwise).
pub fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s / 2.0
}

// Felzenszwalb–Huttenlocher lower envelope of parabolas.
fn edt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k: usize = 0;
    let first = match f.iter().position(|x| x.is_finite()) {
        Some(p) => p,
        None => {
            d.iter_mut().for_each(|x| *x = f64::INFINITY);
            return;
        }
    };
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in (first + 1)..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                if k == 0 {
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
}
