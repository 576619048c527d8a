//! Box coverings of the set-valued map `F(x) = B_ε(f(x))`: images, ω-limits,
//! minimal invariant sets with seed certificates, attractor checks and the
//! dual map `F*(y) = f⁻¹(B_ε(y))`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, Point};
use crate::raster::{signed_area, Raster};
use crate::systems::{Scenario, Window};

pub const DEFAULT_BURN_IN: usize = 50;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_N_SEEDS: usize = 20;
const ATTRACTOR_MAX_ITER: usize = 500;

/// Uniform planar grid over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub window: Window,
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(window: Window, cell: f64) -> Result<Self> {
        if window.dim() != 2 {
            return Err(Error::InvalidInput("box coverings are planar".into()));
        }
        if !(cell > 0.0) || !cell.is_finite() {
            return Err(Error::InvalidInput(format!("bad cell size {cell}")));
        }
        let mut n = [0usize; 2];
        for a in 0..2 {
            let len = window.hi[a] - window.lo[a];
            let k = (len / cell).round();
            if k < 1.0 || (k * cell - len).abs() > 1e-12 * len.max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "window edge {len} is not a multiple of cell size {cell}"
                )));
            }
            n[a] = k as usize;
        }
        Ok(Grid {
            window,
            cell,
            nx: n[0],
            ny: n[1],
        })
    }

    pub fn lo(&self) -> [f64; 2] {
        [self.window.lo[0], self.window.lo[1]]
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        let lo = self.lo();
        [
            lo[0] + (i as f64 + 0.5) * self.cell,
            lo[1] + (j as f64 + 0.5) * self.cell,
        ]
    }

    /// Cell containing `p` (upper cell on shared edges, clamped at the far
    /// window edge).
    pub fn cell_of(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        let lo = self.lo();
        let fi = ((p[0] - lo[0]) / self.cell).floor();
        let fj = ((p[1] - lo[1]) / self.cell).floor();
        if !(fi >= 0.0 && fj >= 0.0 && fi <= self.nx as f64 && fj <= self.ny as f64) {
            return None;
        }
        Some(((fi as usize).min(self.nx - 1), (fj as usize).min(self.ny - 1)))
    }

    fn raster(&self) -> Raster {
        Raster::new(self.nx, self.ny, self.lo(), self.cell)
    }
}

/// A set of grid cells, stored as a bitmap over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    pub grid: Grid,
    bits: Vec<bool>,
}

impl BoxSet {
    pub fn empty(grid: &Grid) -> Self {
        BoxSet {
            bits: vec![false; grid.nx * grid.ny],
            grid: grid.clone(),
        }
    }

    pub fn from_cells(grid: &Grid, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut s = BoxSet::empty(grid);
        for (i, j) in cells {
            if i >= grid.nx || j >= grid.ny {
                return Err(Error::InvalidInput(format!("cell ({i},{j}) outside grid")));
            }
            s.insert(i, j);
        }
        Ok(s)
    }

    /// The single cell containing `p`.
    pub fn from_point(grid: &Grid, p: [f64; 2]) -> Result<Self> {
        let (i, j) = grid
            .cell_of(p)
            .ok_or_else(|| Error::InvalidInput(format!("point {p:?} outside window")))?;
        BoxSet::from_cells(grid, [(i, j)])
    }

    /// Cells whose center lies in the closed disk.
    pub fn from_disk(grid: &Grid, center: [f64; 2], radius: f64) -> Self {
        let mut s = BoxSet::empty(grid);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let c = grid.center(i, j);
                if (c[0] - center[0]).hypot(c[1] - center[1]) <= radius {
                    s.insert(i, j);
                }
            }
        }
        s
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.grid.nx && j < self.grid.ny && self.bits[j * self.grid.nx + i]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[j * self.grid.nx + i] = true;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// Cells in row-major order (by `iy`, then `ix`).
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nx = self.grid.nx;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(k, _)| (k % nx, k / nx))
    }

    pub fn centers(&self) -> Vec<[f64; 2]> {
        self.cells().map(|(i, j)| self.grid.center(i, j)).collect()
    }

    pub fn is_subset(&self, other: &BoxSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    pub fn area(&self) -> f64 {
        self.len() as f64 * self.grid.cell * self.grid.cell
    }

    pub fn centroid(&self) -> Option<[f64; 2]> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        let mut c = [0.0; 2];
        for p in self.centers() {
            c[0] += p[0];
            c[1] += p[1];
        }
        Some([c[0] / n as f64, c[1] / n as f64])
    }

    fn to_raster(&self) -> Raster {
        let mut r = self.grid.raster();
        r.data.copy_from_slice(&self.bits);
        r
    }

    /// Cells within Chebyshev distance one of the set.
    pub fn dilate_ring(&self) -> BoxSet {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut out = BoxSet::empty(&self.grid);
        for (i, j) in self.cells() {
            for jj in j.saturating_sub(1)..=(j + 1).min(ny - 1) {
                for ii in i.saturating_sub(1)..=(i + 1).min(nx - 1) {
                    out.insert(ii, jj);
                }
            }
        }
        out
    }

    /// Cells whose center lies within `radius` of a cell center of the set.
    pub fn inflate(&self, radius: f64) -> BoxSet {
        let r = self.to_raster().dilate(radius);
        BoxSet {
            grid: self.grid.clone(),
            bits: r.data,
        }
    }

    /// Marching-squares contours of the union of cells (outer boundaries
    /// counterclockwise, holes clockwise).
    pub fn boundary_contours(&self) -> Vec<Vec<[f64; 2]>> {
        // pad by one cell so contours close inside the raster
        let r = self.to_raster();
        let mut padded = Raster::new(
            r.nx + 2,
            r.ny + 2,
            [r.origin[0] - r.cell, r.origin[1] - r.cell],
            r.cell,
        );
        for j in 0..r.ny {
            for i in 0..r.nx {
                if r.get(i, j) {
                    let k = padded.idx(i + 1, j + 1);
                    padded.data[k] = true;
                }
            }
        }
        padded.contours()
    }

    /// The contour enclosing the largest area.
    pub fn outer_boundary(&self) -> Result<Vec<[f64; 2]>> {
        self.boundary_contours()
            .into_iter()
            .max_by(|a, b| signed_area(a).total_cmp(&signed_area(b)))
            .ok_or(Error::EmptySet)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "ix,iy,cx,cy,h")?;
        for (i, j) in self.cells() {
            let c = self.grid.center(i, j);
            writeln!(w, "{i},{j},{},{},{}", c[0], c[1], self.grid.cell)?;
        }
        Ok(())
    }
}

/// Whether each set lies within one cell ring of the other.
pub fn within_one_ring(a: &BoxSet, b: &BoxSet) -> bool {
    a.is_subset(&b.dilate_ring()) && b.is_subset(&a.dilate_ring())
}

fn operator_norm_2x2(m: &[f64]) -> f64 {
    let t = m.iter().map(|v| v * v).sum::<f64>();
    let det = m[0] * m[3] - m[1] * m[2];
    let disc = (t * t - 4.0 * det * det).max(0.0).sqrt();
    ((t + disc) / 2.0).sqrt()
}

struct Samples {
    y: Vec<[f64; 2]>,
    radius: Vec<f64>,
}

/// Mapped samples (corners and centers of every cell) with their ball radii.
fn mapped_samples(set: &BoxSet, s: &Scenario) -> Result<Samples> {
    let g = &set.grid;
    let h = g.cell;
    let lo = g.lo();
    let (mut i0, mut i1, mut j0, mut j1) = (usize::MAX, 0, usize::MAX, 0);
    for (i, j) in set.cells() {
        i0 = i0.min(i);
        i1 = i1.max(i);
        j0 = j0.min(j);
        j1 = j1.max(j);
    }
    if i0 == usize::MAX {
        return Err(Error::EmptySet);
    }
    // doubled lattice: corners at even, centers at odd offsets
    let w = 2 * (i1 - i0 + 1) + 1;
    let ht = 2 * (j1 - j0 + 1) + 1;
    let mut jnorm = vec![f64::NAN; w * ht];
    let mut image = vec![[0.0; 2]; w * ht];
    let mut pad = vec![-1.0f64; w * ht];
    let mut jac = [0.0; 4];
    let mut fx = [0.0; 2];
    let half_diag = h * std::f64::consts::SQRT_2 / 2.0;
    for (i, j) in set.cells() {
        let (bi, bj) = (2 * (i - i0), 2 * (j - j0));
        let keys = [
            (bi, bj),
            (bi + 2, bj),
            (bi, bj + 2),
            (bi + 2, bj + 2),
            (bi + 1, bj + 1),
        ];
        let mut l_local: f64 = 0.0;
        for &(a, b) in &keys {
            let k = b * w + a;
            if jnorm[k].is_nan() {
                let x = [
                    lo[0] + ((2 * i0 + a) as f64) * h / 2.0,
                    lo[1] + ((2 * j0 + b) as f64) * h / 2.0,
                ];
                s.jacobian_into(&x, &mut jac)?;
                s.forward_into(&x, &mut fx)?;
                jnorm[k] = operator_norm_2x2(&jac);
                image[k] = fx;
            }
            l_local = l_local.max(jnorm[k]);
        }
        let p = l_local * half_diag;
        for &(a, b) in &keys {
            let k = b * w + a;
            pad[k] = pad[k].max(p);
        }
    }
    let mut out = Samples {
        y: Vec::new(),
        radius: Vec::new(),
    };
    for k in 0..pad.len() {
        if pad[k] >= 0.0 {
            out.y.push(image[k]);
            out.radius.push(s.epsilon + pad[k]);
        }
    }
    Ok(out)
}

fn check_escape(g: &Grid, y: [f64; 2], r: f64) -> Result<()> {
    let lo = g.lo();
    let hi = [g.window.hi[0], g.window.hi[1]];
    for a in 0..2 {
        if y[a] - r < lo[a] + g.cell || y[a] + r > hi[a] - g.cell {
            return Err(Error::WindowEscape);
        }
    }
    Ok(())
}

/// Cells whose center lies within `radius[k]` of `y[k]` for some `k`.
///
/// Samples are bucketed on the grid; a distance transform of the bucket
/// occupancy decides all cells except a thin band, which is scanned exactly.
fn union_of_balls(g: &Grid, samples: &Samples) -> BoxSet {
    let h = g.cell;
    let lo = g.lo();
    let r_max = samples.radius.iter().cloned().fold(0.0, f64::max);
    let r_min = samples.radius.iter().cloned().fold(f64::INFINITY, f64::min);
    let bucket_of = |y: [f64; 2]| -> (i64, i64) {
        (
            ((y[0] - lo[0]) / h).floor() as i64,
            ((y[1] - lo[1]) / h).floor() as i64,
        )
    };
    let (mut bi0, mut bi1, mut bj0, mut bj1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for &y in &samples.y {
        let (i, j) = bucket_of(y);
        bi0 = bi0.min(i);
        bi1 = bi1.max(i);
        bj0 = bj0.min(j);
        bj1 = bj1.max(j);
    }
    let reach = (r_max / h).ceil() as i64 + 1;
    let ri0 = (bi0 - reach).max(0);
    let ri1 = (bi1 + reach).min(g.nx as i64 - 1);
    let rj0 = (bj0 - reach).max(0);
    let rj1 = (bj1 + reach).min(g.ny as i64 - 1);
    let mut out = BoxSet::empty(g);
    if ri0 > ri1 || rj0 > rj1 {
        return out;
    }
    let w = (ri1 - ri0 + 1) as usize;
    let ht = (rj1 - rj0 + 1) as usize;

    // CSR buckets over the region
    let mut starts = vec![0usize; w * ht + 1];
    let mut slot = Vec::with_capacity(samples.y.len());
    for &y in &samples.y {
        let (i, j) = bucket_of(y);
        let (li, lj) = ((i - ri0) as usize, (j - rj0) as usize);
        let b = lj * w + li;
        starts[b + 1] += 1;
        slot.push(b);
    }
    for b in 1..starts.len() {
        starts[b] += starts[b - 1];
    }
    let mut fill = starts.clone();
    let mut items = vec![0usize; samples.y.len()];
    for (k, &b) in slot.iter().enumerate() {
        items[fill[b]] = k;
        fill[b] += 1;
    }

    let mut occ = Raster::new(w, ht, [lo[0] + ri0 as f64 * h, lo[1] + rj0 as f64 * h], h);
    for b in 0..w * ht {
        occ.data[b] = starts[b + 1] > starts[b];
    }
    let d2 = occ.distance_transform_sq();

    let surely_in = r_min / h;
    let surely_out = r_max / h;
    let outer = r_max / h + FRAC_1_SQRT_2;
    for lj in 0..ht {
        for li in 0..w {
            let d = d2[lj * w + li].sqrt();
            let (gi, gj) = ((ri0 + li as i64) as usize, (rj0 + lj as i64) as usize);
            if d + FRAC_1_SQRT_2 <= surely_in {
                out.insert(gi, gj);
                continue;
            }
            if d - FRAC_1_SQRT_2 > surely_out {
                continue;
            }
            let c = g.center(gi, gj);
            let kmax = outer.floor() as i64;
            let mut hit = false;
            'rows: for dy in -kmax..=kmax {
                let bj = lj as i64 + dy;
                if bj < 0 || bj >= ht as i64 {
                    continue;
                }
                let rem = outer * outer - (dy * dy) as f64;
                if rem < 0.0 {
                    continue;
                }
                let xo = rem.sqrt().floor() as i64;
                let inner = d * d - (dy * dy) as f64;
                let xi = if inner > 0.0 {
                    (inner.sqrt().ceil() as i64 - 1).max(0)
                } else {
                    0
                };
                let ranges: [(i64, i64); 2] = if xi == 0 {
                    [(-xo, xo), (1, 0)]
                } else {
                    [(xi, xo), (-xo, -xi)]
                };
                for &(a, b) in &ranges {
                    for dx in a..=b {
                        let bi = li as i64 + dx;
                        if bi < 0 || bi >= w as i64 {
                            continue;
                        }
                        let bucket = bj as usize * w + bi as usize;
                        for &k in &items[starts[bucket]..starts[bucket + 1]] {
                            let y = samples.y[k];
                            if (c[0] - y[0]).hypot(c[1] - y[1]) <= samples.radius[k] {
                                hit = true;
                                break 'rows;
                            }
                        }
                    }
                }
            }
            if hit {
                out.insert(gi, gj);
            }
        }
    }
    out
}

/// Outer box covering of `F(S)`: every cell whose center lies within
/// `ε + pad` of the image of a corner or center of a cell of `S`, where
/// `pad = L_local·h·√2/2` and `L_local` is the largest Jacobian operator norm
/// over that cell's samples.
pub fn image_boxset(set: &BoxSet, s: &Scenario) -> Result<BoxSet> {
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch(2, s.dim()));
    }
    let samples = mapped_samples(set, s)?;
    for (y, r) in samples.y.iter().zip(&samples.radius) {
        check_escape(&set.grid, *y, *r)?;
    }
    Ok(union_of_balls(&set.grid, &samples))
}

/// Iterates the image map from the seed's cell until the cell set repeats
/// exactly, after a burn-in of `burn_in` iterations.
pub fn omega_limit_with(
    seed: &Point,
    s: &Scenario,
    grid: &Grid,
    burn_in: usize,
    max_iter: usize,
) -> Result<BoxSet> {
    if burn_in >= max_iter {
        return Err(Error::InvalidInput("burn-in must be below max_iter".into()));
    }
    let mut cur = BoxSet::from_point(grid, seed.planar())?;
    for _ in 0..max_iter {
        let next = image_boxset(&cur, s)?;
        // a repeated set stays fixed, so it is also the first repeat after
        // any burn-in
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::NoStabilization(max_iter))
}

pub fn omega_limit(seed: &Point, s: &Scenario, grid: &Grid) -> Result<BoxSet> {
    omega_limit_with(seed, s, grid, DEFAULT_BURN_IN, DEFAULT_MAX_ITER)
}

/// Seed-sampling evidence that a covering is minimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub seeds: Vec<[f64; 2]>,
    pub defects: Vec<f64>,
    pub max_defect: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Stratified pick of `n` cells from the sorted cell list, one random cell
/// per stratum.
fn stratified_seeds(set: &BoxSet, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let cells: Vec<(usize, usize)> = set.cells().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = cells.len();
    (0..n)
        .filter_map(|k| {
            let a = k * m / n;
            let b = ((k + 1) * m / n).max(a + 1).min(m);
            (a < m).then(|| {
                let (i, j) = cells[rng.gen_range(a..b)];
                set.grid.center(i, j)
            })
        })
        .collect()
}

/// ω-limit from the window center plus a seed certificate; never fails on a
/// certificate miss (see [`minimal_invariant_set`]).
pub fn minimal_invariant_set_report(
    s: &Scenario,
    grid: &Grid,
    n_seeds: usize,
    seed: u64,
) -> Result<(BoxSet, MinimalityCertificate)> {
    if n_seeds < 5 {
        return Err(Error::InvalidInput("at least 5 certificate seeds required".into()));
    }
    let c = grid.window.center();
    let m = omega_limit(&Point::xy(c[0], c[1]), s, grid)?;
    let centers = m.centers();
    let seeds = stratified_seeds(&m, n_seeds, seed);
    let mut defects = Vec::with_capacity(seeds.len());
    for p in &seeds {
        let w = omega_limit(&Point::xy(p[0], p[1]), s, grid)?;
        defects.push(hausdorff_distance(&w.centers(), &centers)?);
    }
    let max_defect = defects.iter().cloned().fold(0.0, f64::max);
    let threshold = 2.0 * grid.cell;
    let cert = MinimalityCertificate {
        seeds,
        defects,
        max_defect,
        threshold,
        passed: max_defect <= threshold,
    };
    Ok((m, cert))
}

/// Minimal invariant set covering with a passing certificate.
pub fn minimal_invariant_set(
    s: &Scenario,
    grid: &Grid,
    n_seeds: usize,
    seed: u64,
) -> Result<(BoxSet, MinimalityCertificate)> {
    let (m, cert) = minimal_invariant_set_report(s, grid, n_seeds, seed)?;
    if !cert.passed {
        return Err(Error::CertificateFailed {
            max_defect: cert.max_defect,
            threshold: cert.threshold,
        });
    }
    Ok((m, cert))
}

/// Outer covering of `F*(S) = ⋃ f⁻¹(B_{ε+pad}(y))` over the corners and
/// centers `y` of the cells of `S`, with `pad = h·√2/2`. Each preimage ball
/// is the region bounded by the inverse image of its boundary circle.
pub fn dual_image(set: &BoxSet, s: &Scenario) -> Result<BoxSet> {
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch(2, s.dim()));
    }
    let g = &set.grid;
    let h = g.cell;
    let lo = g.lo();
    let radius = s.epsilon + h * std::f64::consts::SQRT_2 / 2.0;
    let mut points: Vec<[f64; 2]> = Vec::new();
    for (i, j) in set.cells() {
        for (a, b) in [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)] {
            points.push([
                lo[0] + (2 * i + a) as f64 * h / 2.0,
                lo[1] + (2 * j + b) as f64 * h / 2.0,
            ]);
        }
    }
    points.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    points.dedup();
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = BoxSet::empty(g);
    let mut x = [0.0; 2];
    let mut jac = [0.0; 4];
    for y in points {
        // boundary points spaced below h after the inverse map
        s.inverse_into(&y, &mut x)?;
        s.jacobian_into(&x, &mut jac)?;
        let det = (jac[0] * jac[3] - jac[1] * jac[2]).abs();
        let inv_norm = operator_norm_2x2(&jac) / det.max(1e-300);
        let count = ((2.0 * std::f64::consts::PI * radius * inv_norm / (0.5 * h)).ceil() as usize).max(16);
        let mut poly = Vec::with_capacity(count);
        for k in 0..count {
            let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            let q = [y[0] + radius * t.cos(), y[1] + radius * t.sin()];
            s.inverse_into(&q, &mut x)?;
            poly.push(x);
        }
        let (mut pl, mut ph) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &poly {
            for a in 0..2 {
                pl[a] = pl[a].min(p[a]);
                ph[a] = ph[a].max(p[a]);
            }
        }
        let mid = [(pl[0] + ph[0]) / 2.0, (pl[1] + ph[1]) / 2.0];
        let half = ((ph[0] - pl[0]).max(ph[1] - pl[1])) / 2.0;
        check_escape(g, mid, half)?;
        let (i0, j0) = g.cell_of(pl).ok_or(Error::WindowEscape)?;
        let (i1, j1) = g.cell_of(ph).ok_or(Error::WindowEscape)?;
        let mut local = Raster::new(
            i1 - i0 + 1,
            j1 - j0 + 1,
            [lo[0] + i0 as f64 * h, lo[1] + j0 as f64 * h],
            h,
        );
        local.fill_polygon(&poly);
        for lj in 0..local.ny {
            for li in 0..local.nx {
                if local.get(li, lj) {
                    out.insert(i0 + li, j0 + lj);
                }
            }
        }
        // the preimage of the center always belongs to its ball
        s.inverse_into(&y, &mut x)?;
        if let Some((i, j)) = g.cell_of(x) {
            out.insert(i, j);
        }
    }
    Ok(out)
}

/// Outcome of [`is_attractor`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorReport {
    pub attracting: bool,
    /// Directed distance `d(F^k(V), M)` for `k = 0, 1, ...`.
    pub trace: Vec<f64>,
}

/// Inflates `M` by `eta` and follows `d(F^k(V), M)` until it drops below
/// `2h`.
pub fn is_attractor(m: &BoxSet, s: &Scenario, eta: f64) -> Result<AttractorReport> {
    if !(eta > 0.0) {
        return Err(Error::InvalidInput("eta must be positive".into()));
    }
    let fm = image_boxset(m, s)?;
    if !within_one_ring(&fm, m) {
        return Err(Error::NotInvariant);
    }
    let h = m.grid.cell;
    // distance of every cell center to the nearest center of M
    let d2 = m.to_raster().distance_transform_sq();
    let directed = |v: &BoxSet| -> f64 {
        let nx = v.grid.nx;
        v.cells()
            .map(|(i, j)| d2[j * nx + i])
            .fold(0.0f64, f64::max)
            .sqrt()
            * h
    };
    let mut v = m.inflate(eta);
    let mut trace = vec![directed(&v)];
    let threshold = 2.0 * h;
    let burn_in = 1;
    let mut attracting = false;
    for _ in 0..ATTRACTOR_MAX_ITER {
        if *trace.last().unwrap() < threshold {
            attracting = true;
            break;
        }
        v = image_boxset(&v, s)?;
        trace.push(directed(&v));
    }
    let monotone = trace.windows(2).skip(burn_in).all(|w| w[1] <= w[0]);
    Ok(AttractorReport {
        attracting: attracting && monotone,
        trace,
    })
}
