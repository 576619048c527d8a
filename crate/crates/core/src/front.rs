//! Discrete Legendrian loops in the planar unit tangent bundle: lifts of
//! closed curves, propagation under the boundary map, wave-front projection,
//! singularity detection, relaxation to invariant loops, and a raster oracle
//! for ε-neighborhood boundaries.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::boundary::boundary_map_planar;
use crate::error::{Error, Result};
use crate::geometry::{t1_hausdorff_distance, wrap_angle, Direction, Point, TangentPoint};
use crate::raster::{signed_area, Raster};
use crate::systems::Scenario;

pub const MIN_CURVE_VERTICES: usize = 16;
/// Largest admissible contact residual of a Legendrian loop.
pub const MAX_CONTACT_RESIDUAL: f64 = 0.1;
pub const DEFAULT_TAU: f64 = 0.05;
/// Resampling refuses to produce more vertices than this.
pub const MAX_LOOP_VERTICES: usize = 500_000;
const ZERO_EDGE: f64 = 1e-14;

/// A closed planar polyline (vertex 0 is not repeated at the end).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    pub vertices: Vec<[f64; 2]>,
    pub ccw: bool,
}

impl ClosedCurve {
    /// Validated curve: enough vertices, distinct neighbors, simple.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let c = ClosedCurve::unchecked(vertices);
        let n = c.vertices.len();
        if n < MIN_CURVE_VERTICES {
            return Err(Error::TooFewVertices(n, MIN_CURVE_VERTICES));
        }
        if c.vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        for i in 0..n {
            let (a, b) = (c.vertices[i], c.vertices[(i + 1) % n]);
            if (a[0] - b[0]).hypot(a[1] - b[1]) < ZERO_EDGE {
                return Err(Error::ZeroEdge(i, (i + 1) % n));
            }
        }
        if !c.is_simple() {
            return Err(Error::SelfIntersecting);
        }
        Ok(c)
    }

    /// No validation; used for fronts, which may be singular.
    pub fn unchecked(vertices: Vec<[f64; 2]>) -> Self {
        let ccw = signed_area(&vertices) > 0.0;
        ClosedCurve { vertices, ccw }
    }

    pub fn circle(center: [f64; 2], radius: f64, n: usize) -> Result<Self> {
        ClosedCurve::new(
            (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
                })
                .collect(),
        )
    }

    pub fn ellipse(center: [f64; 2], a: f64, b: f64, n: usize) -> Result<Self> {
        ClosedCurve::new(
            (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [center[0] + a * t.cos(), center[1] + b * t.sin()]
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .sum()
    }

    /// Segment sweep over a uniform bucket grid.
    pub fn is_simple(&self) -> bool {
        polyline_is_simple(&self.vertices)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,x,y")?;
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(w, "{i},{},{}", v[0], v[1])?;
        }
        Ok(())
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn polyline_is_simple(v: &[[f64; 2]]) -> bool {
    let n = v.len();
    if n < 3 {
        return false;
    }
    let seg = |i: usize| (v[i], v[(i + 1) % n]);
    // neighbors may only share their common vertex
    for i in 0..n {
        let (a, b) = seg(i);
        let c = v[(i + 2) % n];
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - b[0], c[1] - b[1]];
        let cross = e1[0] * e2[1] - e1[1] * e2[0];
        let dotp = e1[0] * e2[0] + e1[1] * e2[1];
        let scale = (e1[0].hypot(e1[1]) * e2[0].hypot(e2[1])).max(f64::MIN_POSITIVE);
        if cross.abs() <= 1e-14 * scale && dotp < 0.0 {
            return false;
        }
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    let mut total = 0.0;
    for i in 0..n {
        let (a, b) = seg(i);
        total += (a[0] - b[0]).hypot(a[1] - b[1]);
        for k in 0..2 {
            lo[k] = lo[k].min(a[k]);
            hi[k] = hi[k].max(a[k]);
        }
    }
    let ext = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let cell = (2.0 * total / n as f64).max(ext / 2048.0).max(1e-12);
    let nx = ((hi[0] - lo[0]) / cell) as usize + 1;
    let ny = ((hi[1] - lo[1]) / cell) as usize + 1;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); nx * ny];
    let bucket = |p: f64, o: f64, m: usize| (((p - o) / cell) as usize).min(m - 1);
    for i in 0..n {
        let (a, b) = seg(i);
        let (i0, i1) = (bucket(a[0].min(b[0]), lo[0], nx), bucket(a[0].max(b[0]), lo[0], nx));
        let (j0, j1) = (bucket(a[1].min(b[1]), lo[1], ny), bucket(a[1].max(b[1]), lo[1], ny));
        for j in j0..=j1 {
            for ii in i0..=i1 {
                buckets[j * nx + ii].push(i);
            }
        }
    }
    for b in &buckets {
        for (x, &i) in b.iter().enumerate() {
            for &j in &b[x + 1..] {
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if adjacent || i == j {
                    continue;
                }
                let (p1, p2) = seg(i);
                let (q1, q2) = seg(j);
                if segments_intersect(p1, p2, q1, q2) {
                    return false;
                }
            }
        }
    }
    true
}

/// A discretized Legendrian curve: base points with unit outward normals.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendrianLoop {
    pub base: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
    pub h_front: f64,
}

impl LegendrianLoop {
    /// Validated loop: normals renormalized, contact residual at most
    /// [`MAX_CONTACT_RESIDUAL`].
    pub fn new(base: Vec<[f64; 2]>, normals: Vec<[f64; 2]>, h_front: f64) -> Result<Self> {
        if base.len() != normals.len() {
            return Err(Error::InvalidInput("base and normal counts differ".into()));
        }
        if !(h_front > 0.0) {
            return Err(Error::InvalidInput(format!("h_front must be positive, got {h_front}")));
        }
        let mut normals = normals;
        for n in normals.iter_mut() {
            let d = crate::geometry::normalize(n)?;
            *n = d.planar();
        }
        let l = LegendrianLoop {
            base,
            normals,
            h_front,
        };
        let r = l.max_contact_residual()?;
        if r > MAX_CONTACT_RESIDUAL {
            return Err(Error::NonLegendrian(r));
        }
        Ok(l)
    }

    fn unchecked(base: Vec<[f64; 2]>, normals: Vec<[f64; 2]>, h_front: f64) -> Self {
        LegendrianLoop {
            base,
            normals,
            h_front,
        }
    }

    pub fn from_points(points: &[TangentPoint], h_front: f64) -> Result<Self> {
        let mut base = Vec::with_capacity(points.len());
        let mut normals = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != 2 {
                return Err(Error::DimensionMismatch(2, p.dim()));
            }
            base.push(p.base.planar());
            normals.push(p.normal.planar());
        }
        LegendrianLoop::new(base, normals, h_front)
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn points(&self) -> Vec<TangentPoint> {
        self.base
            .iter()
            .zip(&self.normals)
            .map(|(x, n)| TangentPoint {
                base: Point::xy(x[0], x[1]),
                normal: Direction::from_angle(n[1].atan2(n[0])),
            })
            .collect()
    }

    /// Per-edge `⟨n_i, x_{i+1} − x_i⟩ / ‖x_{i+1} − x_i‖`.
    pub fn contact_residuals(&self) -> Result<Vec<f64>> {
        let n = self.base.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n, 3));
        }
        (0..n)
            .map(|i| {
                let (a, b) = (self.base[i], self.base[(i + 1) % n]);
                let e = [b[0] - a[0], b[1] - a[1]];
                let len = e[0].hypot(e[1]);
                if len < ZERO_EDGE {
                    return Err(Error::ZeroEdge(i, (i + 1) % n));
                }
                let nn = self.normals[i];
                Ok((nn[0] * e[0] + nn[1] * e[1]) / len)
            })
            .collect()
    }

    pub fn max_contact_residual(&self) -> Result<f64> {
        Ok(self
            .contact_residuals()?
            .into_iter()
            .fold(0.0, |m, r| m.max(r.abs())))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,x,y,nx,ny")?;
        for (i, (x, n)) in self.base.iter().zip(&self.normals).enumerate() {
            writeln!(w, "{i},{},{},{},{}", x[0], x[1], n[0], n[1])?;
        }
        Ok(())
    }
}

/// Projection-singularity flags of a loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub flagged_indices: Vec<usize>,
    pub min_projection_speed: f64,
    pub tau: f64,
}

impl SingularityReport {
    pub fn is_singular(&self) -> bool {
        !self.flagged_indices.is_empty()
    }
}

/// Arc position where the polyline crosses the `+x` ray from its area
/// centroid farthest out; `0` if there is no crossing.
fn anchor_arc_position(v: &[[f64; 2]], cum: &[f64]) -> f64 {
    let n = v.len();
    let area = signed_area(v);
    let c = if area.abs() > 1e-300 {
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let cr = a[0] * b[1] - b[0] * a[1];
            cx += (a[0] + b[0]) * cr;
            cy += (a[1] + b[1]) * cr;
        }
        [cx / (6.0 * area), cy / (6.0 * area)]
    } else {
        let s = v.iter().fold([0.0, 0.0], |s, p| [s[0] + p[0], s[1] + p[1]]);
        [s[0] / n as f64, s[1] / n as f64]
    };
    let mut best: Option<(f64, f64)> = None;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let (da, db) = (a[1] - c[1], b[1] - c[1]);
        // half-open crossing rule so a vertex on the ray counts once
        if (da <= 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0) {
            let t = da / (da - db);
            let x = a[0] + t * (b[0] - a[0]);
            if x > c[0] && best.map_or(true, |(bx, _)| x > bx) {
                best = Some((x, cum[i] + t * (cum[i + 1] - cum[i])));
            }
        }
    }
    best.map_or(0.0, |(_, s)| s)
}

/// Equal-arc-length resampling of a closed polyline into
/// `max(16, round(L/h))` vertices, anchored at a geometric point of the
/// curve so that the discretization depends on the curve only. Positions are
/// interpolated linearly, or by cubic Hermite segments with Catmull-Rom
/// tangents when `smooth`; normals, if given, by angle.
fn resample(
    v: &[[f64; 2]],
    normals: Option<&[[f64; 2]]>,
    h: f64,
    smooth: bool,
) -> Result<(Vec<[f64; 2]>, Vec<[f64; 2]>)> {
    let n = v.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n, 3));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("h_front must be positive, got {h}")));
    }
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        cum.push(cum[i] + (a[0] - b[0]).hypot(a[1] - b[1]));
    }
    let total = cum[n];
    if !(total > ZERO_EDGE) || !total.is_finite() {
        return Err(Error::ZeroEdge(0, 1));
    }
    let count = ((total / h).round() as usize).max(MIN_CURVE_VERTICES);
    if count > MAX_LOOP_VERTICES {
        return Err(Error::InvalidInput(format!(
            "resampling would need {count} vertices (limit {MAX_LOOP_VERTICES})"
        )));
    }
    let s0 = anchor_arc_position(v, &cum);
    let step = total / count as f64;
    let tangents: Vec<[f64; 2]> = if smooth {
        (0..n)
            .map(|i| {
                let (p, q) = (v[(i + n - 1) % n], v[(i + 1) % n]);
                let span = (cum[i + 1] - cum[i]) + if i == 0 { cum[n] - cum[n - 1] } else { cum[i] - cum[i - 1] };
                [(q[0] - p[0]) / span, (q[1] - p[1]) / span]
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut out_v = Vec::with_capacity(count);
    let mut out_n = Vec::with_capacity(if normals.is_some() { count } else { 0 });
    for k in 0..count {
        let mut s = s0 + k as f64 * step;
        if s >= total {
            s -= total;
        }
        // segment i with cum[i] <= s < cum[i+1]
        let i = match cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(n - 1),
            Err(i) => i - 1,
        };
        let len = cum[i + 1] - cum[i];
        let t = if len > 0.0 { (s - cum[i]) / len } else { 0.0 };
        let (a, b) = (v[i], v[(i + 1) % n]);
        if smooth {
            let (ma, mb) = (tangents[i], tangents[(i + 1) % n]);
            let (t2, t3) = (t * t, t * t * t);
            let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
            let h10 = t3 - 2.0 * t2 + t;
            let h01 = -2.0 * t3 + 3.0 * t2;
            let h11 = t3 - t2;
            out_v.push([
                h00 * a[0] + h10 * len * ma[0] + h01 * b[0] + h11 * len * mb[0],
                h00 * a[1] + h10 * len * ma[1] + h01 * b[1] + h11 * len * mb[1],
            ]);
        } else {
            out_v.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
        if let Some(ns) = normals {
            let (na, nb) = (ns[i], ns[(i + 1) % n]);
            let ta = na[1].atan2(na[0]);
            let th = ta + t * wrap_angle(nb[1].atan2(nb[0]) - ta);
            out_n.push([th.cos(), th.sin()]);
        }
    }
    Ok((out_v, out_n))
}

/// Resamples `c` to edge length `h_front` (smooth interpolation through the
/// input vertices) and attaches outward normals (the central-difference
/// tangent rotated by −90°).
pub fn lift_closed_curve(c: &ClosedCurve, h_front: f64) -> Result<LegendrianLoop> {
    if c.vertices.len() < MIN_CURVE_VERTICES {
        return Err(Error::TooFewVertices(c.vertices.len(), MIN_CURVE_VERTICES));
    }
    if !c.is_simple() {
        return Err(Error::SelfIntersecting);
    }
    if !c.ccw {
        return Err(Error::InvalidInput("curve must be counterclockwise".into()));
    }
    let (v, _) = resample(&c.vertices, None, h_front, true)?;
    let n = v.len();
    let normals = (0..n)
        .map(|i| {
            let (a, b) = (v[(i + n - 1) % n], v[(i + 1) % n]);
            crate::geometry::normalize(&[b[1] - a[1], -(b[0] - a[0])]).map(|d| d.planar())
        })
        .collect::<Result<Vec<_>>>()?;
    LegendrianLoop::new(v, normals, h_front)
}

/// Equal-arc-length resampling of a loop, normals carried by angle.
pub fn resample_loop(l: &LegendrianLoop, h_front: f64) -> Result<LegendrianLoop> {
    let (v, n) = resample(&l.base, Some(&l.normals), h_front, false)?;
    Ok(LegendrianLoop::unchecked(v, n, h_front))
}

/// Pointwise boundary map, no resampling.
pub fn apply_boundary_map(l: &LegendrianLoop, s: &Scenario) -> Result<LegendrianLoop> {
    if s.dim() != 2 {
        return Err(Error::DimensionMismatch(2, s.dim()));
    }
    let mut base = Vec::with_capacity(l.len());
    let mut normals = Vec::with_capacity(l.len());
    for (x, n) in l.base.iter().zip(&l.normals) {
        let (y, w) = boundary_map_planar(*x, *n, s)?;
        base.push(y);
        normals.push(w);
    }
    Ok(LegendrianLoop::unchecked(base, normals, l.h_front))
}

/// Pointwise `φ_t(x, n) = (x + t n, n)`.
pub fn apply_geodesic_flow(l: &LegendrianLoop, t: f64) -> LegendrianLoop {
    let base = l
        .base
        .iter()
        .zip(&l.normals)
        .map(|(x, n)| [x[0] + t * n[0], x[1] + t * n[1]])
        .collect();
    LegendrianLoop::unchecked(base, l.normals.clone(), l.h_front)
}

/// Flags vertex `i` when the relative projection speed
/// `‖x_{i+1} − x_{i−1}‖ / (‖x_{i+1} − x_{i−1}‖ + |θ_{i+1} − θ_{i−1}|)` drops
/// below `tau`.
pub fn detect_projection_singularities(l: &LegendrianLoop, tau: f64) -> SingularityReport {
    let n = l.len();
    let mut flagged = Vec::new();
    let mut min_speed = f64::INFINITY;
    for i in 0..n {
        let (p, q) = ((i + n - 1) % n, (i + 1) % n);
        let (a, b) = (l.base[p], l.base[q]);
        let dx = (b[0] - a[0]).hypot(b[1] - a[1]);
        let (na, nb) = (l.normals[p], l.normals[q]);
        let dth = wrap_angle(nb[1].atan2(nb[0]) - na[1].atan2(na[0])).abs();
        let denom = dx + dth;
        let speed = if denom > 0.0 { dx / denom } else { 0.0 };
        min_speed = min_speed.min(speed);
        if speed < tau {
            flagged.push(i);
        }
    }
    SingularityReport {
        flagged_indices: flagged,
        min_projection_speed: if n == 0 { 0.0 } else { min_speed },
        tau,
    }
}

/// Base polyline of the loop and whether it is simple.
pub fn front_projection(l: &LegendrianLoop) -> (ClosedCurve, bool) {
    let c = ClosedCurve::unchecked(l.base.clone());
    let simple = c.is_simple();
    (c, simple)
}

/// One boundary-map step with resampling. Fails with `SingularFront` when
/// the mapped loop has projection singularities, folds or inverts, and with
/// `ContactDrift` when the resampled loop loses the contact condition.
pub fn propagate_step(l: &LegendrianLoop, s: &Scenario) -> Result<LegendrianLoop> {
    let mapped = apply_boundary_map(l, s)?;
    let report = detect_projection_singularities(&mapped, DEFAULT_TAU);
    if report.is_singular() {
        return Err(Error::SingularFront(report.flagged_indices.len()));
    }
    let next = resample_loop(&mapped, l.h_front)?;
    // folded or inverted fronts without a local speed drop
    let (_, simple) = front_projection(&next);
    if !simple || signed_area(&next.base) <= 0.0 {
        return Err(Error::SingularFront(0));
    }
    let r = next.max_contact_residual()?;
    if r > MAX_CONTACT_RESIDUAL {
        return Err(Error::ContactDrift(r));
    }
    Ok(next)
}

/// `steps` applications of the boundary map, resampling after each.
pub fn propagate_loop(l: &LegendrianLoop, s: &Scenario, steps: usize) -> Result<LegendrianLoop> {
    let mut cur = l.clone();
    for _ in 0..steps {
        cur = propagate_step(&cur, s)?;
    }
    Ok(cur)
}

/// Outward (`offset > 0`) or inward equidistant of `c` via the geodesic flow
/// on its lift.
pub fn equidistant_front(c: &ClosedCurve, offset: f64, h_front: f64) -> Result<(ClosedCurve, SingularityReport)> {
    let lifted = lift_closed_curve(c, h_front)?;
    let moved = apply_geodesic_flow(&lifted, offset);
    let report = detect_projection_singularities(&moved, DEFAULT_TAU);
    Ok((ClosedCurve::unchecked(moved.base), report))
}

/// Result of [`relax_to_invariant_loop_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub fixed_loop: LegendrianLoop,
    pub iterations: usize,
    /// `t1` distance moved by each step.
    pub trace: Vec<f64>,
}

/// Iterates single propagation steps until consecutive loops are within
/// `tol` (vertex-set `t1` Hausdorff distance) and one further step moves the
/// loop by at most `2·tol`. Fails with `NonConvergent` after `max_iter`
/// steps or as soon as the front leaves the scenario window.
pub fn relax_to_invariant_loop_report(
    l0: &LegendrianLoop,
    s: &Scenario,
    tol: f64,
    max_iter: usize,
) -> Result<Relaxation> {
    relax_to_invariant_loop_observed(l0, s, tol, max_iter, |_, _| {})
}

/// [`relax_to_invariant_loop_report`] calling `observe(k, loop)` on every
/// accepted iterate, `k = 1, 2, ...`.
pub fn relax_to_invariant_loop_observed(
    l0: &LegendrianLoop,
    s: &Scenario,
    tol: f64,
    max_iter: usize,
    mut observe: impl FnMut(usize, &LegendrianLoop),
) -> Result<Relaxation> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let mut cur = l0.clone();
    let mut trace = Vec::new();
    for k in 0..max_iter {
        let next = match propagate_step(&cur, s) {
            Ok(n) => n,
            // runaway growth exhausts the vertex budget
            Err(Error::InvalidInput(_)) => return Err(Error::NonConvergent(k)),
            Err(e) => return Err(e),
        };
        // a front leaving the working window cannot settle inside it
        if next.base.iter().any(|x| !s.window.contains(x)) {
            return Err(Error::NonConvergent(k + 1));
        }
        observe(k + 1, &next);
        let d = t1_hausdorff_distance(&cur.points(), &next.points())?;
        trace.push(d);
        if d <= tol {
            let check = propagate_step(&next, s)?;
            let d2 = t1_hausdorff_distance(&next.points(), &check.points())?;
            if d2 <= 2.0 * tol {
                return Ok(Relaxation {
                    fixed_loop: next,
                    iterations: k + 1,
                    trace,
                });
            }
        }
        cur = next;
    }
    Err(Error::NonConvergent(max_iter))
}

pub fn relax_to_invariant_loop(
    l0: &LegendrianLoop,
    s: &Scenario,
    tol: f64,
    max_iter: usize,
) -> Result<LegendrianLoop> {
    relax_to_invariant_loop_report(l0, s, tol, max_iter).map(|r| r.fixed_loop)
}

/// Outer boundary of the `eps`-neighborhood of the region bounded by `c`,
/// computed on a raster: even-odd fill, disk dilation, marching squares.
pub fn rasterized_minkowski_boundary(c: &ClosedCurve, eps: f64, raster: f64) -> Result<ClosedCurve> {
    if !(eps > 0.0) || !(raster > 0.0) {
        return Err(Error::InvalidInput("eps and raster must be positive".into()));
    }
    let limit = eps / 10.0;
    if raster > limit * (1.0 + 1e-12) {
        return Err(Error::RasterTooCoarse { raster, limit });
    }
    if c.vertices.len() < 3 {
        return Err(Error::TooFewVertices(c.vertices.len(), 3));
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &c.vertices {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    let mut r = Raster::covering(lo, hi, eps + 3.0 * raster, raster);
    r.fill_polygon(&c.vertices);
    let grown = r.dilate(eps);
    let outer = grown
        .contours()
        .into_iter()
        .max_by(|a, b| signed_area(a).total_cmp(&signed_area(b)))
        .ok_or(Error::EmptySet)?;
    Ok(ClosedCurve::unchecked(outer))
}
