//! Metric primitives on the plane and on the unit tangent bundle.
//!
//! Distances between finite samplings are computed exactly (brute-force
//! min/max reductions), with a uniform bucket grid over the first two
//! coordinates used only to locate candidates. Every metric used here
//! dominates the planar distance between the first two coordinates, which
//! is what makes the bucket search a valid lower bound in any dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `‖n‖ = 1` for a [`Direction`].
pub const DIRECTION_TOL: f64 = 1e-12;
/// Below this norm a vector cannot be normalized.
pub const MIN_DIRECTION_NORM: f64 = 1e-14;

/// A point of the state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "points need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point(coords))
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point(vec![x, y])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// First two coordinates.
    pub fn planar(&self) -> [f64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Unit vector at angle `theta` in the plane.
    pub fn from_angle(theta: f64) -> Self {
        Direction(vec![theta.cos(), theta.sin()])
    }

    /// Polar angle of the first two components.
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }

    pub fn planar(&self) -> [f64; 2] {
        [self.0[0], self.0[1]]
    }
}

impl AsRef<[f64]> for Direction {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A point `(x, n)` of the unit tangent bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentPoint {
    pub base: Point,
    pub normal: Direction,
}

impl TangentPoint {
    pub fn new(base: Point, normal: Direction) -> Result<Self> {
        if base.dim() != normal.dim() {
            return Err(Error::DimensionMismatch(base.dim(), normal.dim()));
        }
        Ok(TangentPoint { base, normal })
    }

    /// Planar tangent point `((x, y), (cos θ, sin θ))`.
    pub fn planar(x: f64, y: f64, theta: f64) -> Self {
        TangentPoint {
            base: Point::xy(x, y),
            normal: Direction::from_angle(theta),
        }
    }

    /// Concatenated coordinates `(x, n)` in `ℝ^d × ℝ^d`.
    pub fn stacked(&self) -> Vec<f64> {
        let mut v = self.base.0.clone();
        v.extend_from_slice(&self.normal.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Returns `v / ‖v‖`.
pub fn normalize(v: &[f64]) -> Result<Direction> {
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = norm(v);
    if n < MIN_DIRECTION_NORM {
        return Err(Error::DegenerateDirection(n));
    }
    let mut out: Vec<f64> = v.iter().map(|c| c / n).collect();
    // one polishing pass keeps the norm within DIRECTION_TOL even after
    // thousands of chained renormalizations
    let n2 = norm(&out);
    if (n2 - 1.0).abs() > DIRECTION_TOL / 4.0 {
        out.iter_mut().for_each(|c| *c /= n2);
    }
    Ok(Direction(out))
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Uniform bucket grid over the first two coordinates of a point set.
pub(crate) struct BucketIndex {
    origin: [f64; 2],
    cell: f64,
    nx: i64,
    ny: i64,
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl BucketIndex {
    /// `keys[i]` is the planar key of item `i`; `cell` is the bucket size.
    pub(crate) fn build(keys: &[[f64; 2]], cell: Option<f64>) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for k in keys {
            for a in 0..2 {
                lo[a] = lo[a].min(k[a]);
                hi[a] = hi[a].max(k[a]);
            }
        }
        let ext = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let cell = cell.unwrap_or_else(|| {
            let per_axis = (keys.len() as f64).sqrt().max(1.0);
            ext / per_axis
        });
        let cell = cell.max(ext / 4096.0).max(1e-12);
        let nx = (((hi[0] - lo[0]) / cell).floor() as i64 + 1).max(1);
        let ny = (((hi[1] - lo[1]) / cell).floor() as i64 + 1).max(1);
        let mut counts = vec![0usize; (nx * ny) as usize + 1];
        let mut slot = Vec::with_capacity(keys.len());
        for k in keys {
            let i = (((k[0] - lo[0]) / cell).floor() as i64).clamp(0, nx - 1);
            let j = (((k[1] - lo[1]) / cell).floor() as i64).clamp(0, ny - 1);
            let s = (j * nx + i) as usize;
            counts[s + 1] += 1;
            slot.push(s);
        }
        for s in 1..counts.len() {
            counts[s] += counts[s - 1];
        }
        let mut fill = counts.clone();
        let mut items = vec![0usize; keys.len()];
        for (idx, &s) in slot.iter().enumerate() {
            items[fill[s]] = idx;
            fill[s] += 1;
        }
        BucketIndex {
            origin: lo,
            cell,
            nx,
            ny,
            starts: counts,
            items,
        }
    }

    fn bucket(&self, i: i64, j: i64) -> &[usize] {
        let s = (j * self.nx + i) as usize;
        &self.items[self.starts[s]..self.starts[s + 1]]
    }

    /// Ring search for the minimum of `metric` over all items. `metric(i)`
    /// must dominate the planar distance from `q` to the key of item `i`.
    /// Stops early once a value `<= stop_below` is found.
    pub(crate) fn min_metric(
        &self,
        q: [f64; 2],
        stop_below: f64,
        mut metric: impl FnMut(usize) -> f64,
    ) -> f64 {
        let qi = ((q[0] - self.origin[0]) / self.cell).floor() as i64;
        let qj = ((q[1] - self.origin[1]) / self.cell).floor() as i64;
        // Chebyshev distance from the query bucket to the grid rectangle
        let gap_i = if qi < 0 {
            -qi
        } else if qi >= self.nx {
            qi - self.nx + 1
        } else {
            0
        };
        let gap_j = if qj < 0 {
            -qj
        } else if qj >= self.ny {
            qj - self.ny + 1
        } else {
            0
        };
        let r0 = gap_i.max(gap_j);
        let r_max = r0 + self.nx.max(self.ny) + 1;
        let mut best = f64::INFINITY;
        for r in r0..=r_max {
            // everything in ring r+1 and beyond is at planar distance >= r*cell
            let mut visit = |i: i64, j: i64, best: &mut f64| {
                if i < 0 || j < 0 || i >= self.nx || j >= self.ny {
                    return false;
                }
                for &it in self.bucket(i, j) {
                    let m = metric(it);
                    if m < *best {
                        *best = m;
                        if m <= stop_below {
                            return true;
                        }
                    }
                }
                false
            };
            if r == 0 {
                if visit(qi, qj, &mut best) {
                    return best;
                }
            } else {
                // only the part of the ring that overlaps the grid
                let (i0, i1) = ((qi - r).max(0), (qi + r).min(self.nx - 1));
                let (j0, j1) = ((qj - r + 1).max(0), (qj + r - 1).min(self.ny - 1));
                for i in i0..=i1 {
                    if visit(i, qj - r, &mut best) || visit(i, qj + r, &mut best) {
                        return best;
                    }
                }
                for j in j0..=j1 {
                    if visit(qi - r, j, &mut best) || visit(qi + r, j, &mut best) {
                        return best;
                    }
                }
            }
            if best <= r as f64 * self.cell {
                break;
            }
        }
        best
    }
}

fn check_sets<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = a[0].as_ref().len();
    for p in a.iter().chain(b) {
        let dp = p.as_ref().len();
        if dp != d {
            return Err(Error::DimensionMismatch(d, dp));
        }
        if dp < 2 {
            return Err(Error::InvalidInput("points need at least 2 coordinates".into()));
        }
    }
    Ok(d)
}

fn planar_keys<P: AsRef<[f64]>>(pts: &[P]) -> Vec<[f64; 2]> {
    pts.iter()
        .map(|p| {
            let c = p.as_ref();
            [c[0], c[1]]
        })
        .collect()
}

/// Directed Hausdorff semi-distance `sup_{a∈A} dist(a, B)`.
pub fn directed_hausdorff<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<f64> {
    check_sets(a, b)?;
    let index = BucketIndex::build(&planar_keys(b), None);
    Ok(directed_with_index(a, b, &index))
}

fn directed_with_index<P: AsRef<[f64]>>(a: &[P], b: &[P], index: &BucketIndex) -> f64 {
    let mut worst = 0.0f64;
    for p in a {
        let pc = p.as_ref();
        // a neighbor closer than the running max cannot raise it
        let m = index.min_metric([pc[0], pc[1]], worst, |i| dist(pc, b[i].as_ref()));
        worst = worst.max(m);
    }
    worst
}

/// Hausdorff distance between two finite point sets (Euclidean metric on all
/// coordinates).
pub fn hausdorff_distance<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<f64> {
    check_sets(a, b)?;
    let ia = BucketIndex::build(&planar_keys(a), None);
    let ib = BucketIndex::build(&planar_keys(b), None);
    Ok(directed_with_index(a, b, &ib).max(directed_with_index(b, a, &ia)))
}

/// Hausdorff distance on the unit tangent bundle under the product metric
/// `√(‖Δx‖² + ‖Δn‖²)`.
pub fn t1_hausdorff_distance(p: &[TangentPoint], q: &[TangentPoint]) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = p[0].dim();
    if let Some(bad) = p.iter().chain(q).find(|t| t.dim() != d) {
        return Err(Error::DimensionMismatch(d, bad.dim()));
    }
    let ps: Vec<Vec<f64>> = p.iter().map(TangentPoint::stacked).collect();
    let qs: Vec<Vec<f64>> = q.iter().map(TangentPoint::stacked).collect();
    hausdorff_distance(&ps, &qs)
}

fn point_segment_dist(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut ab2 = 0.0;
    let mut ap_ab = 0.0;
    for k in 0..p.len() {
        let ab = b[k] - a[k];
        ab2 += ab * ab;
        ap_ab += (p[k] - a[k]) * ab;
    }
    let t = if ab2 > 0.0 { (ap_ab / ab2).clamp(0.0, 1.0) } else { 0.0 };
    let mut s = 0.0;
    for k in 0..p.len() {
        let c = a[k] + t * (b[k] - a[k]) - p[k];
        s += c * c;
    }
    s.sqrt()
}

struct SegmentIndex<'a, P> {
    loop_pts: &'a [P],
    index: BucketIndex,
    reach: f64,
}

impl<'a, P: AsRef<[f64]>> SegmentIndex<'a, P> {
    fn new(loop_pts: &'a [P]) -> Self {
        let n = loop_pts.len();
        let mids: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let a = loop_pts[i].as_ref();
                let b = loop_pts[(i + 1) % n].as_ref();
                [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
            })
            .collect();
        // half of the longest planar edge bounds how far a segment reaches
        // from its midpoint key
        let reach = (0..n)
            .map(|i| {
                let a = loop_pts[i].as_ref();
                let b = loop_pts[(i + 1) % n].as_ref();
                dist(&a[..2], &b[..2]) / 2.0
            })
            .fold(0.0, f64::max);
        SegmentIndex {
            loop_pts,
            index: BucketIndex::build(&mids, None),
            reach,
        }
    }

    fn dist_to(&self, p: &[f64], stop_below: f64) -> f64 {
        let n = self.loop_pts.len();
        // shift by `reach` so the bucket lower bound stays valid
        let m = self.index.min_metric([p[0], p[1]], stop_below + self.reach, |i| {
            let d = point_segment_dist(
                p,
                self.loop_pts[i].as_ref(),
                self.loop_pts[(i + 1) % n].as_ref(),
            );
            d + self.reach
        });
        m - self.reach
    }
}

/// Directed distance from the closed polyline `a` (densified `refine` times
/// per edge) to the closed polyline `b`.
fn directed_curve<P: AsRef<[f64]>>(a: &[P], b: &SegmentIndex<'_, P>, refine: usize) -> f64 {
    let n = a.len();
    let d = a[0].as_ref().len();
    let mut worst = 0.0f64;
    let mut buf = vec![0.0; d];
    for i in 0..n {
        let p = a[i].as_ref();
        let q = a[(i + 1) % n].as_ref();
        for s in 0..refine {
            let t = s as f64 / refine as f64;
            for k in 0..d {
                buf[k] = p[k] + t * (q[k] - p[k]);
            }
            worst = worst.max(b.dist_to(&buf, worst));
        }
    }
    worst
}

/// Hausdorff distance between two closed polylines treated as continuous
/// curves: vertices (and `refine - 1` interior samples per edge) of each are
/// measured against the segments of the other. Works in any dimension; the
/// bucket search runs on the first two coordinates.
pub fn curve_hausdorff<P: AsRef<[f64]>>(a: &[P], b: &[P], refine: usize) -> Result<f64> {
    check_sets(a, b)?;
    let refine = refine.max(1);
    let ia = SegmentIndex::new(a);
    let ib = SegmentIndex::new(b);
    Ok(directed_curve(a, &ib, refine).max(directed_curve(b, &ia, refine)))
}

/// Curve version of [`t1_hausdorff_distance`] for closed loops of tangent
/// points: normals are interpolated linearly along each edge.
pub fn t1_curve_distance(p: &[TangentPoint], q: &[TangentPoint]) -> Result<f64> {
    let ps: Vec<Vec<f64>> = p.iter().map(TangentPoint::stacked).collect();
    let qs: Vec<Vec<f64>> = q.iter().map(TangentPoint::stacked).collect();
    curve_hausdorff(&ps, &qs, 2)
}

/// Per-edge Liouville residuals `⟨n_i, x_{i+1} − x_i⟩ / ‖x_{i+1} − x_i‖`
/// of a cyclic sequence of tangent points.
pub fn contact_residual(points: &[TangentPoint]) -> Result<Vec<f64>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n, 3));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let xi = points[i].base.coords();
        let xj = points[j].base.coords();
        let dx: Vec<f64> = xj.iter().zip(xi).map(|(a, b)| a - b).collect();
        let len = norm(&dx);
        if len < MIN_DIRECTION_NORM {
            return Err(Error::ZeroEdge(i, j));
        }
        out.push(dot(points[i].normal.components(), &dx) / len);
    }
    Ok(out)
}

/// Largest absolute contact residual.
pub fn max_contact_residual(points: &[TangentPoint]) -> Result<f64> {
    Ok(contact_residual(points)?
        .into_iter()
        .fold(0.0, |m, r| m.max(r.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize, r: f64, c: [f64; 2]) -> Vec<[f64; 2]> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                [c[0] + r * t.cos(), c[1] + r * t.sin()]
            })
            .collect()
    }

    fn lifted_circle(n: usize, r: f64) -> Vec<TangentPoint> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                TangentPoint::planar(r * t.cos(), r * t.sin(), t)
            })
            .collect()
    }

    fn brute_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
        let dir = |a: &[[f64; 2]], b: &[[f64; 2]]| {
            a.iter()
                .map(|p| b.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        dir(a, b).max(dir(b, a))
    }

    #[test]
    fn normalize_examples() {
        let d = normalize(&[3.0, 4.0]).unwrap();
        assert!((d.components()[0] - 0.6).abs() < 1e-15);
        assert!((d.components()[1] - 0.8).abs() < 1e-15);
        let d = normalize(&[0.0, 2.0]).unwrap();
        assert_eq!(d.components(), &[0.0, 1.0]);
        assert!(matches!(
            normalize(&[1e-16, 0.0]),
            Err(Error::DegenerateDirection(_))
        ));
    }

    #[test]
    fn normalize_is_unit_after_chaining() {
        let mut v = vec![0.3, -1.7, 2.2];
        for k in 0..5000 {
            v[k % 3] += 1e-3 * (k as f64).sin();
            let d = normalize(&v).unwrap();
            assert!((norm(d.components()) - 1.0).abs() <= DIRECTION_TOL);
            v = d.components().iter().map(|c| c * 1.0001).collect();
        }
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff_distance(&[[0.0, 0.0]], &[[3.0, 4.0]]).unwrap(), 5.0);
        let a = circle(100, 1.0, [0.2, 0.1]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let empty: Vec<[f64; 2]> = vec![];
        assert_eq!(hausdorff_distance(&a, &empty), Err(Error::EmptySet));
    }

    #[test]
    fn hausdorff_shifted_circles() {
        let a = circle(720, 1.0, [0.0, 0.0]);
        let b = circle(720, 1.0, [3.0, 0.0]);
        let arc = 2.0 * PI / 720.0;
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - 3.0).abs() <= 2.0 * arc, "{d}");
    }

    #[test]
    fn hausdorff_matches_brute_force() {
        let a: Vec<[f64; 2]> = (0..300)
            .map(|k| {
                let t = k as f64;
                [(t * 0.37).sin() * 2.0, (t * 0.91).cos() * 1.3 + 0.01 * t]
            })
            .collect();
        let b: Vec<[f64; 2]> = (0..170)
            .map(|k| {
                let t = k as f64;
                [(t * 1.37).cos() * 0.5 - 3.0, (t * 0.21).sin() * 4.0]
            })
            .collect();
        let fast = hausdorff_distance(&a, &b).unwrap();
        assert_eq!(fast, brute_hausdorff(&a, &b));
    }

    #[test]
    fn t1_examples() {
        let p = vec![TangentPoint::planar(0.0, 0.0, 0.0)];
        let q = vec![TangentPoint::planar(0.0, 0.0, PI / 2.0)];
        assert!((t1_hausdorff_distance(&p, &q).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(t1_hausdorff_distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn t1_lifted_circles_dominate_base() {
        let p = lifted_circle(400, 0.5);
        let q = lifted_circle(400, 0.6);
        let d1 = t1_hausdorff_distance(&p, &q).unwrap();
        let pb: Vec<[f64; 2]> = p.iter().map(|t| t.base.planar()).collect();
        let qb: Vec<[f64; 2]> = q.iter().map(|t| t.base.planar()).collect();
        let d = hausdorff_distance(&pb, &qb).unwrap();
        // same angles, so the matched pair differs only radially by 0.1
        assert!((d1 - 0.1).abs() < 1e-12);
        assert!(d1 >= d);
    }

    #[test]
    fn curve_hausdorff_concentric_circles() {
        // vertex sets are rotated against each other; curve distance still
        // sees the radial gap up to chord sagitta
        let a = circle(500, 1.0, [0.0, 0.0]);
        let b: Vec<[f64; 2]> = (0..333)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.4) / 333.0;
                [1.05 * t.cos(), 1.05 * t.sin()]
            })
            .collect();
        let d = curve_hausdorff(&a, &b, 4).unwrap();
        assert!((d - 0.05).abs() < 1e-3, "{d}");
    }

    #[test]
    fn contact_residual_examples() {
        let l = lifted_circle(360, 1.0);
        let r = contact_residual(&l).unwrap();
        let h = 2.0 * PI / 360.0;
        let max = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max <= 0.01);
        // chord to normal: ⟨n, Δx⟩/‖Δx‖ = sin(h/2)
        assert!((max - (h / 2.0).sin()).abs() < 1e-12);

        let tangents: Vec<TangentPoint> = (0..64)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 64.0;
                TangentPoint::planar(t.cos(), t.sin(), t + PI / 2.0)
            })
            .collect();
        let r = contact_residual(&tangents).unwrap();
        assert!(r.iter().all(|v| (v.abs() - 1.0).abs() < 0.01));

        let mut dup = lifted_circle(10, 1.0);
        dup[4] = dup[3].clone();
        assert_eq!(contact_residual(&dup), Err(Error::ZeroEdge(3, 4)));
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
        assert!((wrap_angle(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pts() -> impl Strategy<Value = Vec<[f64; 2]>> {
            prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| [x, y]), 1..40)
        }

        proptest! {
            #[test]
            fn symmetric(a in pts(), b in pts()) {
                prop_assert_eq!(hausdorff_distance(&a, &b).unwrap(), hausdorff_distance(&b, &a).unwrap());
                prop_assert_eq!(hausdorff_distance(&a, &b).unwrap(), brute_hausdorff(&a, &b));
            }

            #[test]
            fn triangle(a in pts(), b in pts(), c in pts()) {
                let ab = hausdorff_distance(&a, &b).unwrap();
                let bc = hausdorff_distance(&b, &c).unwrap();
                let ac = hausdorff_distance(&a, &c).unwrap();
                prop_assert!(ac <= ab + bc + 1e-12);
            }

            #[test]
            fn t1_dominates_projection(
                a in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64, -4.0..4.0f64), 1..30),
                b in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64, -4.0..4.0f64), 1..30),
            ) {
                let p: Vec<TangentPoint> = a.iter().map(|&(x, y, t)| TangentPoint::planar(x, y, t)).collect();
                let q: Vec<TangentPoint> = b.iter().map(|&(x, y, t)| TangentPoint::planar(x, y, t)).collect();
                let pb: Vec<[f64; 2]> = p.iter().map(|t| t.base.planar()).collect();
                let qb: Vec<[f64; 2]> = q.iter().map(|t| t.base.planar()).collect();
                prop_assert!(t1_hausdorff_distance(&p, &q).unwrap() >= hausdorff_distance(&pb, &qb).unwrap());
            }
        }
    }
}
