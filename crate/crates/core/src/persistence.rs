//! Persistence experiments: invariant loops followed across a perturbation
//! family, agreement between the box-covering and loop routes, and
//! attraction of nearby fronts.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::front::{
    apply_geodesic_flow, detect_projection_singularities, front_projection, lift_closed_curve,
    propagate_loop, relax_to_invariant_loop_report, ClosedCurve, LegendrianLoop, DEFAULT_TAU,
};
use crate::geometry::{curve_hausdorff, t1_curve_distance, t1_hausdorff_distance, BucketIndex};
use crate::hyperbolicity::{
    classify, estimate_spectrum_seeded, Classification, Verdict, DEFAULT_GAP, INVARIANCE_TOL,
};
use crate::setvalued::{minimal_invariant_set, Grid, MinimalityCertificate, DEFAULT_N_SEEDS};
use crate::systems::{PerturbationFamily, Scenario};

/// Edge refinement used for curve Hausdorff distances between fronts.
pub const CURVE_REFINE: usize = 4;
pub const DEFAULT_RELAX_TOL: f64 = 1e-6;
pub const DEFAULT_RELAX_ITER: usize = 500;
pub const ATTRACTION_BURN_IN: usize = 1;

/// Knobs shared by the experiment drivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceOptions {
    pub h_front: f64,
    pub max_iter: usize,
    pub n_orbits: usize,
    pub n_iter: usize,
    pub gap: f64,
    pub seed: u64,
}

impl Default for PersistenceOptions {
    fn default() -> Self {
        PersistenceOptions {
            h_front: 0.005,
            max_iter: DEFAULT_RELAX_ITER,
            n_orbits: 8,
            n_iter: 100,
            gap: DEFAULT_GAP,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceRow {
    pub delta: f64,
    /// `None` when the perturbed relaxation failed.
    pub hausdorff_c0: Option<f64>,
    /// Largest angle between normals at nearest base points, radians.
    pub normal_deviation_c1: Option<f64>,
    pub verdict: Option<Classification>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceTable {
    /// Ordered by strictly decreasing `delta`.
    pub rows: Vec<PersistenceRow>,
    pub base_verdict: Classification,
    pub base_loop_vertices: usize,
    /// Front distance between warm- and cold-started loops at the largest
    /// converged `delta`.
    pub cold_start_deviation: Option<f64>,
}

impl PersistenceTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    /// CSV with header `delta,hausdorff_c0,normal_dev_c1,verdict,margin,converged`;
    /// failed rows leave the measured fields empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "delta,hausdorff_c0,normal_dev_c1,verdict,margin,converged")?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.delta,
                opt(r.hausdorff_c0),
                opt(r.normal_deviation_c1),
                r.verdict.map(|c| c.verdict.to_string()).unwrap_or_default(),
                opt(r.verdict.map(|c| c.margin)),
                r.converged
            )?;
        }
        Ok(())
    }
}

/// Lift of the circle centered in the scenario window with radius a quarter
/// of the window width.
pub fn initial_loop(s: &Scenario, h_front: f64) -> Result<LegendrianLoop> {
    let c = s.window.center();
    let r = 0.25 * (s.window.hi[0] - s.window.lo[0]);
    let n = ((2.0 * std::f64::consts::PI * r / h_front).ceil() as usize).max(64);
    lift_closed_curve(&ClosedCurve::circle([c[0], c[1]], r, n)?, h_front)
}

/// Largest angle between the normal of a vertex of one loop and the normal
/// at the nearest base vertex of the other, both ways.
pub fn normal_deviation(a: &LegendrianLoop, b: &LegendrianLoop) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |p: &LegendrianLoop, q: &LegendrianLoop| {
        let index = BucketIndex::build(&q.base, None);
        let mut worst = 0.0f64;
        for (x, n) in p.base.iter().zip(&p.normals) {
            let mut arg = (f64::INFINITY, 0usize);
            index.min_metric(*x, 0.0, |i| {
                let y = q.base[i];
                let d = (x[0] - y[0]).hypot(x[1] - y[1]);
                if d < arg.0 {
                    arg = (d, i);
                }
                d
            });
            let m = q.normals[arg.1];
            let c = (n[0] * m[0] + n[1] * m[1]).clamp(-1.0, 1.0);
            let s = n[0] * m[1] - n[1] * m[0];
            worst = worst.max(s.atan2(c).abs());
        }
        worst
    };
    Ok(directed(a, b).max(directed(b, a)))
}

fn front_distance(a: &LegendrianLoop, b: &LegendrianLoop) -> Result<f64> {
    curve_hausdorff(&a.base, &b.base, CURVE_REFINE)
}

/// Errors that mean "the loop route did not settle" rather than bad input.
fn is_front_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NonConvergent(_)
            | Error::SingularFront(_)
            | Error::ContactDrift(_)
            | Error::NotInvariantLoop(_)
            | Error::NonLegendrian(_)
    )
}

fn loop_verdict(l: &LegendrianLoop, s: &Scenario, opts: &PersistenceOptions) -> Result<Classification> {
    let r = estimate_spectrum_seeded(l, s, opts.n_orbits, opts.n_iter, opts.seed)?;
    Ok(classify(&r, opts.gap))
}

pub fn run_persistence_experiment(
    fam: &PerturbationFamily,
    deltas: &[f64],
    tol: f64,
) -> Result<PersistenceTable> {
    run_persistence_experiment_with(fam, deltas, tol, &PersistenceOptions::default())
}

/// Relaxes the base loop under each perturbed scenario (warm start) and
/// measures front and normal deviations from the base loop.
pub fn run_persistence_experiment_with(
    fam: &PerturbationFamily,
    deltas: &[f64],
    tol: f64,
    opts: &PersistenceOptions,
) -> Result<PersistenceTable> {
    if deltas.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
        return Err(Error::InvalidInput("deltas must be finite and non-negative".into()));
    }
    let mut ds = deltas.to_vec();
    ds.sort_by(|a, b| b.total_cmp(a));
    ds.dedup();

    let base_s = &fam.base;
    let not_attracting = |e: Error| Error::BaseNotAttracting(e.to_string());
    let l0 = initial_loop(base_s, opts.h_front)?;
    let base = relax_to_invariant_loop_report(&l0, base_s, tol, opts.max_iter)
        .map_err(not_attracting)?
        .fixed_loop;
    let base_verdict = loop_verdict(&base, base_s, opts).map_err(not_attracting)?;
    if base_verdict.verdict != Verdict::NormallyAttracting {
        return Err(Error::BaseNotAttracting(format!(
            "verdict {} with margin {}",
            base_verdict.verdict, base_verdict.margin
        )));
    }

    let mut rows = Vec::with_capacity(ds.len());
    let mut cold_start_deviation = None;
    for &delta in &ds {
        let s = fam.perturbed(delta)?;
        let attempt = relax_to_invariant_loop_report(&base, &s, tol, opts.max_iter)
            .map(|r| r.fixed_loop)
            .and_then(|l| Ok((loop_verdict(&l, &s, opts)?, l)));
        match attempt {
            Ok((verdict, l)) => {
                if cold_start_deviation.is_none() {
                    let cold = initial_loop(&s, opts.h_front)
                        .and_then(|c| relax_to_invariant_loop_report(&c, &s, tol, opts.max_iter));
                    if let Ok(cold) = cold {
                        cold_start_deviation = Some(front_distance(&cold.fixed_loop, &l)?);
                    }
                }
                rows.push(PersistenceRow {
                    delta,
                    hausdorff_c0: Some(front_distance(&base, &l)?),
                    normal_deviation_c1: Some(normal_deviation(&base, &l)?),
                    verdict: Some(verdict),
                    converged: true,
                });
            }
            Err(e) if is_front_failure(&e) => rows.push(PersistenceRow {
                delta,
                hausdorff_c0: None,
                normal_deviation_c1: None,
                verdict: None,
                converged: false,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(PersistenceTable {
        rows,
        base_verdict,
        base_loop_vertices: base.len(),
        cold_start_deviation,
    })
}

/// Agreement between the box-covering boundary and the invariant loop front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub distance: f64,
    pub threshold: f64,
    pub passed: bool,
    pub box_certificate: MinimalityCertificate,
    pub loop_iterations: usize,
    /// `t1` motion of the last relaxation step.
    pub loop_final_step: f64,
}

pub fn verify_equivalence(s: &Scenario, grid: &Grid, h_front: f64) -> Result<EquivalenceReport> {
    verify_equivalence_with(s, grid, h_front, DEFAULT_N_SEEDS, 0)
}

pub fn verify_equivalence_with(
    s: &Scenario,
    grid: &Grid,
    h_front: f64,
    n_seeds: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    let (m, box_certificate) = minimal_invariant_set(s, grid, n_seeds, seed)?;
    let contour = m.outer_boundary()?;
    let l0 = initial_loop(s, h_front)?;
    let relax = relax_to_invariant_loop_report(&l0, s, DEFAULT_RELAX_TOL, DEFAULT_RELAX_ITER)?;
    let distance = curve_hausdorff(&contour, &relax.fixed_loop.base, CURVE_REFINE)?;
    let threshold = 2.0 * (grid.cell + h_front);
    Ok(EquivalenceReport {
        distance,
        threshold,
        passed: distance <= threshold,
        box_certificate,
        loop_iterations: relax.iterations,
        loop_final_step: relax.trace.last().copied().unwrap_or(0.0),
    })
}

/// Convergence of offset fronts back to an invariant loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAttraction {
    pub attracting: bool,
    /// Curve `t1` distance to the loop, starting with the offset itself.
    pub inner_trace: Vec<f64>,
    pub outer_trace: Vec<f64>,
}

/// Geodesic-flow offset of `l` by `t`, rejected when the projection
/// degenerates or the carried normals stop pointing outward.
fn offset_loop(l: &LegendrianLoop, t: f64) -> Result<LegendrianLoop> {
    let moved = apply_geodesic_flow(l, t);
    let report = detect_projection_singularities(&moved, DEFAULT_TAU);
    if report.is_singular() {
        return Err(Error::SingularFront(report.flagged_indices.len()));
    }
    let n = moved.len();
    let inverted = (0..n)
        .filter(|&i| {
            let (p, q) = (moved.base[(i + n - 1) % n], moved.base[(i + 1) % n]);
            let outward = [q[1] - p[1], p[0] - q[0]];
            let m = moved.normals[i];
            outward[0] * m[0] + outward[1] * m[1] <= 0.0
        })
        .count();
    if inverted > 0 {
        return Err(Error::SingularFront(inverted));
    }
    let (curve, simple) = front_projection(&moved);
    if !simple {
        return Err(Error::SingularFront(0));
    }
    lift_closed_curve(&ClosedCurve::new(curve.vertices)?, l.h_front)
}

fn attraction_trace(
    start: LegendrianLoop,
    target: &LegendrianLoop,
    s: &Scenario,
    max_iter: usize,
) -> Result<(Vec<f64>, bool)> {
    let goal = 2.0 * target.h_front;
    let pts = target.points();
    let mut cur = start;
    let mut trace = vec![t1_curve_distance(&cur.points(), &pts)?];
    while *trace.last().unwrap() > goal && trace.len() <= max_iter {
        cur = propagate_loop(&cur, s, 1)?;
        trace.push(t1_curve_distance(&cur.points(), &pts)?);
    }
    let reached = *trace.last().unwrap() <= goal;
    let monotone = trace
        .windows(2)
        .skip(ATTRACTION_BURN_IN)
        .all(|w| w[1] <= w[0]);
    Ok((trace, reached && monotone))
}

pub fn attracting_boundary_check(s: &Scenario, l: &LegendrianLoop, eta: f64) -> Result<BoundaryAttraction> {
    attracting_boundary_check_with(s, l, eta, DEFAULT_RELAX_ITER)
}

/// Propagates the inner and outer `eta`-offsets of `l` until both are within
/// `2·h_front` of it in curve `t1` distance.
pub fn attracting_boundary_check_with(
    s: &Scenario,
    l: &LegendrianLoop,
    eta: f64,
    max_iter: usize,
) -> Result<BoundaryAttraction> {
    if !(eta > 0.0) {
        return Err(Error::InvalidInput(format!("eta must be positive, got {eta}")));
    }
    let step = propagate_loop(l, s, 1)?;
    let d = t1_hausdorff_distance(&l.points(), &step.points())?;
    if d > INVARIANCE_TOL {
        return Err(Error::NotInvariantLoop(d));
    }
    let inner = offset_loop(l, -eta)?;
    let outer = offset_loop(l, eta)?;
    let (inner_trace, a) = attraction_trace(inner, l, s, max_iter)?;
    let (outer_trace, b) = attraction_trace(outer, l, s, max_iter)?;
    Ok(BoundaryAttraction {
        attracting: a && b,
        inner_trace,
        outer_trace,
    })
}
