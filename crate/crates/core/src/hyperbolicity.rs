//! Tangential and normal growth rates of the boundary map along an invariant
//! Legendrian loop, and the attracting/repelling classification built on
//! them.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{boundary_map_differential, boundary_map_planar, DEFAULT_CHART_STEP};
use crate::error::{Error, Result};
use crate::front::{propagate_loop, LegendrianLoop};
use crate::geometry::{t1_hausdorff_distance, wrap_angle, TangentPoint};
use crate::systems::Scenario;

pub const DEFAULT_GAP: f64 = 0.05;
/// Largest `t1` motion under one step for a loop to count as invariant.
pub const INVARIANCE_TOL: f64 = 1e-4;
pub const MIN_ITERATIONS: usize = 50;
const FRAME_TWIST: f64 = 0.61;

/// Per-step log growth rates along the loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub tangential_exponent: f64,
    /// Sorted descending.
    pub normal_exponents: [f64; 2],
    /// Largest deviation of a single orbit's rates from the mean.
    pub per_orbit_spread: f64,
    pub iterations_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NormallyAttracting,
    NormallyRepelling,
    NotNormallyHyperbolic,
    ContactAnomaly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NormallyAttracting => "NormallyAttracting",
            Verdict::NormallyRepelling => "NormallyRepelling",
            Verdict::NotNormallyHyperbolic => "NotNormallyHyperbolic",
            Verdict::ContactAnomaly => "ContactAnomaly",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub margin: f64,
}

/// Flat JSON form of a spectrum and its classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumExport {
    pub tangential: f64,
    pub normal: [f64; 2],
    pub spread: f64,
    pub iterations: usize,
    pub verdict: Verdict,
    pub margin: f64,
}

impl SpectrumExport {
    pub fn new(r: &SpectrumReport, c: &Classification) -> Self {
        SpectrumExport {
            tangential: r.tangential_exponent,
            normal: r.normal_exponents,
            spread: r.per_orbit_spread,
            iterations: r.iterations_used,
            verdict: c.verdict,
            margin: c.margin,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Unit chart tangent `(Δx₁, Δx₂, Δθ)` at vertex `i` by cyclic central
/// differences.
fn loop_tangent(l: &LegendrianLoop, i: usize) -> Result<Vector3<f64>> {
    let n = l.len();
    let (p, q) = (l.base[(i + n - 1) % n], l.base[(i + 1) % n]);
    let (np, nq) = (l.normals[(i + n - 1) % n], l.normals[(i + 1) % n]);
    let dth = wrap_angle(nq[1].atan2(nq[0]) - np[1].atan2(np[0]));
    let t = Vector3::new(q[0] - p[0], q[1] - p[1], dth);
    let len = t.norm();
    if !(len > 0.0) {
        return Err(Error::DegenerateDirection(len));
    }
    Ok(t / len)
}

fn nearest_vertex(l: &LegendrianLoop, x: [f64; 2], n: [f64; 2]) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (i, (b, m)) in l.base.iter().zip(&l.normals).enumerate() {
        let d = (b[0] - x[0]).powi(2)
            + (b[1] - x[1]).powi(2)
            + (m[0] - n[0]).powi(2)
            + (m[1] - n[1]).powi(2);
        if d < best.0 {
            best = (d, i);
        }
    }
    best.1
}

/// Orthonormal completion of a unit vector, turned by a fixed generic angle
/// so that neither vector starts on a coordinate axis.
fn complement(t: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let axis = if t.x.abs() <= t.y.abs() && t.x.abs() <= t.z.abs() {
        Vector3::x()
    } else if t.y.abs() <= t.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let a = (axis - t * t.dot(&axis)).normalize();
    let b = t.cross(&a);
    let (sn, cs) = FRAME_TWIST.sin_cos();
    (a * cs + b * sn, b * cs - a * sn)
}

/// Mean log rates `(tangential, normal₁, normal₂)` along one orbit started at
/// vertex `start`.
fn orbit_rates(l: &LegendrianLoop, s: &Scenario, start: usize, n_iter: usize) -> Result<[f64; 3]> {
    let mut i = start;
    let mut t = loop_tangent(l, i)?;
    let (mut u, mut v) = complement(&t);
    let mut sums = [0.0; 3];
    for _ in 0..n_iter {
        let (x, n) = (l.base[i], l.normals[i]);
        let p = TangentPoint::planar(x[0], x[1], n[1].atan2(n[0]));
        let j: Matrix3<f64> = boundary_map_differential(&p, s, DEFAULT_CHART_STEP)?;
        let (y, w) = boundary_map_planar(x, n, s)?;
        // the orbit is kept on the loop by snapping to the nearest vertex
        i = nearest_vertex(l, y, w);
        let t_next = loop_tangent(l, i)?;
        let jt = j * t;
        sums[0] += jt.dot(&t_next).abs().ln();
        // Gram-Schmidt of the transported complement against the new tangent
        let ju = j * u;
        let jv = j * v;
        let a = ju - t_next * t_next.dot(&ju);
        let r22 = a.norm();
        let a = a / r22;
        let b = jv - t_next * t_next.dot(&jv) - a * a.dot(&jv);
        let r33 = b.norm();
        sums[1] += r22.ln();
        sums[2] += r33.ln();
        t = t_next;
        u = a;
        v = b / r33;
    }
    let k = n_iter as f64;
    let rates = [sums[0] / k, sums[1] / k, sums[2] / k];
    if rates.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(rates)
}

fn check_invariant(l: &LegendrianLoop, s: &Scenario) -> Result<()> {
    let next = propagate_loop(l, s, 1)?;
    let d = t1_hausdorff_distance(&l.points(), &next.points())?;
    if d > INVARIANCE_TOL {
        return Err(Error::NotInvariantLoop(d));
    }
    Ok(())
}

fn spectrum_from_starts(
    l: &LegendrianLoop,
    s: &Scenario,
    starts: &[usize],
    n_iter: usize,
) -> Result<SpectrumReport> {
    if n_iter < MIN_ITERATIONS {
        return Err(Error::InvalidInput(format!(
            "n_iter must be at least {MIN_ITERATIONS}, got {n_iter}"
        )));
    }
    if starts.is_empty() {
        return Err(Error::InvalidInput("n_orbits must be positive".into()));
    }
    check_invariant(l, s)?;
    let per_orbit: Vec<[f64; 3]> = starts
        .iter()
        .map(|&i| orbit_rates(l, s, i, n_iter))
        .collect::<Result<_>>()?;
    // normal rates of each orbit sorted descending before averaging
    let sorted: Vec<[f64; 3]> = per_orbit
        .iter()
        .map(|r| [r[0], r[1].max(r[2]), r[1].min(r[2])])
        .collect();
    let m = sorted.len() as f64;
    let mut mean = [0.0; 3];
    for r in &sorted {
        for k in 0..3 {
            mean[k] += r[k] / m;
        }
    }
    let spread = sorted
        .iter()
        .flat_map(|r| (0..3).map(move |k| (r[k] - mean[k]).abs()))
        .fold(0.0, f64::max);
    Ok(SpectrumReport {
        tangential_exponent: mean[0],
        normal_exponents: [mean[1], mean[2]],
        per_orbit_spread: spread,
        iterations_used: n_iter,
    })
}

/// Rates from `n_orbits` evenly spaced start vertices.
pub fn estimate_spectrum(
    l: &LegendrianLoop,
    s: &Scenario,
    n_orbits: usize,
    n_iter: usize,
) -> Result<SpectrumReport> {
    let n = l.len();
    let starts: Vec<usize> = (0..n_orbits.min(n)).map(|k| k * n / n_orbits.min(n).max(1)).collect();
    spectrum_from_starts(l, s, &starts, n_iter)
}

/// Rates from `n_orbits` start vertices drawn from `seed`.
pub fn estimate_spectrum_seeded(
    l: &LegendrianLoop,
    s: &Scenario,
    n_orbits: usize,
    n_iter: usize,
    seed: u64,
) -> Result<SpectrumReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<usize> = (0..n_orbits).map(|_| rng.gen_range(0..l.len().max(1))).collect();
    spectrum_from_starts(l, s, &starts, n_iter)
}

pub fn classify(r: &SpectrumReport, gap: f64) -> Classification {
    let t = r.tangential_exponent;
    let [hi, lo] = r.normal_exponents;
    let attract = (t - hi).min(-hi) - gap;
    let repel = (lo - t).min(lo) - gap;
    if attract > 0.0 {
        Classification {
            verdict: Verdict::NormallyAttracting,
            margin: attract,
        }
    } else if repel > 0.0 {
        Classification {
            verdict: Verdict::NormallyRepelling,
            margin: repel,
        }
    } else if hi > gap && lo < -gap {
        Classification {
            verdict: Verdict::ContactAnomaly,
            margin: hi.min(-lo) - gap,
        }
    } else {
        Classification {
            verdict: Verdict::NotNormallyHyperbolic,
            margin: attract.max(repel),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{lift_closed_curve, relax_to_invariant_loop, ClosedCurve};
    use crate::systems::{builtin_catalog, CatalogMap, Window};
    use std::f64::consts::PI;

    fn scenario(map: CatalogMap, eps: f64) -> Scenario {
        Scenario::catalog(map, eps, Window::square(2.0)).unwrap()
    }

    fn invariant_loop(s: &Scenario, h: f64) -> LegendrianLoop {
        let c = ClosedCurve::circle([0.0, 0.0], 1.0, 400).unwrap();
        let l0 = lift_closed_curve(&c, h).unwrap();
        relax_to_invariant_loop(&l0, s, 1e-7, 300).unwrap()
    }

    fn report(t: f64, a: f64, b: f64) -> SpectrumReport {
        SpectrumReport {
            tangential_exponent: t,
            normal_exponents: [a.max(b), a.min(b)],
            per_orbit_spread: 0.0,
            iterations_used: 100,
        }
    }

    fn radial_fixed_point(lambda: f64, a: f64, eps: f64) -> f64 {
        let mut r: f64 = 0.5;
        for _ in 0..200 {
            let g = r * (lambda + a * r * r) + eps - r;
            let dg = lambda + 3.0 * a * r * r - 1.0;
            r -= g / dg;
        }
        r
    }

    #[test]
    fn classify_examples() {
        let c = classify(&report(0.0, -0.69, -0.69), DEFAULT_GAP);
        assert_eq!(c.verdict, Verdict::NormallyAttracting);
        assert!((c.margin - 0.64).abs() < 1e-12);
        assert_eq!(classify(&report(0.0, 0.69, 0.69), DEFAULT_GAP).verdict, Verdict::NormallyRepelling);
        assert_eq!(classify(&report(0.0, 0.69, -0.69), DEFAULT_GAP).verdict, Verdict::ContactAnomaly);
        let weak = classify(&report(0.0, -0.02, -0.6), DEFAULT_GAP);
        assert_eq!(weak.verdict, Verdict::NotNormallyHyperbolic);
        assert!(weak.margin <= 0.0);
    }

    #[test]
    fn affine_rates_match_contraction() {
        for lambda in [0.3, 0.5, 0.7] {
            let s = scenario(CatalogMap::Affine { lambda }, 0.25 * (1.0 - lambda) / 0.5);
            let l = invariant_loop(&s, 0.01);
            let r = estimate_spectrum(&l, &s, 8, 100).unwrap();
            assert!(r.tangential_exponent.abs() <= 0.01, "{lambda}: {r:?}");
            for e in r.normal_exponents {
                assert!((e - lambda.ln()).abs() <= 0.01, "{lambda}: {r:?}");
            }
        }
    }

    #[test]
    fn rotation_rates_match_affine() {
        let s = scenario(CatalogMap::Rotation { lambda: 0.5, theta: PI / 5.0 }, 0.25);
        let l = invariant_loop(&s, 0.01);
        let r = estimate_spectrum(&l, &s, 8, 100).unwrap();
        assert!(r.tangential_exponent.abs() <= 0.01, "{r:?}");
        for e in r.normal_exponents {
            assert!((e - 0.5f64.ln()).abs() <= 0.01, "{r:?}");
        }
    }

    #[test]
    fn radial_rate_matches_scalar_derivative() {
        let s = scenario(CatalogMap::Radial { lambda: 0.5, a: 0.1 }, 0.25);
        let l = invariant_loop(&s, 0.01);
        let rs = radial_fixed_point(0.5, 0.1, 0.25);
        let oracle = (0.5 + 0.3 * rs * rs).ln();
        let r = estimate_spectrum(&l, &s, 8, 100).unwrap();
        assert!(r.tangential_exponent.abs() <= 0.01, "{r:?}");
        assert!(r.normal_exponents.iter().all(|e| *e < 0.0));
        let best = r
            .normal_exponents
            .iter()
            .map(|e| (e - oracle).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 0.02, "{r:?} vs {oracle}");
    }

    #[test]
    fn estimates_stable_under_longer_runs_and_reseeding() {
        let s = scenario(CatalogMap::Anisotropic { alpha: 0.4, beta: 0.6 }, 0.25);
        let l = invariant_loop(&s, 0.01);
        let a = estimate_spectrum(&l, &s, 6, 60).unwrap();
        let b = estimate_spectrum(&l, &s, 6, 120).unwrap();
        let c = estimate_spectrum_seeded(&l, &s, 6, 60, 17).unwrap();
        let spread = 2.0 * a.per_orbit_spread.max(b.per_orbit_spread).max(c.per_orbit_spread);
        let tol = spread.max(0.01);
        for other in [&b, &c] {
            assert!((a.tangential_exponent - other.tangential_exponent).abs() <= tol);
            for k in 0..2 {
                assert!((a.normal_exponents[k] - other.normal_exponents[k]).abs() <= tol);
            }
        }
    }

    #[test]
    fn rejects_non_invariant_loop_and_short_runs() {
        let s = scenario(CatalogMap::Affine { lambda: 0.5 }, 0.25);
        let c = ClosedCurve::circle([0.0, 0.0], 1.0, 200).unwrap();
        let l = lift_closed_curve(&c, 0.02).unwrap();
        assert!(matches!(estimate_spectrum(&l, &s, 4, 60), Err(Error::NotInvariantLoop(_))));
        let inv = invariant_loop(&s, 0.02);
        assert!(matches!(estimate_spectrum(&inv, &s, 4, 10), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn catalog_never_reports_contact_anomaly() {
        for (name, s) in builtin_catalog() {
            let l = invariant_loop(&s, 0.01);
            let r = estimate_spectrum(&l, &s, 6, 60).unwrap();
            let c = classify(&r, DEFAULT_GAP);
            assert_ne!(c.verdict, Verdict::ContactAnomaly, "{name}: {r:?}");
            assert_eq!(c.verdict, Verdict::NormallyAttracting, "{name}: {r:?}");
        }
    }

    #[test]
    fn attracting_loop_recaptures_perturbed_lift() {
        let s = scenario(CatalogMap::Affine { lambda: 0.5 }, 0.25);
        let l = invariant_loop(&s, 0.01);
        let c = classify(&estimate_spectrum(&l, &s, 6, 60).unwrap(), DEFAULT_GAP);
        assert_eq!(c.verdict, Verdict::NormallyAttracting);
        let bumped: Vec<[f64; 2]> = l
            .base
            .iter()
            .map(|p| {
                let a = p[1].atan2(p[0]);
                let k = 1.0 + 0.1 * (3.0 * a).cos();
                [p[0] * k, p[1] * k]
            })
            .collect();
        let l0 = lift_closed_curve(&ClosedCurve::new(bumped).unwrap(), 0.01).unwrap();
        let back = relax_to_invariant_loop(&l0, &s, 1e-7, 300).unwrap();
        let d = t1_hausdorff_distance(&back.points(), &l.points()).unwrap();
        assert!(d <= 1e-5, "{d}");
    }

    #[test]
    fn export_has_flat_fields() {
        let r = report(0.0, -0.69, -0.7);
        let e = SpectrumExport::new(&r, &classify(&r, DEFAULT_GAP));
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        for key in ["tangential", "normal", "spread", "iterations", "verdict", "margin"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "NormallyAttracting");
    }
}
