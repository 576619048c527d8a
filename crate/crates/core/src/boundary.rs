//! The boundary map `E(x, n) = (f(x) + ε w, w)`, `w = f′(x)^{-T} n / ‖·‖`, on
//! the unit tangent bundle, its inverse, and chart differentials.

use nalgebra::{DMatrix, DVector, Matrix3};

use crate::error::{Error, Result};
use crate::geometry::{dot, normalize, wrap_angle, Direction, Point, TangentPoint};
use crate::systems::{Scenario, MIN_ABS_DET};

/// Default central-difference step in the `(x₁, x₂, θ)` chart.
pub const DEFAULT_CHART_STEP: f64 = 1e-6;

/// A point, its image under `E`, and `dE` in the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryJet {
    pub point: TangentPoint,
    pub image: TangentPoint,
    pub differential: Matrix3<f64>,
}

fn jacobian(s: &Scenario, x: &[f64]) -> Result<DMatrix<f64>> {
    let d = x.len();
    let mut buf = vec![0.0; d * d];
    s.jacobian_into(x, &mut buf)?;
    Ok(DMatrix::from_row_slice(d, d, &buf))
}

/// Solves `Jᵀ w = n` and normalizes `w`.
fn transpose_solve(j: &DMatrix<f64>, n: &[f64]) -> Result<Direction> {
    let d = n.len();
    if d == 2 {
        let det = j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)];
        if det.abs() < MIN_ABS_DET {
            return Err(Error::SingularJacobian(det.abs()));
        }
        // Jᵀ = [[a, c], [b, d]]
        let w = [
            (j[(1, 1)] * n[0] - j[(1, 0)] * n[1]) / det,
            (-j[(0, 1)] * n[0] + j[(0, 0)] * n[1]) / det,
        ];
        return normalize(&w);
    }
    let lu = j.transpose().lu();
    let det = lu.determinant();
    if det.abs() < MIN_ABS_DET {
        return Err(Error::SingularJacobian(det.abs()));
    }
    let w = lu
        .solve(&DVector::from_column_slice(n))
        .ok_or(Error::SingularJacobian(det.abs()))?;
    normalize(w.as_slice())
}

fn check(p: &TangentPoint, s: &Scenario) -> Result<()> {
    if p.dim() != s.dim() {
        return Err(Error::DimensionMismatch(s.dim(), p.dim()));
    }
    Ok(())
}

/// `h_f(x, n) = (f(x), f′(x)^{-T} n / ‖·‖)`.
pub fn h_f(p: &TangentPoint, s: &Scenario) -> Result<TangentPoint> {
    check(p, s)?;
    let x = p.base.coords();
    let j = jacobian(s, x)?;
    let w = transpose_solve(&j, p.normal.components())?;
    let mut fx = vec![0.0; x.len()];
    s.forward_into(x, &mut fx)?;
    TangentPoint::new(Point::new(fx)?, w)
}

/// Time-`t` geodesic flow `φ_t(x, n) = (x + t n, n)`.
pub fn phi(p: &TangentPoint, t: f64) -> Result<TangentPoint> {
    let y: Vec<f64> = p
        .base
        .coords()
        .iter()
        .zip(p.normal.components())
        .map(|(x, n)| x + t * n)
        .collect();
    TangentPoint::new(Point::new(y)?, p.normal.clone())
}

/// `E(x, n)`, evaluated directly from the defining formula.
pub fn boundary_map(p: &TangentPoint, s: &Scenario) -> Result<TangentPoint> {
    check(p, s)?;
    let x = p.base.coords();
    let j = jacobian(s, x)?;
    let w = transpose_solve(&j, p.normal.components())?;
    let mut y = vec![0.0; x.len()];
    s.forward_into(x, &mut y)?;
    for (yi, wi) in y.iter_mut().zip(w.components()) {
        *yi += s.epsilon * wi;
    }
    TangentPoint::new(Point::new(y)?, w)
}

/// `E⁻¹(x, n) = (f⁻¹(x − εn), f′(f⁻¹(x − εn))ᵀ n / ‖·‖)`.
pub fn boundary_map_inverse(q: &TangentPoint, s: &Scenario) -> Result<TangentPoint> {
    check(q, s)?;
    let z: Vec<f64> = q
        .base
        .coords()
        .iter()
        .zip(q.normal.components())
        .map(|(x, n)| x - s.epsilon * n)
        .collect();
    let y = s.eval_inverse(&Point::new(z)?)?;
    let j = jacobian(s, y.coords())?;
    let det = j.determinant();
    if det.abs() < MIN_ABS_DET {
        return Err(Error::SingularJacobian(det.abs()));
    }
    let v = j.transpose() * DVector::from_column_slice(q.normal.components());
    TangentPoint::new(y, normalize(v.as_slice())?)
}

/// Planar `E` without allocation: `(x, n) ↦ (y, w)`.
pub fn boundary_map_planar(x: [f64; 2], n: [f64; 2], s: &Scenario) -> Result<([f64; 2], [f64; 2])> {
    let mut j = [0.0; 4];
    s.jacobian_into(&x, &mut j)?;
    let det = j[0] * j[3] - j[1] * j[2];
    if det.abs() < MIN_ABS_DET {
        return Err(Error::SingularJacobian(det.abs()));
    }
    let w = [(j[3] * n[0] - j[2] * n[1]) / det, (-j[1] * n[0] + j[0] * n[1]) / det];
    let len = w[0].hypot(w[1]);
    if !(len >= crate::geometry::MIN_DIRECTION_NORM) {
        return Err(Error::DegenerateDirection(len));
    }
    let w = [w[0] / len, w[1] / len];
    let mut y = [0.0; 2];
    s.forward_into(&x, &mut y)?;
    Ok(([y[0] + s.epsilon * w[0], y[1] + s.epsilon * w[1]], w))
}

/// Chart coordinates `(x₁, x₂, θ)` of a planar tangent point.
pub fn to_chart(p: &TangentPoint) -> Result<[f64; 3]> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(2, p.dim()));
    }
    let [x, y] = p.base.planar();
    Ok([x, y, p.normal.angle()])
}

pub fn from_chart(c: [f64; 3]) -> TangentPoint {
    TangentPoint::planar(c[0], c[1], c[2])
}

/// Central-difference differential of a chart map at `c`, with the angular
/// component of differences wrapped to `(−π, π]`.
pub fn chart_differential(
    map: impl Fn([f64; 3]) -> Result<[f64; 3]>,
    c: [f64; 3],
    h: f64,
) -> Result<Matrix3<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    let mut m = Matrix3::zeros();
    for k in 0..3 {
        let mut cp = c;
        let mut cm = c;
        cp[k] += h;
        cm[k] -= h;
        let a = map(cp)?;
        let b = map(cm)?;
        m[(0, k)] = (a[0] - b[0]) / (2.0 * h);
        m[(1, k)] = (a[1] - b[1]) / (2.0 * h);
        m[(2, k)] = wrap_angle(a[2] - b[2]) / (2.0 * h);
    }
    Ok(m)
}

/// `E` as a chart map.
pub fn boundary_map_chart(c: [f64; 3], s: &Scenario) -> Result<[f64; 3]> {
    let (y, w) = boundary_map_planar([c[0], c[1]], [c[2].cos(), c[2].sin()], s)?;
    Ok([y[0], y[1], w[1].atan2(w[0])])
}

/// `dE` at `p` in the `(x₁, x₂, θ)` chart, by central differences.
pub fn boundary_map_differential(p: &TangentPoint, s: &Scenario, h: f64) -> Result<Matrix3<f64>> {
    let c = to_chart(p)?;
    chart_differential(|q| boundary_map_chart(q, s), c, h)
}

pub fn boundary_jet(p: &TangentPoint, s: &Scenario) -> Result<BoundaryJet> {
    Ok(BoundaryJet {
        point: p.clone(),
        image: boundary_map(p, s)?,
        differential: boundary_map_differential(p, s, DEFAULT_CHART_STEP)?,
    })
}

/// Liouville form `a_p(v) = ⟨n, v_x⟩`; `v` is a chart vector whose first
/// `d` entries are the base component.
pub fn liouville_eval(p: &TangentPoint, v: &[f64]) -> f64 {
    let n = p.normal.components();
    dot(n, &v[..n.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;
    use crate::systems::{builtin_catalog, CatalogMap, Window};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scen(map: CatalogMap, eps: f64) -> Scenario {
        Scenario::catalog(map, eps, Window::square(2.0)).unwrap()
    }

    fn tp(x: f64, y: f64, nx: f64, ny: f64) -> TangentPoint {
        TangentPoint::new(Point::xy(x, y), normalize(&[nx, ny]).unwrap()).unwrap()
    }

    fn close(a: &TangentPoint, b: &TangentPoint, tol: f64) -> bool {
        dist(&a.stacked(), &b.stacked()) <= tol
    }

    fn random_tp(rng: &mut ChaCha8Rng, r: f64) -> TangentPoint {
        TangentPoint::planar(
            rng.gen_range(-r..r),
            rng.gen_range(-r..r),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        )
    }

    #[test]
    fn boundary_map_examples() {
        let a = scen(CatalogMap::Affine { lambda: 0.5 }, 0.25);
        let p = tp(0.5, 0.0, 1.0, 0.0);
        assert!(close(&boundary_map(&p, &a).unwrap(), &p, 1e-15));
        let d = scen(CatalogMap::Anisotropic { alpha: 2.0, beta: 0.5 }, 1.0);
        let q = boundary_map(&tp(1.0, 1.0, 1.0, 0.0), &d).unwrap();
        assert!(close(&q, &tp(3.0, 0.5, 1.0, 0.0), 1e-15));
        let q = boundary_map(&tp(1.0, 1.0, 0.0, 1.0), &d).unwrap();
        assert!(close(&q, &tp(2.0, 1.5, 0.0, 1.0), 1e-15));
    }

    #[test]
    fn inverse_examples() {
        let a = scen(CatalogMap::Affine { lambda: 0.5 }, 0.25);
        let p = tp(0.5, 0.0, 1.0, 0.0);
        assert!(close(&boundary_map_inverse(&p, &a).unwrap(), &p, 1e-15));
        let q = boundary_map_inverse(&tp(1.0, 0.0, 1.0, 0.0), &a).unwrap();
        assert!(close(&q, &tp(1.5, 0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn inverse_round_trips_on_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (name, s) in builtin_catalog() {
            let mut worst: f64 = 0.0;
            for _ in 0..2000 {
                let p = random_tp(&mut rng, 1.5);
                let fwd = boundary_map_inverse(&boundary_map(&p, &s).unwrap(), &s).unwrap();
                let bwd = boundary_map(&boundary_map_inverse(&p, &s).unwrap(), &s).unwrap();
                worst = worst
                    .max(dist(&fwd.stacked(), &p.stacked()))
                    .max(dist(&bwd.stacked(), &p.stacked()));
            }
            assert!(worst <= 1e-10, "{name}: {worst:e}");
        }
    }

    #[test]
    fn decomposition_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (name, s) in builtin_catalog() {
            for _ in 0..500 {
                let p = random_tp(&mut rng, 1.8);
                let direct = boundary_map(&p, &s).unwrap();
                let composed = phi(&h_f(&p, &s).unwrap(), s.epsilon).unwrap();
                assert!(close(&direct, &composed, 1e-12), "{name}");
                let (y, w) = boundary_map_planar(p.base.planar(), p.normal.planar(), &s).unwrap();
                assert!(dist(&[y[0], y[1], w[0], w[1]], &direct.stacked()) <= 1e-12);
            }
        }
    }

    #[test]
    fn general_dimension_evaluation() {
        let s = Scenario::catalog(
            CatalogMap::Affine { lambda: 0.5 },
            0.25,
            Window {
                lo: vec![-2.0; 3],
                hi: vec![2.0; 3],
            },
        )
        .unwrap();
        let p = TangentPoint::new(
            Point::new(vec![0.0, 0.5, 0.0]).unwrap(),
            normalize(&[0.0, 1.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert!(close(&boundary_map(&p, &s).unwrap(), &p, 1e-15));
        assert!(close(&boundary_map_inverse(&p, &s).unwrap(), &p, 1e-15));
    }

    #[test]
    fn affine_chart_differential() {
        let a = scen(CatalogMap::Affine { lambda: 0.5 }, 0.25);
        let m = boundary_map_differential(&TangentPoint::planar(0.5, 0.0, 0.0), &a, 1e-6).unwrap();
        let expect = Matrix3::new(0.5, 0.0, 0.0, 0.0, 0.5, 0.25, 0.0, 0.0, 1.0);
        assert!((m - expect).abs().max() <= 1e-5, "{m}");
        let mut ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 0.5).abs() < 1e-5 && (ev[1] - 0.5).abs() < 1e-5 && (ev[2] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn differential_preserves_contact_planes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (name, s) in builtin_catalog() {
            for _ in 0..100 {
                let p = random_tp(&mut rng, 1.5);
                let n = p.normal.planar();
                // a_p(v) = 0: v spanned by the tangent direction and ∂θ
                let (t, th) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let v = nalgebra::Vector3::new(-n[1] * t, n[0] * t, th);
                assert!(liouville_eval(&p, v.as_slice()).abs() < 1e-15);
                let dv = boundary_map_differential(&p, &s, 1e-6).unwrap() * v;
                let img = boundary_map(&p, &s).unwrap();
                let r = liouville_eval(&img, dv.as_slice()).abs();
                assert!(r <= 1e-6 * v.norm(), "{name}: {r:e}");
            }
        }
    }

    #[test]
    fn conformal_contact_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (name, s) in builtin_catalog() {
            for _ in 0..100 {
                let p = random_tp(&mut rng, 1.5);
                let c = to_chart(&p).unwrap();
                let dh = chart_differential(
                    |q| {
                        let img = h_f(&from_chart(q), &s)?;
                        to_chart(&img)
                    },
                    c,
                    1e-6,
                )
                .unwrap();
                let v = nalgebra::Vector3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                let img = h_f(&p, &s).unwrap();
                let lhs = liouville_eval(&img, (dh * v).as_slice());
                // ‖f′(x)^{-T} n‖ from an independent inverse-matrix route
                let j = s.eval_jacobian(&p.base).unwrap();
                let w = j.transpose().try_inverse().unwrap()
                    * nalgebra::DVector::from_column_slice(p.normal.components());
                let rhs = liouville_eval(&p, v.as_slice()) / w.norm();
                assert!((lhs - rhs).abs() <= 1e-5 * rhs.abs().max(1e-3), "{name}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn chain_rule_for_second_iterate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, s) in builtin_catalog() {
            for _ in 0..50 {
                let p = random_tp(&mut rng, 1.2);
                let c = to_chart(&p).unwrap();
                let d2 = chart_differential(
                    |q| {
                        let a = boundary_map_chart(q, &s)?;
                        boundary_map_chart(a, &s)
                    },
                    c,
                    1e-6,
                )
                .unwrap();
                let e1 = boundary_map(&p, &s).unwrap();
                let prod = boundary_map_differential(&e1, &s, 1e-6).unwrap()
                    * boundary_map_differential(&p, &s, 1e-6).unwrap();
                let scale = prod.abs().max().max(1.0);
                assert!((d2 - prod).abs().max() <= 1e-4 * scale, "{name}");
            }
        }
    }

    #[test]
    fn liouville_examples() {
        let p = tp(0.0, 0.0, 1.0, 0.0);
        assert_eq!(liouville_eval(&p, &[0.0, 1.0, 7.0]), 0.0);
        assert_eq!(liouville_eval(&p, &[1.0, 0.0, 0.0]), 1.0);
        let q = tp(0.0, 0.0, 0.6, 0.8);
        assert!((liouville_eval(&q, &[1.0, 1.0, 0.0]) - 1.4).abs() < 1e-15);
    }

    #[test]
    fn singular_jacobian_is_reported() {
        let s = scen(CatalogMap::Anisotropic { alpha: 1e-6, beta: 1e-6 }, 0.1);
        assert!(matches!(
            boundary_map(&tp(0.0, 0.0, 1.0, 0.0), &s),
            Err(Error::SingularJacobian(_))
        ));
    }
}
