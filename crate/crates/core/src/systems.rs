//! Scenarios `(f, ε)`: the diffeomorphism, its Jacobian and inverse, the noise
//! radius and the working window.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, Point};

/// Round-trip tolerance `‖f(f⁻¹(y)) − y‖` and `‖f⁻¹(f(x)) − x‖`.
pub const ROUND_TRIP_TOL: f64 = 1e-9;
/// Smallest admissible `|det f′|`.
pub const MIN_ABS_DET: f64 = 1e-10;
/// Relative agreement between closed-form and finite-difference Jacobians.
pub const JACOBIAN_FD_TOL: f64 = 1e-5;
/// Newton iteration cap for inverse evaluation.
pub const NEWTON_MAX_ITER: usize = 100;

/// A smooth map `ℝ^d → ℝ^d`. Closed-form Jacobian and inverse are optional;
/// callers fall back to central differences and damped Newton iteration.
pub trait SmoothMap: Send + Sync + fmt::Debug {
    fn forward(&self, x: &[f64], out: &mut [f64]);

    /// Writes `f′(x)` row-major into `out` and returns `true`, or returns
    /// `false` when no closed form is available.
    fn jacobian(&self, _x: &[f64], _out: &mut [f64]) -> bool {
        false
    }

    /// Writes `f⁻¹(y)` into `out` and returns `true`, or `false` when no
    /// closed form is available.
    fn inverse(&self, _y: &[f64], _out: &mut [f64]) -> bool {
        false
    }
}

/// The builtin map catalog. Serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum CatalogMap {
    /// `f(x) = λx` in any dimension.
    Affine { lambda: f64 },
    /// `f(x) = λ R_θ x`.
    Rotation { lambda: f64, theta: f64 },
    /// `f(x) = diag(α, β) x`.
    Anisotropic { alpha: f64, beta: f64 },
    /// `f(x) = x (λ + a‖x‖²)`.
    Radial { lambda: f64, a: f64 },
    /// `f(x) = base(x) + δ (x₂², 0) β(‖x‖)` with a smooth bump `β` equal to 1
    /// inside `bump_inner` and 0 outside `bump_outer`.
    Shear {
        base: Box<CatalogMap>,
        delta: f64,
        #[serde(default = "default_bump_inner")]
        bump_inner: f64,
        #[serde(default = "default_bump_outer")]
        bump_outer: f64,
    },
}

fn default_bump_inner() -> f64 {
    3.0
}

fn default_bump_outer() -> f64 {
    6.0
}

impl CatalogMap {
    fn planar_only(&self) -> bool {
        !matches!(self, CatalogMap::Affine { .. })
    }

    fn check(&self, dimension: usize) -> Result<()> {
        if self.planar_only() && dimension != 2 {
            return Err(Error::InvalidInput(format!(
                "map {self:?} is only defined for dimension 2"
            )));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        let ok = match self {
            CatalogMap::Affine { lambda } => finite(&[*lambda]) && *lambda != 0.0,
            CatalogMap::Rotation { lambda, theta } => finite(&[*lambda, *theta]) && *lambda != 0.0,
            CatalogMap::Anisotropic { alpha, beta } => {
                finite(&[*alpha, *beta]) && *alpha != 0.0 && *beta != 0.0
            }
            CatalogMap::Radial { lambda, a } => finite(&[*lambda, *a]) && *lambda > 0.0 && *a >= 0.0,
            CatalogMap::Shear {
                base,
                delta,
                bump_inner,
                bump_outer,
            } => {
                base.check(dimension)?;
                finite(&[*delta, *bump_inner, *bump_outer]) && 0.0 < *bump_inner && bump_inner < bump_outer
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("bad parameters for map {self:?}")))
        }
    }
}

fn smooth_step_psi(s: f64) -> (f64, f64) {
    // ψ(s) = exp(-1/s) and its derivative
    if s <= 0.0 {
        (0.0, 0.0)
    } else {
        let p = (-1.0 / s).exp();
        (p, p / (s * s))
    }
}

/// Smooth bump on the radius: value and derivative.
fn bump(r: f64, inner: f64, outer: f64) -> (f64, f64) {
    if r <= inner {
        return (1.0, 0.0);
    }
    if r >= outer {
        return (0.0, 0.0);
    }
    let w = outer - inner;
    let t = (r - inner) / w;
    let (u, du) = smooth_step_psi(1.0 - t);
    let (v, dv) = smooth_step_psi(t);
    let s = u + v;
    let val = u / s;
    // d/dt: u' = -ψ'(1-t), v' = ψ'(t)
    let dval = (-du * v - u * dv) / (s * s);
    (val, dval / w)
}

fn radial_inverse_radius(lambda: f64, a: f64, rp: f64) -> f64 {
    if a == 0.0 {
        return rp / lambda;
    }
    // a r³ + λ r − r' = 0 has a single real root for λ > 0 (Cardano)
    let p = lambda / a;
    let q = rp / a;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut r = (q / 2.0 + disc).cbrt() + (q / 2.0 - disc).cbrt();
    for _ in 0..3 {
        let g = a * r * r * r + lambda * r - rp;
        let dg = 3.0 * a * r * r + lambda;
        r -= g / dg;
    }
    r
}

impl SmoothMap for CatalogMap {
    fn forward(&self, x: &[f64], out: &mut [f64]) {
        match self {
            CatalogMap::Affine { lambda } => {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = lambda * xi;
                }
            }
            CatalogMap::Rotation { lambda, theta } => {
                let (s, c) = theta.sin_cos();
                out[0] = lambda * (c * x[0] - s * x[1]);
                out[1] = lambda * (s * x[0] + c * x[1]);
            }
            CatalogMap::Anisotropic { alpha, beta } => {
                out[0] = alpha * x[0];
                out[1] = beta * x[1];
            }
            CatalogMap::Radial { lambda, a } => {
                let g = lambda + a * (x[0] * x[0] + x[1] * x[1]);
                out[0] = g * x[0];
                out[1] = g * x[1];
            }
            CatalogMap::Shear {
                base,
                delta,
                bump_inner,
                bump_outer,
            } => {
                base.forward(x, out);
                let (b, _) = bump(norm(x), *bump_inner, *bump_outer);
                out[0] += delta * x[1] * x[1] * b;
            }
        }
    }

    fn jacobian(&self, x: &[f64], out: &mut [f64]) -> bool {
        match self {
            CatalogMap::Affine { lambda } => {
                let d = x.len();
                out.iter_mut().for_each(|v| *v = 0.0);
                for i in 0..d {
                    out[i * d + i] = *lambda;
                }
            }
            CatalogMap::Rotation { lambda, theta } => {
                let (s, c) = theta.sin_cos();
                out.copy_from_slice(&[lambda * c, -lambda * s, lambda * s, lambda * c]);
            }
            CatalogMap::Anisotropic { alpha, beta } => {
                out.copy_from_slice(&[*alpha, 0.0, 0.0, *beta]);
            }
            CatalogMap::Radial { lambda, a } => {
                let g = lambda + a * (x[0] * x[0] + x[1] * x[1]);
                out[0] = g + 2.0 * a * x[0] * x[0];
                out[1] = 2.0 * a * x[0] * x[1];
                out[2] = out[1];
                out[3] = g + 2.0 * a * x[1] * x[1];
            }
            CatalogMap::Shear {
                base,
                delta,
                bump_inner,
                bump_outer,
            } => {
                if !base.jacobian(x, out) {
                    return false;
                }
                let r = norm(x);
                let (b, db) = bump(r, *bump_inner, *bump_outer);
                let (dr0, dr1) = if r > 0.0 { (x[0] / r, x[1] / r) } else { (0.0, 0.0) };
                let y2 = x[1] * x[1];
                out[0] += delta * y2 * db * dr0;
                out[1] += delta * (2.0 * x[1] * b + y2 * db * dr1);
            }
        }
        true
    }

    fn inverse(&self, y: &[f64], out: &mut [f64]) -> bool {
        match self {
            CatalogMap::Affine { lambda } => {
                for (o, yi) in out.iter_mut().zip(y) {
                    *o = yi / lambda;
                }
            }
            CatalogMap::Rotation { lambda, theta } => {
                let (s, c) = theta.sin_cos();
                out[0] = (c * y[0] + s * y[1]) / lambda;
                out[1] = (-s * y[0] + c * y[1]) / lambda;
            }
            CatalogMap::Anisotropic { alpha, beta } => {
                out[0] = y[0] / alpha;
                out[1] = y[1] / beta;
            }
            CatalogMap::Radial { lambda, a } => {
                let rp = norm(y);
                if rp == 0.0 {
                    out[0] = 0.0;
                    out[1] = 0.0;
                } else {
                    let r = radial_inverse_radius(*lambda, *a, rp);
                    out[0] = y[0] * r / rp;
                    out[1] = y[1] * r / rp;
                }
            }
            CatalogMap::Shear { .. } => return false,
        }
        true
    }
}

/// The diffeomorphism of a scenario.
#[derive(Debug, Clone)]
pub struct DiffeoSpec {
    pub dimension: usize,
    pub map: Arc<dyn SmoothMap>,
    /// Catalog description when the map came from the builtin catalog.
    pub catalog: Option<CatalogMap>,
}

impl DiffeoSpec {
    pub fn catalog(dimension: usize, map: CatalogMap) -> Result<Self> {
        map.check(dimension)?;
        Ok(DiffeoSpec {
            dimension,
            map: Arc::new(map.clone()),
            catalog: Some(map),
        })
    }

    pub fn custom(dimension: usize, map: Arc<dyn SmoothMap>) -> Self {
        DiffeoSpec {
            dimension,
            map,
            catalog: None,
        }
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn square(half: f64) -> Self {
        Window {
            lo: vec![-half, -half],
            hi: vec![half, half],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (a + b) / 2.0).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *a <= *v && *v <= *b)
    }
}

/// `(f, ε)` on a working window.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub diffeo: DiffeoSpec,
    pub epsilon: f64,
    pub window: Window,
}

/// JSON form of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub dimension: usize,
    pub map: CatalogMap,
    pub epsilon: f64,
    pub window: Window,
}

impl Scenario {
    pub fn new(diffeo: DiffeoSpec, epsilon: f64, window: Window) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
        }
        if window.lo.len() != diffeo.dimension || window.hi.len() != diffeo.dimension {
            return Err(Error::DimensionMismatch(diffeo.dimension, window.lo.len()));
        }
        if window
            .lo
            .iter()
            .zip(&window.hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidInput("degenerate window".into()));
        }
        Ok(Scenario {
            diffeo,
            epsilon,
            window,
        })
    }

    /// Builtin catalog scenario.
    pub fn catalog(map: CatalogMap, epsilon: f64, window: Window) -> Result<Self> {
        let d = window.dim();
        Scenario::new(DiffeoSpec::catalog(d, map)?, epsilon, window)
    }

    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        Scenario::new(
            DiffeoSpec::catalog(cfg.dimension, cfg.map.clone())?,
            cfg.epsilon,
            cfg.window.clone(),
        )
    }

    pub fn to_config(&self) -> Option<ScenarioConfig> {
        self.diffeo.catalog.as_ref().map(|m| ScenarioConfig {
            dimension: self.diffeo.dimension,
            map: m.clone(),
            epsilon: self.epsilon,
            window: self.window.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.diffeo.dimension
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), x.len()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `f(x)` into `out` (no allocation).
    pub fn forward_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.diffeo.map.forward(x, out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `f′(x)` row-major into `out`; closed form when available, else
    /// central differences with step `1e−6·(1 + ‖x‖)`. No singularity check.
    pub fn jacobian_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        if !self.diffeo.map.jacobian(x, out) {
            finite_difference_jacobian(self, x, out)?;
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn eval_forward(&self, x: &Point) -> Result<Point> {
        self.check_len(x.coords())?;
        let mut out = vec![0.0; self.dim()];
        self.forward_into(x.coords(), &mut out)?;
        Point::new(out)
    }

    pub fn eval_jacobian(&self, x: &Point) -> Result<DMatrix<f64>> {
        self.check_len(x.coords())?;
        let d = self.dim();
        let mut buf = vec![0.0; d * d];
        self.jacobian_into(x.coords(), &mut buf)?;
        let m = DMatrix::from_row_slice(d, d, &buf);
        let det = m.determinant();
        if det.abs() < MIN_ABS_DET {
            return Err(Error::SingularJacobian(det.abs()));
        }
        Ok(m)
    }

    /// `f⁻¹(y)` into `out`: closed form if the map has one, else damped
    /// Newton iteration from `y`.
    pub fn inverse_into(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        if self.diffeo.map.inverse(y, out) {
            if out.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            return Ok(());
        }
        newton_inverse(self, y, out)
    }

    pub fn eval_inverse(&self, y: &Point) -> Result<Point> {
        self.check_len(y.coords())?;
        let mut out = vec![0.0; self.dim()];
        self.inverse_into(y.coords(), &mut out)?;
        let mut back = vec![0.0; self.dim()];
        self.forward_into(&out, &mut back)?;
        if dist(&back, y.coords()) > ROUND_TRIP_TOL * (1.0 + norm(y.coords())) {
            return Err(Error::NoConvergence(NEWTON_MAX_ITER));
        }
        Point::new(out)
    }
}

fn finite_difference_jacobian(s: &Scenario, x: &[f64], out: &mut [f64]) -> Result<()> {
    let d = x.len();
    let h = 1e-6 * (1.0 + norm(x));
    let mut xp = x.to_vec();
    let mut fp = vec![0.0; d];
    let mut fm = vec![0.0; d];
    for j in 0..d {
        xp[j] = x[j] + h;
        s.diffeo.map.forward(&xp, &mut fp);
        xp[j] = x[j] - h;
        s.diffeo.map.forward(&xp, &mut fm);
        xp[j] = x[j];
        for i in 0..d {
            out[i * d + j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(())
}

fn newton_inverse(s: &Scenario, y: &[f64], out: &mut [f64]) -> Result<()> {
    let d = y.len();
    let mut x = y.to_vec();
    let mut fx = vec![0.0; d];
    let mut jac = vec![0.0; d * d];
    let mut trial = vec![0.0; d];
    let mut ftrial = vec![0.0; d];
    s.forward_into(&x, &mut fx)?;
    let mut res = dist(&fx, y);
    let scale = 1.0 + norm(y);
    for _ in 0..NEWTON_MAX_ITER {
        if res <= 1e-14 * scale {
            out.copy_from_slice(&x);
            return Ok(());
        }
        s.jacobian_into(&x, &mut jac)?;
        let m = DMatrix::from_row_slice(d, d, &jac);
        let rhs = nalgebra::DVector::from_iterator(d, fx.iter().zip(y).map(|(a, b)| a - b));
        let step = m.lu().solve(&rhs).ok_or(Error::SingularJacobian(0.0))?;
        let mut t = 1.0;
        let mut accepted = false;
        // halve the step while the residual grows
        for _ in 0..30 {
            for k in 0..d {
                trial[k] = x[k] - t * step[k];
            }
            s.diffeo.map.forward(&trial, &mut ftrial);
            let r = dist(&ftrial, y);
            if r.is_finite() && r < res {
                x.copy_from_slice(&trial);
                fx.copy_from_slice(&ftrial);
                res = r;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res <= ROUND_TRIP_TOL * scale {
        out.copy_from_slice(&x);
        Ok(())
    } else {
        Err(Error::NoConvergence(NEWTON_MAX_ITER))
    }
}

/// Summary of the diffeomorphism checks on a window lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub max_round_trip_error: f64,
    pub min_abs_det: f64,
    pub det_sign_constant: bool,
    pub max_jacobian_fd_discrepancy: f64,
    pub passed: bool,
}

/// Samples the window on a cell-centered lattice of about `samples` points
/// and checks that `f` behaves like a diffeomorphism there.
pub fn validate_scenario(s: &Scenario, samples: usize) -> Result<ValidationReport> {
    if samples < 100 {
        return Err(Error::InvalidInput("validation needs at least 100 samples".into()));
    }
    let d = s.dim();
    let per_axis = ((samples as f64).powf(1.0 / d as f64).ceil() as usize).max(2);
    let total = per_axis.pow(d as u32);
    let mut x = vec![0.0; d];
    let mut fx = vec![0.0; d];
    let mut back = vec![0.0; d];
    let mut jac = vec![0.0; d * d];
    let mut fd = vec![0.0; d * d];
    let mut max_rt: f64 = 0.0;
    let mut min_det = f64::INFINITY;
    let mut sign: Option<bool> = None;
    let mut sign_constant = true;
    let mut max_fd: f64 = 0.0;
    // first violation per check, reported in check order
    let mut failures: [Option<String>; 4] = Default::default();
    let mut fail = |check: usize, msg: String| {
        if failures[check].is_none() {
            failures[check] = Some(msg);
        }
    };
    for flat in 0..total {
        let mut rem = flat;
        for k in 0..d {
            let idx = rem % per_axis;
            rem /= per_axis;
            let (a, b) = (s.window.lo[k], s.window.hi[k]);
            x[k] = a + (idx as f64 + 0.5) * (b - a) / per_axis as f64;
        }
        s.jacobian_into(&x, &mut jac)?;
        let det = DMatrix::from_row_slice(d, d, &jac).determinant();
        min_det = min_det.min(det.abs());
        if det.abs() < MIN_ABS_DET {
            fail(0, format!("|det f'| = {:e} below {MIN_ABS_DET:e} at {x:?}", det.abs()));
        }
        let positive = det > 0.0;
        match sign {
            None => sign = Some(positive),
            Some(sg) if sg != positive => {
                sign_constant = false;
                fail(1, format!("det f' changes sign at {x:?}"));
            }
            _ => {}
        }
        s.forward_into(&x, &mut fx)?;
        let rt = match s.inverse_into(&fx, &mut back) {
            Ok(()) => dist(&back, &x),
            Err(_) => f64::INFINITY,
        };
        max_rt = max_rt.max(rt);
        if !(rt <= ROUND_TRIP_TOL) {
            fail(2, format!("round trip error {rt:e} at {x:?}"));
        }
        finite_difference_jacobian(s, &x, &mut fd)?;
        let scale = jac.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let disc = jac
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).abs() / a.abs().max(scale))
            .fold(0.0, f64::max);
        max_fd = max_fd.max(disc);
        if disc > JACOBIAN_FD_TOL {
            fail(3, format!("Jacobian differs from finite differences by {disc:e} at {x:?}"));
        }
    }
    let report = ValidationReport {
        samples: total,
        max_round_trip_error: max_rt,
        min_abs_det: min_det,
        det_sign_constant: sign_constant,
        max_jacobian_fd_discrepancy: max_fd,
        passed: failures.iter().all(Option::is_none),
    };
    match failures.into_iter().flatten().next() {
        None => Ok(report),
        Some(msg) => Err(Error::ValidationFailed(msg)),
    }
}

/// How a perturbation parameter `δ` enters a base scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `ε ↦ ε + δ`.
    Epsilon,
    /// `f ↦ f + δ (x₂², 0)` cut off by a smooth bump.
    Shear {
        #[serde(default = "default_bump_inner")]
        bump_inner: f64,
        #[serde(default = "default_bump_outer")]
        bump_outer: f64,
    },
    /// Linear contraction rates shifted by `δ` (λ for affine, rotation and
    /// radial maps; both α and β for anisotropic ones).
    Lambda,
}

/// A one-parameter family of scenarios through a base scenario.
#[derive(Debug, Clone)]
pub struct PerturbationFamily {
    pub base: Scenario,
    pub kind: FamilyKind,
}

impl PerturbationFamily {
    pub fn new(base: Scenario, kind: FamilyKind) -> Self {
        PerturbationFamily { base, kind }
    }

    pub fn perturbed(&self, delta: f64) -> Result<Scenario> {
        if delta == 0.0 {
            return Ok(self.base.clone());
        }
        let catalog = || {
            self.base.diffeo.catalog.clone().ok_or_else(|| {
                Error::InvalidInput("map perturbations need a catalog base map".into())
            })
        };
        match self.kind {
            FamilyKind::Epsilon => Scenario::new(
                self.base.diffeo.clone(),
                self.base.epsilon + delta,
                self.base.window.clone(),
            ),
            FamilyKind::Shear {
                bump_inner,
                bump_outer,
            } => Scenario::catalog(
                CatalogMap::Shear {
                    base: Box::new(catalog()?),
                    delta,
                    bump_inner,
                    bump_outer,
                },
                self.base.epsilon,
                self.base.window.clone(),
            ),
            FamilyKind::Lambda => {
                let shifted = match catalog()? {
                    CatalogMap::Affine { lambda } => CatalogMap::Affine {
                        lambda: lambda + delta,
                    },
                    CatalogMap::Rotation { lambda, theta } => CatalogMap::Rotation {
                        lambda: lambda + delta,
                        theta,
                    },
                    CatalogMap::Anisotropic { alpha, beta } => CatalogMap::Anisotropic {
                        alpha: alpha + delta,
                        beta: beta + delta,
                    },
                    CatalogMap::Radial { lambda, a } => CatalogMap::Radial {
                        lambda: lambda + delta,
                        a,
                    },
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "lambda family undefined for {other:?}"
                        )))
                    }
                };
                Scenario::catalog(shifted, self.base.epsilon, self.base.window.clone())
            }
        }
    }
}

/// Named builtin scenarios used by tests, benches and the dichotomy audit.
pub fn builtin_catalog() -> Vec<(&'static str, Scenario)> {
    let w = Window::square(2.0);
    let mk = |map: CatalogMap, eps: f64| Scenario::catalog(map, eps, w.clone()).expect("catalog");
    vec![
        ("affine", mk(CatalogMap::Affine { lambda: 0.5 }, 0.25)),
        ("affine_strong", mk(CatalogMap::Affine { lambda: 0.3 }, 0.1)),
        (
            "rotation",
            mk(
                CatalogMap::Rotation {
                    lambda: 0.5,
                    theta: PI / 5.0,
                },
                0.25,
            ),
        ),
        (
            "rotation_slow",
            mk(
                CatalogMap::Rotation {
                    lambda: 0.6,
                    theta: 0.3,
                },
                0.15,
            ),
        ),
        (
            "anisotropic",
            mk(
                CatalogMap::Anisotropic {
                    alpha: 0.4,
                    beta: 0.6,
                },
                0.25,
            ),
        ),
        ("radial", mk(CatalogMap::Radial { lambda: 0.5, a: 0.1 }, 0.25)),
        (
            "shear",
            mk(
                CatalogMap::Shear {
                    base: Box::new(CatalogMap::Affine { lambda: 0.5 }),
                    delta: 0.1,
                    bump_inner: default_bump_inner(),
                    bump_outer: default_bump_outer(),
                },
                0.25,
            ),
        ),
    ]
}
