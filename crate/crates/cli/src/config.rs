use std::path::{Path, PathBuf};

use noisebound_core::front::{lift_closed_curve, ClosedCurve, LegendrianLoop};
use noisebound_core::setvalued::{Grid, DEFAULT_N_SEEDS};
use noisebound_core::systems::{validate_scenario, FamilyKind, PerturbationFamily, Scenario, ScenarioConfig};
use noisebound_core::{Error, Result};
use serde::Deserialize;

/// Scenario samples checked before any pipeline runs.
const VALIDATION_SAMPLES: usize = 400;

fn default_h() -> f64 {
    0.005
}

fn default_steps() -> usize {
    10
}

fn default_max_iter() -> usize {
    500
}

fn default_n_seeds() -> usize {
    DEFAULT_N_SEEDS
}

fn default_n_orbits() -> usize {
    8
}

fn default_n_iter() -> usize {
    100
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "Tolerances::default_relax")]
    pub relax: f64,
    #[serde(default = "Tolerances::default_gap")]
    pub gap: f64,
}

impl Tolerances {
    fn default_relax() -> f64 {
        1e-6
    }

    fn default_gap() -> f64 {
        0.05
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            relax: Self::default_relax(),
            gap: Self::default_gap(),
        }
    }
}

/// Initial curve for the front pipelines.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    Ellipse {
        center: [f64; 2],
        a: f64,
        b: f64,
    },
    /// `r(φ) = radius · (1 + Σ c_k cos(k φ))` for `harmonics = [[k, c_k], ...]`.
    Polar {
        center: [f64; 2],
        radius: f64,
        harmonics: Vec<(u32, f64)>,
    },
    /// CSV with `x` and `y` columns, one vertex per row, counterclockwise.
    Csv {
        path: PathBuf,
    },
}

impl CurveSpec {
    pub fn build(&self, h: f64, base_dir: &Path) -> Result<ClosedCurve> {
        // polygon fine enough that the resampled lift sees a smooth curve
        let count = |len: f64| ((4.0 * len / h).ceil() as usize).max(64);
        match self {
            CurveSpec::Circle { center, radius } => {
                ClosedCurve::circle(*center, *radius, count(std::f64::consts::TAU * radius))
            }
            CurveSpec::Ellipse { center, a, b } => {
                let len = std::f64::consts::PI * (3.0 * (a + b) - ((3.0 * a + b) * (a + 3.0 * b)).sqrt());
                ClosedCurve::ellipse(*center, *a, *b, count(len))
            }
            CurveSpec::Polar {
                center,
                radius,
                harmonics,
            } => {
                let rmax = radius * (1.0 + harmonics.iter().map(|(_, c)| c.abs()).sum::<f64>());
                let kmax = harmonics.iter().map(|(k, _)| *k).max().unwrap_or(1).max(1) as f64;
                let n = count(std::f64::consts::TAU * rmax * kmax);
                let v = (0..n)
                    .map(|i| {
                        let t = std::f64::consts::TAU * i as f64 / n as f64;
                        let r = radius
                            * (1.0 + harmonics.iter().map(|(k, c)| c * (*k as f64 * t).cos()).sum::<f64>());
                        [center[0] + r * t.cos(), center[1] + r * t.sin()]
                    })
                    .collect();
                ClosedCurve::new(v)
            }
            CurveSpec::Csv { path } => {
                let path = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                ClosedCurve::new(read_xy_csv(&path)?)
            }
        }
    }
}

fn read_xy_csv(path: &Path) -> Result<Vec<[f64; 2]>> {
    let bad = |e: &dyn std::fmt::Display| Error::InvalidInput(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(&e))?;
    let headers = r.headers().map_err(|e| bad(&e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| bad(&format!("missing column {name}")))
    };
    let (ix, iy) = (col("x")?, col("y")?);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(&e))?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|e| bad(&e))
        };
        out.push([field(ix)?, field(iy)?]);
    }
    Ok(out)
}

/// Everything a subcommand may need; only `scenario` is mandatory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    #[serde(default = "default_h")]
    pub h_box: f64,
    #[serde(default = "default_h")]
    pub h_front: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_n_seeds")]
    pub n_seeds: usize,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub relax: bool,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_n_orbits")]
    pub n_orbits: usize,
    #[serde(default = "default_n_iter")]
    pub n_iter: usize,
    #[serde(default)]
    pub family: Option<FamilyKind>,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub offset: Option<f64>,
    /// Directory for resolving relative paths inside the config.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("h_box", self.h_box),
            ("h_front", self.h_front),
            ("tolerances.relax", t.relax),
            ("tolerances.gap", t.gap),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let s = Scenario::from_config(&self.scenario)?;
        validate_scenario(&s, VALIDATION_SAMPLES)?;
        Ok(s)
    }

    pub fn grid(&self, s: &Scenario) -> Result<Grid> {
        Grid::new(s.window.clone(), self.h_box)
    }

    pub fn curve(&self) -> Result<ClosedCurve> {
        self.curve
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("config has no curve".into()))?
            .build(self.h_front, &self.base_dir)
    }

    pub fn initial_loop(&self) -> Result<LegendrianLoop> {
        lift_closed_curve(&self.curve()?, self.h_front)
    }

    pub fn family(&self, s: Scenario) -> Result<PerturbationFamily> {
        let kind = self
            .family
            .clone()
            .ok_or_else(|| Error::InvalidInput("config has no perturbation family".into()))?;
        Ok(PerturbationFamily::new(s, kind))
    }
}
