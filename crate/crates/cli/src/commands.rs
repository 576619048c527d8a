use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use noisebound_core::front::{
    apply_boundary_map, detect_projection_singularities, equidistant_front, propagate_step,
    relax_to_invariant_loop_observed, LegendrianLoop, SingularityReport, DEFAULT_TAU,
};
use noisebound_core::hyperbolicity::{classify, estimate_spectrum_seeded, SpectrumExport, SpectrumReport, Verdict};
use noisebound_core::persistence::{initial_loop, run_persistence_experiment_with, PersistenceOptions};
use noisebound_core::setvalued::{minimal_invariant_set_report, MinimalityCertificate};
use noisebound_core::{Error, Result};
use serde::Serialize;

use crate::config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CERTIFICATE: i32 = 2;
pub const EXIT_ESCAPE: i32 = 3;
pub const EXIT_SINGULAR: i32 = 4;
pub const EXIT_NONCONVERGENT: i32 = 5;
pub const EXIT_ANOMALY: i32 = 6;
pub const EXIT_PARTIAL: i32 = 7;
pub const EXIT_BASE: i32 = 8;

/// Exit code for a pipeline error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CertificateFailed { .. } => EXIT_CERTIFICATE,
        Error::WindowEscape => EXIT_ESCAPE,
        Error::SingularFront(_) | Error::ContactDrift(_) => EXIT_SINGULAR,
        Error::NonConvergent(_) | Error::NoStabilization(_) => EXIT_NONCONVERGENT,
        Error::BaseNotAttracting(_) => EXIT_BASE,
        _ => EXIT_INPUT,
    }
}

/// Output directory plus file helpers.
pub struct Out {
    dir: PathBuf,
}

impl Out {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
        Ok(Out { dir: dir.to_path_buf() })
    }

    fn write(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let io = |e: std::io::Error| Error::InvalidInput(format!("{}: {e}", path.display()));
        let mut w = BufWriter::new(File::create(&path).map_err(io)?);
        f(&mut w).and_then(|_| w.flush()).map_err(io)
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("plain data serializes");
        self.write(name, |w| writeln!(w, "{text}"))
    }

    fn loop_csv(&self, k: usize, l: &LegendrianLoop) -> Result<()> {
        self.write(&format!("loop_{k:04}.csv"), |w| l.write_csv(w))
    }
}

#[derive(Serialize)]
struct CertificateFile<'a> {
    cells: usize,
    h: f64,
    seed: u64,
    #[serde(flatten)]
    certificate: &'a MinimalityCertificate,
}

#[derive(Serialize)]
struct SingularityFile<'a> {
    step: usize,
    singular: bool,
    #[serde(flatten)]
    report: &'a SingularityReport,
}

pub fn cmd_minimal_set(cfg: &RunConfig, out: &Out) -> Result<i32> {
    let s = cfg.scenario()?;
    let grid = cfg.grid(&s)?;
    let (m, cert) = minimal_invariant_set_report(&s, &grid, cfg.n_seeds, cfg.seed)?;
    out.write("boxset.csv", |w| m.write_csv(w))?;
    out.json(
        "certificate.json",
        &CertificateFile {
            cells: m.len(),
            h: grid.cell,
            seed: cfg.seed,
            certificate: &cert,
        },
    )?;
    Ok(if cert.passed { EXIT_OK } else { EXIT_CERTIFICATE })
}

fn write_singularity(out: &Out, step: usize, report: &SingularityReport) -> Result<()> {
    out.json(
        "singularity.json",
        &SingularityFile {
            step,
            singular: report.is_singular(),
            report,
        },
    )
}

/// Singularity report of the step that failed from `last`.
fn failed_step_report(out: &Out, s: &noisebound_core::Scenario, last: &LegendrianLoop, step: usize) -> Result<()> {
    let mapped = apply_boundary_map(last, s)?;
    write_singularity(out, step, &detect_projection_singularities(&mapped, DEFAULT_TAU))
}

pub fn cmd_boundary_flow(cfg: &RunConfig, out: &Out, steps: usize, relax: bool) -> Result<i32> {
    let s = cfg.scenario()?;
    let l0 = cfg.initial_loop()?;
    out.loop_csv(0, &l0)?;
    let mut last = (0, l0.clone());
    let result = if relax {
        let mut io_error = None;
        let r = relax_to_invariant_loop_observed(&l0, &s, cfg.tolerances.relax, cfg.max_iter, |k, l| {
            if io_error.is_none() {
                io_error = out.loop_csv(k, l).err();
            }
            last = (k, l.clone());
        });
        if let Some(e) = io_error {
            return Err(e);
        }
        r.map(|r| r.fixed_loop)
    } else {
        (1..=steps).try_fold(l0.clone(), |cur, k| {
            let next = propagate_step(&cur, &s)?;
            out.loop_csv(k, &next)?;
            last = (k, next.clone());
            Ok(next)
        })
    };
    match result {
        Ok(l) => {
            write_singularity(out, last.0, &detect_projection_singularities(&l, DEFAULT_TAU))?;
            Ok(EXIT_OK)
        }
        Err(e @ (Error::SingularFront(_) | Error::ContactDrift(_))) => {
            failed_step_report(out, &s, &last.1, last.0 + 1)?;
            eprintln!("error: {e}");
            Ok(EXIT_SINGULAR)
        }
        Err(e) => Err(e),
    }
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &Out, injected: Option<&Path>) -> Result<i32> {
    let report: SpectrumReport = match injected {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?
        }
        None => {
            let s = cfg.scenario()?;
            let l0 = match cfg.curve {
                Some(_) => cfg.initial_loop()?,
                None => initial_loop(&s, cfg.h_front)?,
            };
            let l = relax_to_invariant_loop_observed(&l0, &s, cfg.tolerances.relax, cfg.max_iter, |_, _| {})?
                .fixed_loop;
            estimate_spectrum_seeded(&l, &s, cfg.n_orbits, cfg.n_iter, cfg.seed)?
        }
    };
    let c = classify(&report, cfg.tolerances.gap);
    out.json("spectrum.json", &SpectrumExport::new(&report, &c))?;
    Ok(if c.verdict == Verdict::ContactAnomaly { EXIT_ANOMALY } else { EXIT_OK })
}

pub fn cmd_persist(cfg: &RunConfig, out: &Out, deltas: &[f64]) -> Result<i32> {
    let s = cfg.scenario()?;
    let fam = cfg.family(s)?;
    if deltas.is_empty() {
        return Err(Error::InvalidInput("no deltas given".into()));
    }
    let opts = PersistenceOptions {
        h_front: cfg.h_front,
        max_iter: cfg.max_iter,
        n_orbits: cfg.n_orbits,
        n_iter: cfg.n_iter,
        gap: cfg.tolerances.gap,
        seed: cfg.seed,
    };
    let table = run_persistence_experiment_with(&fam, deltas, cfg.tolerances.relax, &opts)?;
    out.write("persistence.csv", |w| table.write_csv(w))?;
    Ok(if table.all_converged() { EXIT_OK } else { EXIT_PARTIAL })
}

pub fn cmd_equidistant(cfg: &RunConfig, out: &Out, offset: f64) -> Result<i32> {
    let c = cfg.curve()?;
    let (front, report) = equidistant_front(&c, offset, cfg.h_front)?;
    out.write("curve.csv", |w| front.write_csv(w))?;
    write_singularity(out, 0, &report)?;
    Ok(if report.is_singular() { EXIT_SINGULAR } else { EXIT_OK })
}
