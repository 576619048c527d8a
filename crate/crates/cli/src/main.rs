//! `noisebound`: box coverings, boundary-map fronts, spectra and persistence
//! tables for planar set-valued maps with bounded noise.
//!
//! Exit codes: 0 success, 1 bad config or input, 2 minimality certificate
//! failed, 3 covering escaped the window, 4 singular front, 5 relaxation did
//! not converge, 6 contact anomaly, 7 some persistence rows did not converge,
//! 8 base loop not normally attracting.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Out, EXIT_INPUT};
use config::RunConfig;

#[derive(Parser)]
#[command(name = "noisebound", version, about = "Set-valued dynamics with bounded noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Box covering of the minimal invariant set with a seed certificate.
    MinimalSet {
        #[command(flatten)]
        common: Common,
    },
    /// Boundary-map steps (or relaxation) of a lifted initial curve.
    BoundaryFlow {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "relax")]
        steps: Option<usize>,
        /// Iterate until the loop stops moving.
        #[arg(long)]
        relax: bool,
    },
    /// Growth rates and classification at the relaxed invariant loop.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Classify a stored spectrum instead of computing one.
        #[arg(long, hide = true)]
        inject_report: Option<PathBuf>,
    },
    /// Persistence table over a perturbation family.
    Persist {
        #[command(flatten)]
        common: Common,
        /// Comma-separated perturbation sizes.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        deltas: Option<Vec<f64>>,
    },
    /// Signed equidistant of the configured curve.
    Equidistant {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        offset: Option<f64>,
    },
}

fn load(common: &Common) -> noisebound_core::Result<(RunConfig, Out)> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    let out = Out::new(&common.out)?;
    Ok((cfg, out))
}

fn run(command: Command) -> noisebound_core::Result<i32> {
    match command {
        Command::MinimalSet { common } => {
            let (cfg, out) = load(&common)?;
            commands::cmd_minimal_set(&cfg, &out)
        }
        Command::BoundaryFlow { common, steps, relax } => {
            let (cfg, out) = load(&common)?;
            let relax = relax || (cfg.relax && steps.is_none());
            commands::cmd_boundary_flow(&cfg, &out, steps.unwrap_or(cfg.steps), relax)
        }
        Command::Spectrum { common, inject_report } => {
            let (cfg, out) = load(&common)?;
            commands::cmd_spectrum(&cfg, &out, inject_report.as_deref())
        }
        Command::Persist { common, deltas } => {
            let (cfg, out) = load(&common)?;
            let deltas = deltas.unwrap_or_else(|| cfg.deltas.clone());
            commands::cmd_persist(&cfg, &out, &deltas)
        }
        Command::Equidistant { common, offset } => {
            let (cfg, out) = load(&common)?;
            let offset = offset.or(cfg.offset).ok_or_else(|| {
                noisebound_core::Error::InvalidInput("no offset given".into())
            })?;
            commands::cmd_equidistant(&cfg, &out, offset)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            commands::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
