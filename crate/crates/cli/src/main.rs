//! `grapespin` command-line front end.

mod config;
mod error;
mod mie;
mod odmr;
mod plot;
mod size;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "grapespin",
    version,
    about = "NV ODMR simulation, dielectric-sphere resonances and spectrum fitting"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat TOML file of `key = value` settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(
        long,
        global = true,
        env = "GRAPESPIN_OUT_DIR",
        default_value = "grapespin-out"
    )]
    out: PathBuf,
    /// Seed for any random noise.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override a config key, e.g. `--set pump_rate=1.2e7`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulated and fitted ODMR spectra.
    #[command(subcommand)]
    Odmr(OdmrCommand),
    /// Resonances and fields of a dielectric sphere.
    #[command(subcommand)]
    Mie(MieCommand),
    /// Semi-minor axis of an ellipse whose perimeter matches a resonance.
    SizeGrapes,
}

#[derive(Subcommand)]
enum OdmrCommand {
    /// One spectrum CSV per drive strength plus an overlay plot.
    Simulate {
        /// `steady-state` or an integrator name (backward-euler, tr-bdf2).
        #[arg(long)]
        method: Option<String>,
    },
    /// Double-Lorentzian fit of a `frequency_hz,pl` file.
    Fit {
        input: PathBuf,
        /// levenberg-marquardt or gauss-newton.
        #[arg(long)]
        solver: Option<String>,
    },
}

#[derive(Subcommand)]
enum MieCommand {
    /// Table of resonant size parameters and radii.
    Resonances {
        /// golden-section or brent.
        #[arg(long)]
        refiner: Option<String>,
    },
    /// |E| and |H| cross-sections at each order's resonance.
    Fieldmap {
        #[arg(long)]
        refiner: Option<String>,
    },
}

pub(crate) fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn run(cli: Cli) -> CliResult<Vec<PathBuf>> {
    let mut config = RunConfig::load(cli.common.config.as_deref(), &cli.common.overrides)?;
    let out = cli.common.out;
    std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    let mut choose = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            config.set(key, v);
        }
    };
    match cli.command {
        Command::Odmr(OdmrCommand::Simulate { method }) => {
            choose("method", method);
            odmr::simulate(&config, &out, cli.common.seed)
        }
        Command::Odmr(OdmrCommand::Fit { input, solver }) => {
            choose("solver", solver);
            odmr::fit(&config, &input, &out)
        }
        Command::Mie(MieCommand::Resonances { refiner }) => {
            choose("refiner", refiner);
            mie::resonances(&config, &out)
        }
        Command::Mie(MieCommand::Fieldmap { refiner }) => {
            choose("refiner", refiner);
            mie::fieldmap(&config, &out)
        }
        Command::SizeGrapes => size::size_grapes(&config, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
