//! `superint` - run and verify superintegrable-system claims from the
//! command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 singularity abort,
//! 4 step underflow, 5 verification-check failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use superint_core::preset;

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "superint",
    about = "Superintegrable Hamiltonian families: simulate trajectories and verify their constants of motion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and emit trajectory.csv + summary.json
    Simulate {
        /// JSON run configuration
        #[arg(long)]
        config: Option<PathBuf>,
        /// Built-in configuration (sw-isotropic, ttw-k2, pw-k1, kepler-circular, vb-12)
        #[arg(long)]
        preset: Option<String>,
        /// Override the configured seed
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: the configured one, or "out")
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured checks (drift, bracket, phase_rotation, rank) and
    /// emit report.json; exits 0 iff everything passes
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the algebraic identities (a)-(f) at seeded random points
    Identities {
        /// Random points per identity
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replicate a configuration over a parameter grid and emit sweep.csv
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(config: Option<PathBuf>, preset_name: Option<&String>) -> Result<RunConfig, CliError> {
    match (config, preset_name) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "--config and --preset are mutually exclusive".into(),
        )),
        (Some(path), None) => RunConfig::load(&path),
        (None, Some(name)) => {
            let p = preset(name)
                .ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?;
            Ok(RunConfig::from_preset(&p))
        }
        (None, None) => Err(CliError::Config("need --config or --preset".into())),
    }
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, preset, seed, out } => {
            let mut cfg = load(config, preset.as_ref())?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            cfg.output_dir = Some(out_dir.clone());
            commands::cmd_simulate(&cfg, preset, &out_dir)
        }
        Command::Verify { config, preset, seed, out } => {
            let mut cfg = load(config, preset.as_ref())?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            cfg.output_dir = Some(out_dir.clone());
            commands::cmd_verify(&cfg, &out_dir)
        }
        Command::Identities { samples, seed, out } => {
            let out_dir = out.unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_identities(samples, seed, &out_dir)
        }
        Command::Sweep { config, seed, out } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            cfg.output_dir = Some(out_dir.clone());
            commands::cmd_sweep(&cfg, &out_dir)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("superint: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
