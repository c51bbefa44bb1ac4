//! Command-line harness: scenario execution, calibration, analysis, and
//! golden comparison. Exit codes: 0 success, 2 config error, 3 engine
//! error, 4 calibration non-convergence, 5 golden mismatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use greema_sim::config::{parse_config, ScenarioConfig};
use greema_sim::error::SimError;
use greema_sim::harness::analyze::{parse_analyze_config, run_analysis};
use greema_sim::harness::calibrate::calibrate_to_dir;
use greema_sim::harness::golden::compare_golden;
use greema_sim::harness::run_scenario;

#[derive(Parser)]
#[command(name = "greema", version, about = "Growing-robot simulator harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a swim scenario (with or without material, per the config).
    Swim(RunArgs),
    /// Run a soil-uptake experiment.
    Soil(RunArgs),
    /// Run the stiffness sweep grid.
    Stiffness(RunArgs),
    /// Fit model parameters from a targets file.
    Calibrate {
        /// Calibration targets JSON.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for the fitted parameter file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Derive speeds and fin angles from exported marker tracks.
    Analyze {
        /// Analysis config JSON.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a run directory against a golden directory.
    Compare {
        /// Run directory (the candidate).
        #[arg(long)]
        out: PathBuf,
        /// Golden directory (the reference).
        #[arg(long)]
        golden: PathBuf,
    },
}

fn load_run_config(args: &RunArgs, expect_swim: Option<bool>) -> Result<ScenarioConfig, SimError> {
    let mut cfg = parse_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = Some(out.clone());
    }
    if let Some(want_swim) = expect_swim {
        if cfg.kind.is_swim() != want_swim {
            return Err(SimError::Config(format!(
                "config kind {} does not match this subcommand",
                cfg.kind
            )));
        }
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), SimError> {
    match cli.command {
        Command::Swim(args) => {
            let cfg = load_run_config(&args, Some(true))?;
            let manifest = run_scenario(&cfg)?;
            println!(
                "swim {} done: {} artifacts, seed {}",
                cfg.kind,
                manifest.outputs.len(),
                manifest.seed
            );
            Ok(())
        }
        Command::Soil(args) => {
            let cfg = load_run_config(&args, Some(false))?;
            if cfg.kind != greema_sim::config::ScenarioKind::SoilUptake {
                return Err(SimError::Config(format!(
                    "config kind {} does not match this subcommand",
                    cfg.kind
                )));
            }
            let manifest = run_scenario(&cfg)?;
            println!(
                "soil uptake done: {} artifacts, seed {}",
                manifest.outputs.len(),
                manifest.seed
            );
            Ok(())
        }
        Command::Stiffness(args) => {
            let cfg = load_run_config(&args, Some(false))?;
            if cfg.kind != greema_sim::config::ScenarioKind::StiffnessSweep {
                return Err(SimError::Config(format!(
                    "config kind {} does not match this subcommand",
                    cfg.kind
                )));
            }
            let manifest = run_scenario(&cfg)?;
            println!(
                "stiffness sweep done: {} artifacts",
                manifest.outputs.len()
            );
            Ok(())
        }
        Command::Calibrate { config, out } => {
            let manifest = calibrate_to_dir(&config, &out)?;
            println!(
                "calibration done: params in {}",
                out.join("params.json").display()
            );
            let _ = manifest;
            Ok(())
        }
        Command::Analyze { config, out } => {
            let cfg = parse_analyze_config(&config)?;
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .ok_or_else(|| SimError::Config("analyze needs --out or output_dir".into()))?;
            let manifest = run_analysis(&cfg, &out_dir)?;
            println!("analysis done: {} artifacts", manifest.outputs.len());
            Ok(())
        }
        Command::Compare { out, golden } => {
            let report = compare_golden(&out, &golden)?;
            print!("{report}");
            if report.passed {
                Ok(())
            } else {
                Err(SimError::GoldenMismatch("see report above".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
