// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use peit_cli::commands::dispatch;
use peit_cli::presets::PRESETS;
use peit_cli::CliError;

#[derive(Parser)]
#[command(name = "peit", version, about = "Parallel-EIT cooling and sideband thermometry")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration (see `peit presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "peit-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium positions, normal modes and Lamb-Dicke factors of a chain.
    Modes(RunArgs),
    /// Steady-state absorption profile versus probe detuning.
    Profile(RunArgs),
    /// Analytic parallel-EIT and EIT rates over the mode frequency.
    Sweep(RunArgs),
    /// Master-equation cooling run with exponential fits.
    Cool(RunArgs),
    /// Sideband-thermometry correction factors or a trace estimate.
    Thermo(RunArgs),
    /// List built-in presets, or print one.
    Presets { name: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    let (name, args) = match cli.command {
        Command::Modes(a) => ("modes", a),
        Command::Profile(a) => ("profile", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Cool(a) => ("cool", a),
        Command::Thermo(a) => ("thermo", a),
        Command::Presets { name } => return presets(name.as_deref()),
    };
    match dispatch(name, args.config.as_deref(), args.preset.as_deref(), &args.out) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(e) => fail(&e),
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn presets(name: Option<&str>) -> ExitCode {
    match name {
        None => {
            for p in PRESETS {
                println!("{:<14} {}", p.name, p.command);
            }
            ExitCode::SUCCESS
        }
        Some(n) => match PRESETS.iter().find(|p| p.name == n) {
            Some(p) => {
                print!("{}", p.text);
                ExitCode::SUCCESS
            }
            None => fail(&CliError::Config(format!("unknown preset `{n}`"))),
        },
    }
}
