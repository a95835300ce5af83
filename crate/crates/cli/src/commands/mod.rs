// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! One module per subcommand. Each has a `compute` step that returns the
//! results in memory and helpers that turn them into a bundle.

pub mod cool;
pub mod modes;
pub mod profile;
pub mod sweep;
pub mod thermo;

use std::path::{Path, PathBuf};

use crate::config::{load, Loaded};
use crate::error::{CliError, Result};
use crate::output::{write_bundle, Table};

/// Files written, and the error to exit with if the results, though
/// written, failed an accuracy or regime check.
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub failure: Option<CliError>,
}

fn named<'a>(tables: &'a [(&'static str, Table)]) -> Vec<(&'static str, &'a Table)> {
    tables.iter().map(|(n, t)| (*n, t)).collect()
}

pub fn run_modes(cfg: &Loaded<modes::ModesConfig>, out: &Path) -> Result<Outcome> {
    let r = modes::compute(&cfg.config)?;
    let (m, p) = modes::tables(&r);
    let mut meta = modes::metadata(&cfg.config, cfg.source.label(), &r)?;
    let files = write_bundle(out, &[("modes.csv", &m), ("positions.csv", &p)], &mut meta)?;
    Ok(Outcome { files, failure: None })
}

pub fn run_profile(cfg: &Loaded<profile::ProfileConfig>, out: &Path) -> Result<Outcome> {
    let r = profile::compute(&cfg.config)?;
    let (p, t) = profile::tables(&r);
    let mut meta = profile::metadata(&cfg.config, cfg.source.label(), &r)?;
    let files = write_bundle(out, &[("profile.csv", &p), ("tones.csv", &t)], &mut meta)?;
    Ok(Outcome { files, failure: None })
}

pub fn run_sweep(cfg: &Loaded<sweep::SweepConfig>, out: &Path) -> Result<Outcome> {
    let points = sweep::compute(&cfg.config)?;
    let t = sweep::table(&points);
    let mut meta = sweep::metadata(&cfg.config, cfg.source.label(), &points)?;
    let files = write_bundle(out, &[("sweep.csv", &t)], &mut meta)?;
    Ok(Outcome { files, failure: None })
}

pub fn run_cool(cfg: &Loaded<cool::CoolConfig>, out: &Path) -> Result<Outcome> {
    let r = cool::compute(&cfg.config)?;
    let tables = cool::tables(&r);
    let mut meta = cool::metadata(&cfg.config, cfg.source.label(), &r)?;
    let files = write_bundle(out, &named(&tables), &mut meta)?;
    Ok(Outcome {
        files,
        failure: cool::failure(&r),
    })
}

pub fn run_thermo(cfg: &Loaded<thermo::ThermoConfig>, out: &Path) -> Result<Outcome> {
    let r = thermo::compute(&cfg.config, &cfg.source)?;
    let tables = thermo::tables(&r);
    let mut meta = thermo::metadata(&cfg.config, cfg.source.label(), &r)?;
    let files = write_bundle(out, &named(&tables), &mut meta)?;
    Ok(Outcome {
        files,
        failure: thermo::failure(&r),
    })
}

/// Loads the configuration for `command` and runs it.
pub fn dispatch(command: &str, config: Option<&Path>, preset: Option<&str>, out: &Path) -> Result<Outcome> {
    match command {
        "modes" => run_modes(&load(command, config, preset)?, out),
        "profile" => run_profile(&load(command, config, preset)?, out),
        "sweep" => run_sweep(&load(command, config, preset)?, out),
        "cool" => run_cool(&load(command, config, preset)?, out),
        "thermo" => run_thermo(&load(command, config, preset)?, out),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}
