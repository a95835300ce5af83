// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Run configurations. Every physical key names its unit: `_mhz` is 2π·MHz,
//! `_wz` is a multiple of the axial frequency ω_z, `_nm`, `_amu`, `_deg` as
//! usual. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use peit_core::modes::{Axis, TrapFrequencies};
use peit_core::rates::{driving_rabi_for_stark_shift, AtomParams, LaserTone};
use peit_core::units::{self, from_mhz};

use crate::error::{CliError, Result};
use crate::presets;

/// Where a configuration came from; relative file references resolve
/// against it.
#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Preset(&'static str),
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Preset(n) => format!("preset:{n}"),
        }
    }

    /// Reads a file named in the configuration.
    pub fn read_relative(&self, name: &str) -> Result<String> {
        match self {
            Source::File(p) => {
                let path = p.parent().unwrap_or(Path::new(".")).join(name);
                std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
            }
            Source::Preset(_) => presets::asset(name)
                .map(str::to_string)
                .ok_or_else(|| CliError::Config(format!("preset asset `{name}` not found"))),
        }
    }
}

pub struct Loaded<T> {
    pub config: T,
    pub source: Source,
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(toml::from_str(text)?)
}

/// Loads `--config` or `--preset` for `command`; exactly one must be given.
pub fn load<T: DeserializeOwned>(command: &str, path: Option<&Path>, preset: Option<&str>) -> Result<Loaded<T>> {
    match (path, preset) {
        (Some(p), None) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            Ok(Loaded {
                config: parse(&text)?,
                source: Source::File(p.to_path_buf()),
            })
        }
        (None, Some(name)) => {
            let p = presets::find(name, command)?;
            Ok(Loaded {
                config: parse(p.text)?,
                source: Source::Preset(p.name),
            })
        }
        _ => Err(CliError::Config("give exactly one of --config and --preset".into())),
    }
}

pub(crate) fn check(ok: bool, msg: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(msg.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfig {
    pub axial_mhz: f64,
    pub x_mhz: f64,
    pub y_mhz: f64,
}

impl TrapConfig {
    pub fn frequencies(&self) -> TrapFrequencies {
        TrapFrequencies::from_mhz(self.axial_mhz, self.x_mhz, self.y_mhz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Self {
        match a {
            AxisName::X => Axis::X,
            AxisName::Y => Axis::Y,
            AxisName::Z => Axis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub gamma_mhz: f64,
    pub alpha: f64,
}

impl AtomConfig {
    pub fn params(&self) -> AtomParams {
        AtomParams::new(from_mhz(self.gamma_mhz)).with_alpha(self.alpha)
    }
}

/// The driving beam, specified by the light shift it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrivingConfig {
    pub detuning_mhz: f64,
    pub ac_stark_mhz: f64,
}

impl DrivingConfig {
    pub fn tone(&self) -> LaserTone {
        let (d, s) = (from_mhz(self.detuning_mhz), from_mhz(self.ac_stark_mhz));
        LaserTone::new(driving_rabi_for_stark_shift(s, d), d)
    }
}

/// Evenly spaced grid including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start_mhz: f64,
    pub stop_mhz: f64,
    pub points: usize,
}

impl GridConfig {
    /// Grid values in rad/µs.
    pub fn values(&self) -> Result<Vec<f64>> {
        check(self.points >= 2, "grid needs at least two points")?;
        check(self.stop_mhz > self.start_mhz, "grid stop must exceed start")?;
        let step = (self.stop_mhz - self.start_mhz) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| from_mhz(self.start_mhz + step * i as f64))
            .collect())
    }
}

/// Ion mass in kg from atomic mass units.
pub fn mass_kg(mass_amu: f64) -> f64 {
    mass_amu * units::ATOMIC_MASS_UNIT
}

/// Wavevector 2π/λ in rad/µm.
pub fn wavevector(wavelength_nm: f64) -> f64 {
    units::TWO_PI / (wavelength_nm * 1e-3)
}
