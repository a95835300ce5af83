// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::{Deserialize, Serialize};
use serde_json::json;

use peit_core::rates::{sweep_mode_frequency, EtaRule, RateReport, SweepPoint, SweepSettings};
use peit_core::units::{from_mhz, to_mhz};

use crate::config::{check, AtomConfig, DrivingConfig, GridConfig};
use crate::error::{CliError, Result};
use crate::output::{Cell, Metadata, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub probe_rabi_mhz: f64,
    /// η = eta_at_1mhz/√(ω/2π·MHz); give this or `eta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_at_1mhz: Option<f64>,
    /// Constant η.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    pub atom: AtomConfig,
    pub driving: DrivingConfig,
    /// Mode frequency ω.
    pub grid: GridConfig,
}

impl SweepConfig {
    pub fn eta_rule(&self) -> Result<EtaRule> {
        match (self.eta_at_1mhz, self.eta) {
            (Some(e), None) => Ok(EtaRule::InverseSqrt { eta_at_1mhz: e }),
            (None, Some(e)) => Ok(EtaRule::Constant { eta: e }),
            _ => Err(CliError::Config("give exactly one of eta_at_1mhz and eta".into())),
        }
    }

    pub fn settings(&self) -> Result<SweepSettings> {
        Ok(SweepSettings {
            ac_stark: from_mhz(self.driving.ac_stark_mhz),
            driving_detuning: from_mhz(self.driving.detuning_mhz),
            probe_rabi: from_mhz(self.probe_rabi_mhz),
            eta_rule: self.eta_rule()?,
        })
    }
}

pub fn compute(cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    check(cfg.probe_rabi_mhz > 0.0, "probe_rabi_mhz must be positive")?;
    check(cfg.grid.start_mhz > 0.0, "mode frequencies must be positive")?;
    Ok(sweep_mode_frequency(
        &cfg.grid.values()?,
        &cfg.settings()?,
        &cfg.atom.params(),
    )?)
}

fn cells(r: Option<&RateReport>) -> [Cell; 4] {
    match r {
        Some(r) => [r.a_plus.into(), r.a_minus.into(), r.w.into(), r.n_ss.into()],
        None => [Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
    }
}

/// `sweep.csv`; n_ss is empty where the mode heats.
pub fn table(points: &[SweepPoint]) -> Table {
    let mut t = Table::new([
        "mode_frequency_mhz",
        "eta",
        "parallel_probe_detuning_mhz",
        "parallel_a_plus_per_us",
        "parallel_a_minus_per_us",
        "parallel_w_per_us",
        "parallel_n_ss",
        "eit_a_plus_per_us",
        "eit_a_minus_per_us",
        "eit_w_per_us",
        "eit_n_ss",
    ]);
    for p in points {
        let mut row = vec![to_mhz(p.omega).into(), p.eta.into(), to_mhz(p.parallel_detuning).into()];
        row.extend(cells(p.parallel.as_ref()));
        row.extend(cells(p.eit.as_ref()));
        t.push(row);
    }
    t
}

pub fn metadata(cfg: &SweepConfig, source: String, points: &[SweepPoint]) -> Result<Metadata> {
    let mut meta = Metadata::new("sweep", source, cfg)?;
    meta.resolved = json!({
        "driving_rabi_mhz": to_mhz(cfg.driving.tone().rabi),
        "eit_probe_detuning_mhz": cfg.driving.detuning_mhz,
    });
    meta.decisions = vec![
        "parallel-EIT probe on Δ_g = Δ_r + δ_ac − ω; EIT probe on Δ_g = Δ_r".into(),
        "η split as η_g = η_r = η/2 with counter-propagating projections".into(),
    ];
    meta.warnings = points
        .iter()
        .filter(|p| p.parallel.is_none() || p.eit.is_none())
        .map(|p| format!("rates undefined at ω = {} MHz", to_mhz(p.omega)))
        .collect();
    Ok(meta)
}
