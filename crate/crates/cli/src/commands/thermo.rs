// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::{Deserialize, Serialize};
use serde_json::json;

use peit_core::modes::{axial_modes, transverse_modes, Axis, ChainConfig};
use peit_core::thermometry::{
    correction_factor, estimate_from_traces, CorrectionFactor, Readout, ThermometrySetup, TraceEstimate,
};
use peit_core::units::{from_mhz, to_mhz};

use crate::config::{check, mass_kg, wavevector, AxisName, Source, TrapConfig};
use crate::error::{CliError, Result};
use crate::hygiene;
use crate::output::{Metadata, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutName {
    AnyIon,
    MeanExcitation,
}

impl From<ReadoutName> for Readout {
    fn from(r: ReadoutName) -> Self {
        match r {
            ReadoutName::AnyIon => Readout::AnyIon,
            ReadoutName::MeanExcitation => Readout::MeanExcitation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConfig {
    pub ions: usize,
    pub axes: Vec<AxisName>,
    pub wavelength_nm: f64,
    /// Ion mass.
    pub mass_amu: f64,
    /// Carrier Rabi frequency Ω of the probe transition.
    pub rabi_mhz: f64,
    pub readout: ReadoutName,
    pub nbar_grid: Vec<f64>,
    /// Also compute the factor of a lone ion in the same trap.
    pub single_ion_check: bool,
    pub trap: TrapConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    /// CSV files with columns time_us, excitation.
    pub blue_csv: String,
    pub red_csv: String,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThermoConfig {
    Table(TableConfig),
    Trace(TraceConfig),
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorRow {
    pub axis: &'static str,
    pub ions: usize,
    pub mode: usize,
    pub frequency: f64,
    pub factor: CorrectionFactor,
}

pub enum ThermoResult {
    Table(Vec<FactorRow>),
    Trace(TraceEstimate),
}

fn factors_for(chain: &ChainConfig, axis: Axis, cfg: &TableConfig) -> Result<Vec<FactorRow>> {
    let modes = if axis == Axis::Z {
        axial_modes(chain)?
    } else {
        transverse_modes(chain, axis)?
    };
    let nbar_max = cfg.nbar_grid.iter().copied().fold(0.0, f64::max);
    let mut rows = Vec::new();
    for k in 0..modes.mode_count() {
        let mut s = ThermometrySetup::from_modes(
            &modes,
            k,
            wavevector(cfg.wavelength_nm),
            chain.mass,
            from_mhz(cfg.rabi_mhz),
            nbar_max,
        )?;
        s.readout = cfg.readout.into();
        if chain.ion_count == 1 {
            s.mode_label = "single".into();
        }
        rows.push(FactorRow {
            axis: axis.name(),
            ions: chain.ion_count,
            mode: k,
            frequency: modes.frequencies[k],
            factor: correction_factor(&s, &cfg.nbar_grid)?,
        });
    }
    Ok(rows)
}

pub fn compute_table(cfg: &TableConfig) -> Result<Vec<FactorRow>> {
    check(!cfg.axes.is_empty(), "at least one axis is required")?;
    check(cfg.rabi_mhz > 0.0, "rabi_mhz must be positive")?;
    let mut chain = ChainConfig::new(cfg.ions, cfg.trap.frequencies());
    chain.mass = mass_kg(cfg.mass_amu);
    let mut rows = Vec::new();
    for &a in &cfg.axes {
        rows.extend(factors_for(&chain, a.into(), cfg)?);
    }
    if cfg.single_ion_check {
        let mut one = ChainConfig::new(1, cfg.trap.frequencies());
        one.mass = chain.mass;
        rows.extend(factors_for(&one, Axis::Z, cfg)?);
    }
    Ok(rows)
}

/// Reads a trace with columns time_us, excitation.
pub fn read_trace(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Row {
        time_us: f64,
        excitation: f64,
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let (mut t, mut y) = (Vec::new(), Vec::new());
    for row in reader.deserialize() {
        let r: Row = row?;
        t.push(r.time_us);
        y.push(r.excitation);
    }
    Ok((t, y))
}

pub fn compute(cfg: &ThermoConfig, source: &Source) -> Result<ThermoResult> {
    match cfg {
        ThermoConfig::Table(c) => Ok(ThermoResult::Table(compute_table(c)?)),
        ThermoConfig::Trace(c) => {
            let (tb, yb) = read_trace(&source.read_relative(&c.blue_csv)?)?;
            let (tr, yr) = read_trace(&source.read_relative(&c.red_csv)?)?;
            Ok(ThermoResult::Trace(estimate_from_traces(
                (&tb, &yb),
                (&tr, &yr),
                c.factor,
            )?))
        }
    }
}

pub fn tables(r: &ThermoResult) -> Vec<(&'static str, Table)> {
    match r {
        ThermoResult::Table(rows) => {
            let mut f = Table::new([
                "axis",
                "ions",
                "mode",
                "label",
                "frequency_mhz",
                "factor",
                "fit_uncertainty",
                "r_squared",
                "max_norm_drift",
                "max_truncation_loss",
            ]);
            let mut a = Table::new(["axis", "ions", "label", "nbar", "asymmetry", "pi_time_us"]);
            for row in rows {
                let c = &row.factor;
                f.push(vec![
                    row.axis.into(),
                    row.ions.into(),
                    row.mode.into(),
                    c.mode_label.clone().into(),
                    to_mhz(row.frequency).into(),
                    c.value.into(),
                    c.fit_uncertainty.into(),
                    c.r_squared.into(),
                    c.max_norm_drift.into(),
                    c.max_truncation_loss.into(),
                ]);
                for i in 0..c.nbar_grid.len() {
                    a.push(vec![
                        row.axis.into(),
                        row.ions.into(),
                        c.mode_label.clone().into(),
                        c.nbar_grid[i].into(),
                        c.asymmetries[i].into(),
                        c.pi_times[i].into(),
                    ]);
                }
            }
            vec![("factors.csv", f), ("asymmetries.csv", a)]
        }
        ThermoResult::Trace(e) => {
            let mut t = Table::new([
                "sideband",
                "amplitude",
                "frequency_per_us",
                "decay_per_us",
                "residual_rms",
            ]);
            for (name, fit) in [("blue", &e.blue), ("red", &e.red)] {
                t.push(vec![
                    name.into(),
                    fit.amplitude.into(),
                    fit.frequency.into(),
                    fit.decay.into(),
                    fit.residual_rms.into(),
                ]);
            }
            let mut n = Table::new(["nbar"]);
            n.push(vec![e.nbar.into()]);
            vec![("trace_fits.csv", t), ("estimate.csv", n)]
        }
    }
}

pub fn metadata(cfg: &ThermoConfig, source: String, r: &ThermoResult) -> Result<Metadata> {
    let mut meta = Metadata::new("thermo", source, cfg)?;
    match r {
        ThermoResult::Table(rows) => {
            meta.decisions = vec![
                "p_up is the probability that at least one ion is excited unless readout = mean-excitation".into(),
                "π-time is the first local maximum of the thermal blue signal; red is read at the same time".into(),
                "factor is the slope of n̄ against the asymmetry, fitted through the origin".into(),
                "all ions see the same Rabi frequency; η_jk assumes the wavevector lies along the branch axis".into(),
            ];
            meta.accuracy = json!(rows
                .iter()
                .map(|r| json!({
                    "axis": r.axis,
                    "label": r.factor.mode_label,
                    "max_norm_drift": r.factor.max_norm_drift,
                    "max_truncation_loss": r.factor.max_truncation_loss,
                    "r_squared": r.factor.r_squared,
                }))
                .collect::<Vec<_>>());
            for row in rows {
                meta.warnings.extend(
                    row.factor
                        .warnings
                        .iter()
                        .map(|w| format!("{} {}: {w}", row.axis, row.factor.mode_label)),
                );
            }
        }
        ThermoResult::Trace(e) => {
            meta.decisions = vec!["traces fitted to (A/2)(1 − e^{−κt}cos Ωt); n̄ = factor·A_r/(A_b − A_r)".into()];
            meta.accuracy = json!({ "blue_residual_rms": e.blue.residual_rms, "red_residual_rms": e.red.residual_rms });
        }
    }
    Ok(meta)
}

pub fn failure(r: &ThermoResult) -> Option<CliError> {
    let ThermoResult::Table(rows) = r else { return None };
    let v: Vec<String> = rows
        .iter()
        .flat_map(|row| {
            hygiene::thermometry_violations(&format!("{} {}", row.axis, row.factor.mode_label), &row.factor)
        })
        .collect();
    (!v.is_empty()).then(|| CliError::Numerical(v.join("; ")))
}
