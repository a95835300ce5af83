// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::{Deserialize, Serialize};
use serde_json::json;

use peit_core::modes::{axial_modes, equilibrium_positions, transverse_modes, Axis, ChainConfig, ModeStructure};
use peit_core::units::{coulomb_length, to_mhz};

use crate::config::{check, mass_kg, wavevector, AxisName, TrapConfig};
use crate::error::Result;
use crate::output::{Metadata, Table};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambDickeConfig {
    pub wavelength_nm: f64,
    /// Ion mass.
    pub mass_amu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub ions: usize,
    pub axes: Vec<AxisName>,
    pub trap: TrapConfig,
    pub lamb_dicke: LambDickeConfig,
}

pub struct ModesResult {
    pub chain: ChainConfig,
    pub positions: Vec<f64>,
    pub residual_force: f64,
    pub branches: Vec<ModeStructure>,
    /// η_jk per branch for a wavevector along that axis.
    pub eta: Vec<nalgebra::DMatrix<f64>>,
}

impl ModesResult {
    pub fn branch(&self, axis: Axis) -> Option<&ModeStructure> {
        self.branches.iter().find(|b| b.axis == axis)
    }
}

pub fn compute(cfg: &ModesConfig) -> Result<ModesResult> {
    check(!cfg.axes.is_empty(), "at least one axis is required")?;
    let mut chain = ChainConfig::new(cfg.ions, cfg.trap.frequencies());
    chain.mass = mass_kg(cfg.lamb_dicke.mass_amu);
    let eq = equilibrium_positions(&chain)?;
    let k = wavevector(cfg.lamb_dicke.wavelength_nm);
    let mut branches = Vec::new();
    let mut eta = Vec::new();
    for &a in &cfg.axes {
        let axis = Axis::from(a);
        let m = if axis == Axis::Z {
            axial_modes(&chain)?
        } else {
            transverse_modes(&chain, axis)?
        };
        eta.push(m.lamb_dicke(k, chain.mass));
        branches.push(m);
    }
    Ok(ModesResult {
        chain,
        positions: eq.positions,
        residual_force: eq.residual_force,
        branches,
        eta,
    })
}

/// `modes.csv` (one row per mode) and `positions.csv`.
pub fn tables(r: &ModesResult) -> (Table, Table) {
    let n = r.chain.ion_count;
    let mut headers: Vec<String> = ["axis", "mode", "label", "frequency_mhz", "ratio_to_trap"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    headers.extend((1..=n).map(|j| format!("b_{j}")));
    headers.extend((1..=n).map(|j| format!("eta_{j}")));
    let mut modes = Table::new(headers);
    for (m, eta) in r.branches.iter().zip(&r.eta) {
        let trap = r.chain.trap.along(m.axis);
        for k in 0..m.mode_count() {
            let mut row = vec![
                m.axis.name().into(),
                k.into(),
                m.label(k).as_str().into(),
                to_mhz(m.frequencies[k]).into(),
                (m.frequencies[k] / trap).into(),
            ];
            row.extend((0..n).map(|j| m.eigenvectors[(j, k)].into()));
            row.extend((0..n).map(|j| eta[(j, k)].into()));
            modes.push(row);
        }
    }
    let ell = coulomb_length(r.chain.mass, r.chain.trap.axial) * 1e6;
    let mut pos = Table::new(["ion", "position_scaled", "position_um"]);
    for (j, u) in r.positions.iter().enumerate() {
        pos.push(vec![(j + 1).into(), (*u).into(), (u * ell).into()]);
    }
    (modes, pos)
}

pub fn metadata(cfg: &ModesConfig, source: String, r: &ModesResult) -> Result<Metadata> {
    let mut meta = Metadata::new("modes", source, cfg)?;
    meta.resolved = json!({
        "mass_kg": r.chain.mass,
        "coulomb_length_um": coulomb_length(r.chain.mass, r.chain.trap.axial) * 1e6,
        "wavevector_rad_per_um": wavevector(cfg.lamb_dicke.wavelength_nm),
    });
    meta.decisions = vec![
        "transverse branches use ω⊥² = ω_t² − (λ_k − 1)ω_z²/2 from the axial Hessian eigenvalues λ_k".into(),
        "η_jk assumes the wavevector lies along the branch axis".into(),
        "transverse modes are listed in ascending frequency, so the COM mode comes last".into(),
    ];
    meta.accuracy = json!({ "equilibrium_residual_force": r.residual_force });
    Ok(meta)
}
