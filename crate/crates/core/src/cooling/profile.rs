// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::Serialize;

use super::config::CoolingConfig;
use super::single::build_internal_model;
use crate::error::Result;
use crate::lindblad::steady_state;
use crate::rates::{AtomParams, LaserTone};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub probe_detuning: f64,
    pub excited: f64,
    /// γ⟨e⟩ in 1/µs.
    pub scattering_rate: f64,
}

/// Steady-state scattering of the bare atom versus probe detuning.
pub fn absorption_profile(
    driving: &LaserTone,
    atom: &AtomParams,
    grid: &[f64],
    probe_rabi: f64,
) -> Result<Vec<ProfilePoint>> {
    grid.iter()
        .map(|&dg| {
            let config = CoolingConfig {
                driving: *driving,
                probes: vec![LaserTone::new(probe_rabi, dg)],
                mismatch: 0.0,
                atom: *atom,
            };
            let model = build_internal_model(&config)?;
            let ss = steady_state(&model)?;
            let e = ss.state[(1, 1)].re;
            Ok(ProfilePoint {
                probe_detuning: dg,
                excited: e,
                scattering_rate: atom.gamma * e,
            })
        })
        .collect()
}
