// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rates::{AtomParams, LaserTone};

/// Driving beam, probe tones and atom for a cooling run.
///
/// The mismatch ε is added to probe 0, subtracted from probe 1, added to
/// probe 2 and so on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingConfig {
    pub driving: LaserTone,
    pub probes: Vec<LaserTone>,
    pub mismatch: f64,
    pub atom: AtomParams,
}

impl CoolingConfig {
    /// Validates and returns regime warnings (probe/drive ratio above 0.3).
    pub fn validate(&self) -> Result<Vec<String>> {
        self.atom.validate()?;
        self.driving.validate()?;
        if self.probes.is_empty() {
            return Err(invalid("at least one probe tone is required"));
        }
        if !self.mismatch.is_finite() {
            return Err(invalid("mismatch must be finite"));
        }
        let mut warnings = Vec::new();
        for (l, p) in self.probes.iter().enumerate() {
            p.validate()?;
            if self.driving.rabi > 0.0 && p.rabi / self.driving.rabi > 0.3 {
                warnings.push(format!(
                    "probe {l}: Rabi ratio {:.3} to the driving beam exceeds 0.3",
                    p.rabi / self.driving.rabi
                ));
            } else if self.driving.rabi == 0.0 && p.rabi > 0.0 {
                warnings.push(format!("probe {l}: driving beam is off"));
            }
        }
        Ok(warnings)
    }

    /// Detuning of probe `l` including its share of the mismatch.
    pub fn probe_detuning(&self, l: usize) -> f64 {
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        self.probes[l].detuning + sign * self.mismatch
    }
}
