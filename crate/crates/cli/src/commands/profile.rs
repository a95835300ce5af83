// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use peit_core::cooling::{absorption_profile, ProfilePoint};
use peit_core::rates::{ac_stark_shift, optimal_probe_detuning};
use peit_core::units::{from_mhz, to_mhz};

use crate::config::{check, AtomConfig, DrivingConfig, GridConfig};
use crate::error::Result;
use crate::output::{Metadata, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub probe_rabi_mhz: f64,
    /// Modes addressed by one probe tone each; may be empty.
    pub mode_frequencies_mhz: Vec<f64>,
    pub atom: AtomConfig,
    pub driving: DrivingConfig,
    /// Probe detuning Δ_g.
    pub grid: GridConfig,
}

/// Profile values where one tone's carrier and sidebands land.
#[derive(Debug, Clone, Serialize)]
pub struct ToneMarkers {
    pub mode_frequency: f64,
    pub carrier: ProfilePoint,
    pub red_sideband: ProfilePoint,
    pub blue_sideband: ProfilePoint,
}

pub struct ProfileResult {
    pub points: Vec<ProfilePoint>,
    pub tones: Vec<ToneMarkers>,
    pub driving_rabi: f64,
    pub ac_stark: f64,
}

fn profile(cfg: &ProfileConfig, grid: &[f64]) -> Result<Vec<ProfilePoint>> {
    let (driving, atom) = (cfg.driving.tone(), cfg.atom.params());
    let rabi = from_mhz(cfg.probe_rabi_mhz);
    let chunks: Vec<Vec<ProfilePoint>> = grid
        .par_chunks(32)
        .map(|c| absorption_profile(&driving, &atom, c, rabi))
        .collect::<peit_core::Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

pub fn compute(cfg: &ProfileConfig) -> Result<ProfileResult> {
    check(cfg.probe_rabi_mhz > 0.0, "probe_rabi_mhz must be positive")?;
    let driving = cfg.driving.tone();
    let stark = ac_stark_shift(&driving).exact;
    let points = profile(cfg, &cfg.grid.values()?)?;
    let mut tones = Vec::new();
    for &f in &cfg.mode_frequencies_mhz {
        check(f > 0.0, "mode frequencies must be positive")?;
        let w = from_mhz(f);
        let dg = optimal_probe_detuning(w, stark, driving.detuning);
        // The tone's red sideband absorbs photons at Δ_g + ω, the blue at Δ_g − ω.
        let p = profile(cfg, &[dg, dg + w, dg - w])?;
        tones.push(ToneMarkers {
            mode_frequency: w,
            carrier: p[0],
            red_sideband: p[1],
            blue_sideband: p[2],
        });
    }
    Ok(ProfileResult {
        points,
        tones,
        driving_rabi: driving.rabi,
        ac_stark: stark,
    })
}

/// `profile.csv` with one offset column per tone, and `tones.csv`.
pub fn tables(r: &ProfileResult) -> (Table, Table) {
    let mut headers = vec![
        "probe_detuning_mhz".to_string(),
        "excited_population".to_string(),
        "scattering_rate_per_us".to_string(),
    ];
    headers.extend((1..=r.tones.len()).map(|l| format!("offset_from_tone_{l}_mhz")));
    let mut profile = Table::new(headers);
    for p in &r.points {
        let mut row = vec![
            to_mhz(p.probe_detuning).into(),
            p.excited.into(),
            p.scattering_rate.into(),
        ];
        row.extend(
            r.tones
                .iter()
                .map(|t| to_mhz(p.probe_detuning - t.carrier.probe_detuning).into()),
        );
        profile.push(row);
    }
    let mut tones = Table::new([
        "tone",
        "mode_frequency_mhz",
        "probe_detuning_mhz",
        "carrier_rate_per_us",
        "red_sideband_mhz",
        "red_sideband_rate_per_us",
        "blue_sideband_mhz",
        "blue_sideband_rate_per_us",
    ]);
    for (l, t) in r.tones.iter().enumerate() {
        tones.push(vec![
            (l + 1).into(),
            to_mhz(t.mode_frequency).into(),
            to_mhz(t.carrier.probe_detuning).into(),
            t.carrier.scattering_rate.into(),
            to_mhz(t.red_sideband.probe_detuning).into(),
            t.red_sideband.scattering_rate.into(),
            to_mhz(t.blue_sideband.probe_detuning).into(),
            t.blue_sideband.scattering_rate.into(),
        ]);
    }
    (profile, tones)
}

pub fn metadata(cfg: &ProfileConfig, source: String, r: &ProfileResult) -> Result<Metadata> {
    let mut meta = Metadata::new("profile", source, cfg)?;
    meta.resolved = json!({
        "driving_rabi_mhz": to_mhz(r.driving_rabi),
        "ac_stark_exact_mhz": to_mhz(r.ac_stark),
        "eit_detuning_mhz": cfg.driving.detuning_mhz,
        "dressed_peak_mhz": cfg.driving.detuning_mhz + to_mhz(r.ac_stark),
    });
    meta.decisions = vec![
        "scattering rate is γ⟨e⟩ in the steady state of the bare three-level atom".into(),
        "tones sit on Δ_g = Δ_r + δ_ac − ω for their mode".into(),
    ];
    Ok(meta)
}
