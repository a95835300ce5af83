// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::Serialize;

use super::dressed::DressedModel;
use super::single::SingleModeModel;
use crate::error::{invalid, Result};
use crate::fit::{fit_exponential_approach, fit_exponential_to_zero, ExpFit};
use crate::lindblad::layout::reduced_populations;
use crate::lindblad::{evolve, AccuracyReport, EvolveOptions, Operator, QuantumModel};

/// A phonon-number observable together with the layout factor it lives on.
#[derive(Debug, Clone)]
pub struct ModeObservable {
    pub label: String,
    pub number: Operator,
    pub factor: usize,
    /// Rate used to place the fit window; estimated from the data if absent.
    pub rate_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeSeries {
    pub label: String,
    pub values: Vec<f64>,
    pub fit: Option<ExpFit>,
    pub fit_start: f64,
    pub rate_estimate: f64,
    /// Population of the top two Fock levels.
    pub tail_initial: f64,
    pub tail_final: f64,
    pub warnings: Vec<String>,
}

impl ModeSeries {
    pub fn final_value(&self) -> f64 {
        *self.values.last().unwrap_or(&f64::NAN)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoolingRun {
    pub description: String,
    pub times: Vec<f64>,
    pub modes: Vec<ModeSeries>,
    pub accuracy: AccuracyReport,
}

impl CoolingRun {
    pub fn total_final(&self) -> f64 {
        self.modes.iter().map(|m| m.final_value()).sum()
    }

    pub fn max_tail(&self) -> f64 {
        self.modes.iter().map(|m| m.tail_final).fold(0.0, f64::max)
    }
}

impl SingleModeModel {
    pub fn mode_observables(&self, rate_estimate: Option<f64>) -> Vec<ModeObservable> {
        vec![ModeObservable {
            label: "n".into(),
            number: self.number.clone(),
            factor: 1,
            rate_estimate,
        }]
    }
}

impl DressedModel {
    pub fn mode_observables(&self) -> Vec<ModeObservable> {
        self.labels
            .iter()
            .zip(&self.numbers)
            .zip(&self.mode_factors)
            .zip(&self.rate_estimates)
            .map(|(((label, number), &factor), &rate)| ModeObservable {
                label: label.clone(),
                number: number.clone(),
                factor,
                rate_estimate: rate,
            })
            .collect()
    }
}

fn tail(pops: &[f64]) -> f64 {
    pops.iter().rev().take(2).sum()
}

/// Rate from the time at which the signal has covered 1 − 1/e of its change.
fn rate_from_data(times: &[f64], values: &[f64]) -> f64 {
    let (y0, y1) = (values[0], values[values.len() - 1]);
    let t_end = times[times.len() - 1];
    if (y0 - y1).abs() <= 1e-12 * y0.abs().max(1.0) {
        return 1.0 / t_end;
    }
    let target = y1 + (y0 - y1) / std::f64::consts::E;
    for i in 1..values.len() {
        if (values[i] - target) * (values[0] - target) <= 0.0 {
            return 1.0 / times[i].max(1e-300);
        }
    }
    1.0 / t_end
}

fn analyse(times: &[f64], values: Vec<f64>, rate_estimate: Option<f64>) -> (Option<ExpFit>, f64, f64, Vec<String>) {
    let mut warnings = Vec::new();
    let w_est = rate_estimate
        .filter(|w| w.is_finite() && *w != 0.0)
        .unwrap_or_else(|| rate_from_data(times, &values));
    let mut start = 0.5 / w_est.abs();
    let mut first = times.iter().position(|&t| t >= start).unwrap_or(times.len());
    if times.len() - first < 8 {
        first = 0;
        start = times[0];
        warnings.push("fit window too short after 0.5/W_est; fitting the full series".to_string());
    }
    let (t, y) = (&times[first..], &values[first..]);
    let fit = match fit_exponential_approach(t, y, w_est) {
        Ok(f) if f.w > 0.0 && f.n_ss < 0.0 => match fit_exponential_to_zero(t, y, f.w) {
            Ok(g) => Some(g),
            Err(_) => Some(f),
        },
        Ok(f) => Some(f),
        Err(e) => {
            warnings.push(format!("exponential fit failed: {e}"));
            None
        }
    };
    if let Some(f) = &fit {
        if f.w < 0.0 {
            warnings.push(format!("fitted rate {:.4e} is negative: the mode heats", f.w));
        }
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let noise = 3.0 * f.residual_rms + 1e-9 * scale;
        let sign = if f.w >= 0.0 { -1.0 } else { 1.0 };
        let reversals = y.windows(2).filter(|w| sign * (w[1] - w[0]) < -noise).count();
        if reversals > 0 {
            warnings.push(format!(
                "trajectory is non-monotone beyond noise at {reversals} samples (fit residual {:.3e})",
                f.residual_rms
            ));
        }
    }
    (fit, start, w_est, warnings)
}

/// Evolves `model` on an even grid of `samples` points over [0, t_max] and
/// fits n_ss + (n0 − n_ss)e^{−Wt} to each mode's ⟨n⟩ after 0.5/W_est.
pub fn simulate_cooling(
    description: &str,
    model: &QuantumModel,
    modes: &[ModeObservable],
    t_max: f64,
    samples: usize,
    options: &EvolveOptions,
) -> Result<CoolingRun> {
    if !(t_max > 0.0) || samples < 3 {
        return Err(invalid("cooling runs need t_max > 0 and at least three samples"));
    }
    if modes.is_empty() {
        return Err(invalid("no mode observables given"));
    }
    let times: Vec<f64> = (0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect();
    let observables: Vec<Operator> = modes.iter().map(|m| m.number.clone()).collect();
    let evo = evolve(model, &times, &observables, options)?;
    let series = modes
        .iter()
        .zip(evo.expectations)
        .map(|(m, values)| {
            let tail_initial = tail(&reduced_populations(&model.layout, &model.initial_state, m.factor));
            let tail_final = tail(&reduced_populations(&model.layout, &evo.final_state, m.factor));
            let (fit, fit_start, rate_estimate, warnings) = analyse(&times, values.clone(), m.rate_estimate);
            ModeSeries {
                label: m.label.clone(),
                values,
                fit,
                fit_start,
                rate_estimate,
                tail_initial,
                tail_final,
                warnings,
            }
        })
        .collect();
    Ok(CoolingRun {
        description: description.to_string(),
        times: evo.times,
        modes: series,
        accuracy: evo.accuracy,
    })
}
