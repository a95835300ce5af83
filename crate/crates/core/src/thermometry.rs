// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Multi-ion sideband thermometry.
//!
//! Sideband Hamiltonians in the interaction picture:
//! H_b = (iΩ/2) Σ_j η_j σ₊j a† + h.c. and H_r = (iΩ/2) Σ_j η_j σ₊j a + h.c.
//! Each Fock component is evolved as a pure state and thermally averaged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fit::{fit_damped_oscillation, OscillationFit};
use crate::lindblad::{evolve_pure, HilbertLayout, Operator, OperatorTerm, C64, PURE_DIM_CAP};
use crate::modes::ModeStructure;

/// Thermal weight allowed beyond the simulated Fock components.
pub const TAIL_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sideband {
    Blue,
    Red,
}

/// What counts as "up" in the fluorescence readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// At least one ion excited (threshold detection).
    AnyIon,
    /// Mean excited fraction over the ions.
    MeanExcitation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermometrySetup {
    pub ion_count: usize,
    pub mode_label: String,
    pub mode_frequency: f64,
    /// η_jk for the probed mode.
    pub eta: Vec<f64>,
    pub rabi: f64,
    pub initial_nbar: f64,
    pub fock_truncation: usize,
    pub readout: Readout,
}

/// Truncation that keeps the thermal tail of every simulated component below
/// 1e-6 up to `nbar_max`, and never below 4n̄ + 10.
pub fn default_truncation(nbar_max: f64, ions: usize) -> usize {
    let r = nbar_max / (1.0 + nbar_max);
    let tail = if r > 0.0 {
        ((1e-6f64).ln() / r.ln()).ceil() as usize
    } else {
        0
    };
    (tail + ions + 1).max((4.0 * nbar_max + 10.0).ceil() as usize)
}

impl ThermometrySetup {
    /// Setup for mode `k` of a chain, with wavevector projection `k_proj`
    /// (rad/µm) and ion mass in kg.
    pub fn from_modes(modes: &ModeStructure, k: usize, k_proj: f64, mass: f64, rabi: f64, nbar: f64) -> Result<Self> {
        if k >= modes.mode_count() {
            return Err(invalid(format!("mode {k} out of range")));
        }
        let eta = modes.lamb_dicke(k_proj, mass);
        let n = eta.nrows();
        let setup = Self {
            ion_count: n,
            mode_label: modes.label(k).as_str().to_string(),
            mode_frequency: modes.frequencies[k],
            eta: (0..n).map(|j| eta[(j, k)]).collect(),
            rabi,
            initial_nbar: nbar,
            fock_truncation: default_truncation(nbar.max(1.0), n),
            readout: Readout::AnyIon,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ion_count == 0 || self.eta.len() != self.ion_count {
            return Err(invalid("one η per ion is required"));
        }
        if !(self.rabi > 0.0) || self.eta.iter().any(|e| !e.is_finite()) {
            return Err(invalid("Rabi frequency must be positive and η finite"));
        }
        if !(self.initial_nbar >= 0.0) {
            return Err(invalid("n̄ must be non-negative"));
        }
        if (self.fock_truncation as f64) < 4.0 * self.initial_nbar + 10.0 || self.fock_truncation <= self.ion_count {
            return Err(invalid(format!(
                "Fock truncation {} is below 4n̄ + 10 or the ion count",
                self.fock_truncation
            )));
        }
        if self.eta.iter().all(|&e| e == 0.0) {
            return Err(invalid("the mode does not couple to any ion"));
        }
        HilbertLayout::new(self.factors())?.check_cap(PURE_DIM_CAP)
    }

    fn factors(&self) -> Vec<usize> {
        let mut f = vec![2; self.ion_count];
        f.push(self.fock_truncation);
        f
    }

    /// Highest Fock component evolved: blue sidebands climb by up to N.
    pub fn max_component(&self) -> usize {
        self.fock_truncation - 1 - self.ion_count
    }

    /// Collective coupling Ω‖η‖ used to scale probe times.
    pub fn collective_rabi(&self) -> f64 {
        self.rabi * self.eta.iter().map(|e| e * e).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SidebandSignal {
    pub sideband: Sideband,
    pub times: Vec<f64>,
    pub p_up: Vec<f64>,
    /// Excited population of each ion.
    pub per_ion: Vec<Vec<f64>>,
    pub max_norm_drift: f64,
    /// Thermal weight beyond the simulated components.
    pub truncation_loss: f64,
    pub warnings: Vec<String>,
}

struct Operators {
    layout: HilbertLayout,
    hamiltonian: Vec<OperatorTerm>,
    /// Readout first, then each ion's excited projector.
    observables: Vec<Operator>,
}

fn operators(setup: &ThermometrySetup, sideband: Sideband) -> Result<Operators> {
    setup.validate()?;
    let n = setup.ion_count;
    let layout = HilbertLayout::new(setup.factors())?;
    let a = layout.annihilation(n)?;
    let phonon = match sideband {
        Sideband::Blue => a.adjoint(),
        Sideband::Red => a,
    };
    let d = layout.total_dim();
    let mut m = Operator::zeros(d);
    let mut ups = Vec::with_capacity(n);
    let mut all_down = layout.identity();
    for j in 0..n {
        let sp = layout.transition(j, 1, 0)?;
        m = &m + &(&sp * &phonon).scale(C64::new(0.0, setup.rabi * setup.eta[j] / 2.0));
        ups.push(layout.projector(j, 1)?);
        all_down = &all_down * &layout.projector(j, 0)?;
    }
    let h = &m + &m.adjoint();
    let readout = match setup.readout {
        Readout::AnyIon => &layout.identity() - &all_down,
        Readout::MeanExcitation => {
            let mut s = Operator::zeros(d);
            for u in &ups {
                s = &s + u;
            }
            s.scale(C64::new(1.0 / n as f64, 0.0))
        }
    };
    let mut observables = vec![readout];
    observables.extend(ups);
    Ok(Operators {
        layout,
        hamiltonian: vec![OperatorTerm::fixed(h)],
        observables,
    })
}

/// Signals (readout, then per ion) starting from |↓…↓, n⟩, plus norm drift.
fn fock_component(ops: &Operators, ions: usize, n: usize, times: &[f64]) -> Result<(Vec<Vec<f64>>, f64)> {
    let mut levels = vec![0; ions];
    levels.push(n);
    let idx = ops.layout.basis_index(&levels)?;
    let mut psi = vec![C64::new(0.0, 0.0); ops.layout.total_dim()];
    psi[idx] = C64::new(1.0, 0.0);
    let ev = evolve_pure(&ops.layout, &ops.hamiltonian, &psi, times, &ops.observables, None)?;
    Ok((ev.expectations, ev.max_norm_drift))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times[0] != 0.0 {
        return Err(invalid("probe-time grid must start at 0"));
    }
    Ok(())
}

/// Sideband signal for the Fock initial state |↓…↓, n⟩.
pub fn sideband_signal(
    setup: &ThermometrySetup,
    sideband: Sideband,
    n: usize,
    times: &[f64],
) -> Result<SidebandSignal> {
    check_times(times)?;
    if n > setup.max_component() {
        return Err(invalid(format!(
            "Fock state {n} exceeds the largest component {} for this truncation",
            setup.max_component()
        )));
    }
    let ops = operators(setup, sideband)?;
    let (mut series, drift) = fock_component(&ops, setup.ion_count, n, times)?;
    let p_up = series.remove(0);
    Ok(SidebandSignal {
        sideband,
        times: times.to_vec(),
        p_up,
        per_ion: series,
        max_norm_drift: drift,
        truncation_loss: 0.0,
        warnings: Vec::new(),
    })
}

/// Fock-resolved signals, evolved once and reused for any n̄.
#[derive(Debug, Clone)]
pub struct FockSignals {
    pub sideband: Sideband,
    pub times: Vec<f64>,
    /// `components[n][o][i]`: observable o (readout, then ions) at time i.
    pub components: Vec<Vec<Vec<f64>>>,
    pub max_norm_drift: f64,
}

pub fn fock_signals(setup: &ThermometrySetup, sideband: Sideband, times: &[f64]) -> Result<FockSignals> {
    check_times(times)?;
    let ops = operators(setup, sideband)?;
    let results: Vec<(Vec<Vec<f64>>, f64)> = (0..=setup.max_component())
        .into_par_iter()
        .map(|n| fock_component(&ops, setup.ion_count, n, times))
        .collect::<Result<_>>()?;
    let max_norm_drift = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(FockSignals {
        sideband,
        times: times.to_vec(),
        components: results.into_iter().map(|r| r.0).collect(),
        max_norm_drift,
    })
}

impl FockSignals {
    /// Thermal average at mean phonon number `nbar`.
    pub fn thermal(&self, nbar: f64) -> SidebandSignal {
        let count = self.components.len();
        let r = nbar / (1.0 + nbar);
        let weights: Vec<f64> = (0..count).map(|n| r.powi(n as i32) / (1.0 + nbar)).collect();
        let kept: f64 = weights.iter().sum();
        let obs = self.components[0].len();
        let mut avg = vec![vec![0.0; self.times.len()]; obs];
        for (w, comp) in weights.iter().zip(&self.components) {
            for (acc, series) in avg.iter_mut().zip(comp) {
                for (a, v) in acc.iter_mut().zip(series) {
                    *a += w * v / kept;
                }
            }
        }
        let loss = 1.0 - kept;
        let mut warnings = Vec::new();
        if loss > TAIL_LIMIT {
            warnings.push(format!("thermal weight {loss:.2e} beyond the Fock truncation"));
        }
        let p_up = avg.remove(0);
        SidebandSignal {
            sideband: self.sideband,
            times: self.times.clone(),
            p_up,
            per_ion: avg,
            max_norm_drift: self.max_norm_drift,
            truncation_loss: loss,
            warnings,
        }
    }
}

/// Thermally averaged signal at the setup's n̄.
pub fn thermal_signal(setup: &ThermometrySetup, sideband: Sideband, times: &[f64]) -> Result<SidebandSignal> {
    Ok(fock_signals(setup, sideband, times)?.thermal(setup.initial_nbar))
}

/// n̄ = factor · p_r/(p_b − p_r). Works with probabilities or any common
/// amplitude scale.
pub fn asymmetry_estimate(p_blue: f64, p_red: f64, factor: f64) -> Result<f64> {
    if !(p_red >= 0.0) || !p_blue.is_finite() || !(factor > 0.0) {
        return Err(invalid(
            "sideband excitations must be non-negative and the factor positive",
        ));
    }
    if p_blue <= p_red {
        return Err(Error::Saturated { p_blue, p_red });
    }
    Ok(factor * p_red / (p_blue - p_red))
}

/// Index of the first local maximum.
pub fn first_maximum(values: &[f64]) -> Option<usize> {
    (1..values.len().saturating_sub(1)).find(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrectionFactor {
    pub value: f64,
    pub fit_uncertainty: f64,
    pub r_squared: f64,
    pub mode_label: String,
    pub readout: Readout,
    pub nbar_grid: Vec<f64>,
    pub asymmetries: Vec<f64>,
    pub pi_times: Vec<f64>,
    pub max_norm_drift: f64,
    pub max_truncation_loss: f64,
    pub warnings: Vec<String>,
}

/// Probe-time grid reaching past the first blue maximum at any n̄ ≤ 1.
pub fn probe_times(setup: &ThermometrySetup, samples: usize) -> Vec<f64> {
    let t_max = 3.0 * std::f64::consts::PI / setup.collective_rabi();
    (0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect()
}

/// Regresses n̄ on the sideband asymmetry read at the blue π-time, through
/// the origin.
pub fn correction_factor(setup: &ThermometrySetup, nbar_grid: &[f64]) -> Result<CorrectionFactor> {
    if nbar_grid.len() < 5 || nbar_grid.iter().any(|&n| !(n > 0.0)) {
        return Err(invalid("n̄ grid needs at least five positive points"));
    }
    let times = probe_times(setup, 3001);
    let blue = fock_signals(setup, Sideband::Blue, &times)?;
    let red = fock_signals(setup, Sideband::Red, &times)?;
    let mut asymmetries = Vec::new();
    let mut pi_times = Vec::new();
    let mut warnings = Vec::new();
    let mut max_loss = 0.0f64;
    for &nbar in nbar_grid {
        let b = blue.thermal(nbar);
        let r = red.thermal(nbar);
        max_loss = max_loss.max(b.truncation_loss);
        let i = first_maximum(&b.p_up).ok_or_else(|| Error::Fit(format!("no blue maximum at n̄ = {nbar}")))?;
        pi_times.push(times[i]);
        asymmetries.push(asymmetry_estimate(b.p_up[i], r.p_up[i], 1.0)?);
    }
    if max_loss > TAIL_LIMIT {
        warnings.push(format!("thermal weight {max_loss:.2e} beyond the Fock truncation"));
    }
    let sxx: f64 = asymmetries.iter().map(|a| a * a).sum();
    let sxy: f64 = asymmetries.iter().zip(nbar_grid).map(|(a, n)| a * n).sum();
    let value = sxy / sxx;
    let ss_res: f64 = asymmetries
        .iter()
        .zip(nbar_grid)
        .map(|(a, n)| (n - value * a).powi(2))
        .sum();
    let mean = nbar_grid.iter().sum::<f64>() / nbar_grid.len() as f64;
    let ss_tot: f64 = nbar_grid.iter().map(|n| (n - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let m = nbar_grid.len() as f64;
    let fit_uncertainty = (ss_res / (m - 1.0) / sxx).sqrt();
    if r_squared < 0.99 {
        warnings.push(format!("linear regression R² = {r_squared:.4} below 0.99"));
    }
    Ok(CorrectionFactor {
        value,
        fit_uncertainty,
        r_squared,
        mode_label: setup.mode_label.clone(),
        readout: setup.readout,
        nbar_grid: nbar_grid.to_vec(),
        asymmetries,
        pi_times,
        max_norm_drift: blue.max_norm_drift.max(red.max_norm_drift),
        max_truncation_loss: max_loss,
        warnings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEstimate {
    pub blue: OscillationFit,
    pub red: OscillationFit,
    pub nbar: f64,
}

/// Fits damped Rabi oscillations to measured blue and red traces and turns
/// their amplitudes into an n̄ estimate.
pub fn estimate_from_traces(blue: (&[f64], &[f64]), red: (&[f64], &[f64]), factor: f64) -> Result<TraceEstimate> {
    let b = fit_damped_oscillation(blue.0, blue.1)?;
    let r = fit_damped_oscillation(red.0, red.1)?;
    let nbar = asymmetry_estimate(b.amplitude, r.amplitude, factor)?;
    Ok(TraceEstimate { blue: b, red: r, nbar })
}
