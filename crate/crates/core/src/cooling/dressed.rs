// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Dressed-basis multimode models.
//!
//! Each ion keeps {|g⟩, |+⟩}; |−⟩ is far detuned and dropped. In the
//! interaction picture of the atoms and modes, tone l contributes
//! (Ω₊ₗ/2)|+⟩⟨g|_j [1 + iΣ_k η_jk c_kl (a_k e^{−iω_k t} + h.c.)] e^{iν_l t} + h.c.
//! with ν_l = δ_ac − Δ_glr. Keeping only terms rotating slower than the
//! cutoff gives the effective resonant model.

use serde::{Deserialize, Serialize};

use super::config::CoolingConfig;
use crate::error::{invalid, Result};
use crate::lindblad::layout::{diagonal_density, product_density, pure_density, thermal_populations};
use crate::lindblad::{HilbertLayout, Jump, Operator, OperatorTerm, QuantumModel, C64, DENSITY_DIM_CAP};
use crate::modes::{axial_modes, ChainConfig, TrapFrequencies};
use crate::rates::{driving_rabi_for_stark_shift, AtomParams, DressedState, LaserTone};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressedMode {
    pub label: String,
    pub frequency: f64,
    pub fock_dim: usize,
    pub initial_nbar: f64,
    /// η_jk for each ion j.
    pub eta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressedTone {
    /// Ω₊ₗ = Ω_gl sin φ.
    pub plus_rabi: f64,
    /// ν_l = δ_ac − Δ_glr.
    pub frequency: f64,
    /// Projection c_kl of the tone's wavevector onto each mode axis.
    pub projection: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressedSpec {
    pub ions: usize,
    pub modes: Vec<DressedMode>,
    pub tones: Vec<DressedTone>,
    /// γ₊ = γ sin²φ.
    pub linewidth: f64,
    pub alpha: f64,
    /// Keep only terms with |frequency| at or below this value.
    pub resonant_cutoff: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DressedModel {
    pub model: QuantumModel,
    pub labels: Vec<String>,
    pub numbers: Vec<Operator>,
    /// Layout factor index of each mode.
    pub mode_factors: Vec<usize>,
    pub initial_truncation_loss: Vec<f64>,
    /// Weak-coupling rate 4g²/γ₊ / (1 + (2δ/γ₊)²) of each mode from its
    /// nearest red sideband, if any tone addresses it.
    pub rate_estimates: Vec<Option<f64>>,
    pub dropped_terms: usize,
}

impl DressedSpec {
    fn validate(&self) -> Result<()> {
        if self.ions == 0 || self.modes.is_empty() || self.tones.is_empty() {
            return Err(invalid("dressed model needs ions, modes and tones"));
        }
        if !(self.linewidth > 0.0) || !(self.alpha >= 0.0) {
            return Err(invalid("dressed linewidth must be positive and α non-negative"));
        }
        for m in &self.modes {
            if m.eta.len() != self.ions {
                return Err(invalid(format!("mode {} needs one η per ion", m.label)));
            }
            if m.fock_dim < 2 || !(m.frequency > 0.0) || !(m.initial_nbar >= 0.0) {
                return Err(invalid(format!(
                    "mode {} has invalid frequency, truncation or n̄",
                    m.label
                )));
            }
        }
        for t in &self.tones {
            if t.projection.len() != self.modes.len() {
                return Err(invalid("each tone needs one projection per mode"));
            }
            if !t.plus_rabi.is_finite() || !t.frequency.is_finite() {
                return Err(invalid("tone parameters must be finite"));
            }
        }
        Ok(())
    }
}

pub fn build_dressed_model(spec: &DressedSpec) -> Result<DressedModel> {
    spec.validate()?;
    let n = spec.ions;
    let mut factors = vec![2; n];
    factors.extend(spec.modes.iter().map(|m| m.fock_dim));
    let layout = HilbertLayout::new(factors)?;
    layout.check_cap(DENSITY_DIM_CAP)?;
    let mode_factors: Vec<usize> = (0..spec.modes.len()).map(|k| n + k).collect();

    let mut raising = Vec::with_capacity(n);
    for j in 0..n {
        raising.push(layout.transition(j, 1, 0)?);
    }
    let mut lower_ops = Vec::with_capacity(spec.modes.len());
    for &f in &mode_factors {
        lower_ops.push(layout.annihilation(f)?);
    }

    let keep = |freq: f64| spec.resonant_cutoff.is_none_or(|c| freq.abs() <= c);
    let mut terms = Vec::new();
    let mut dropped = 0;
    let mut push = |m: Operator, freq: f64, terms: &mut Vec<OperatorTerm>| {
        if m.nnz() == 0 {
            return;
        }
        if keep(freq) {
            terms.push(OperatorTerm::rotating(m, freq));
        } else {
            dropped += 1;
        }
    };
    let half = |x: f64| C64::new(x / 2.0, 0.0);
    for tone in &spec.tones {
        let mut carrier = Operator::zeros(layout.total_dim());
        for s in &raising {
            carrier = &carrier + s;
        }
        push(carrier.scale(half(tone.plus_rabi)), tone.frequency, &mut terms);
        for (k, mode) in spec.modes.iter().enumerate() {
            let c = tone.projection[k];
            if c == 0.0 {
                continue;
            }
            let mut collective = Operator::zeros(layout.total_dim());
            for (j, s) in raising.iter().enumerate() {
                collective = &collective + &s.scale(C64::new(mode.eta[j] * c, 0.0));
            }
            let a = &lower_ops[k];
            let coeff = C64::new(0.0, tone.plus_rabi / 2.0);
            push(
                (&collective * a).scale(coeff),
                tone.frequency - mode.frequency,
                &mut terms,
            );
            push(
                (&collective * &a.adjoint()).scale(coeff),
                tone.frequency + mode.frequency,
                &mut terms,
            );
        }
    }
    if terms.is_empty() {
        terms.push(OperatorTerm::fixed(Operator::zeros(layout.total_dim())));
    }

    let mut jumps = Vec::new();
    for (j, s) in raising.iter().enumerate() {
        let lower = s.adjoint();
        jumps.push(Jump::new(lower.clone(), spec.linewidth));
        if spec.alpha > 0.0 {
            for (k, mode) in spec.modes.iter().enumerate() {
                if mode.eta[j] == 0.0 {
                    continue;
                }
                // Secular form of σ₋(a e^{−iωt} + a† e^{iωt}): the cross terms
                // rotate at 2ω and are dropped.
                let eta = C64::new(mode.eta[j], 0.0);
                let rate = spec.linewidth * spec.alpha;
                jumps.push(Jump::new((&lower * &lower_ops[k]).scale(eta), rate));
                jumps.push(Jump::new((&lower * &lower_ops[k].adjoint()).scale(eta), rate));
            }
        }
    }

    let mut parts = vec![pure_density(2, 0); n];
    let mut losses = Vec::new();
    for m in &spec.modes {
        let (p, loss) = thermal_populations(m.fock_dim, m.initial_nbar);
        parts.push(diagonal_density(&p));
        losses.push(loss);
    }
    let rho0 = product_density(&parts);

    let rate_estimates = spec
        .modes
        .iter()
        .enumerate()
        .map(|(k, mode)| {
            let eta2: f64 = mode.eta.iter().map(|e| e * e).sum();
            spec.tones
                .iter()
                .filter(|t| t.projection[k] != 0.0)
                .min_by(|a, b| {
                    (a.frequency - mode.frequency)
                        .abs()
                        .total_cmp(&(b.frequency - mode.frequency).abs())
                })
                .map(|t| {
                    let g2 = eta2 * (t.projection[k] * t.plus_rabi / 2.0).powi(2);
                    let d = t.frequency - mode.frequency;
                    4.0 * g2 / spec.linewidth / (1.0 + (2.0 * d / spec.linewidth).powi(2))
                })
        })
        .collect();

    let numbers = mode_factors
        .iter()
        .map(|&f| layout.number(f))
        .collect::<Result<Vec<_>>>()?;
    let model = QuantumModel::new(layout, terms, jumps, rho0)?;
    Ok(DressedModel {
        model,
        labels: spec.modes.iter().map(|m| m.label.clone()).collect(),
        numbers,
        mode_factors,
        initial_truncation_loss: losses,
        rate_estimates,
        dropped_terms: dropped,
    })
}

/// Converts a cooling configuration to dressed tones. Probe l's projection
/// onto mode k is taken from `projections[l][k]`.
fn dressed_tones(config: &CoolingConfig, projections: &[Vec<f64>]) -> Result<(Vec<DressedTone>, DressedState)> {
    config.validate()?;
    let dressed = DressedState::new(&config.driving, &config.atom);
    let tones = config
        .probes
        .iter()
        .enumerate()
        .map(|(l, p)| {
            let dglr = config.probe_detuning(l) - config.driving.detuning;
            DressedTone {
                plus_rabi: dressed.plus_rabi(p.rabi),
                frequency: dressed.ac_stark - dglr,
                projection: projections[l].clone(),
            }
        })
        .collect();
    Ok((tones, dressed))
}

/// Two-probe cooling of one axial and one radial mode of a single ion.
/// All frequencies in units chosen by the caller (the reference parameters use ω_z).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoDimensionalParams {
    pub omega_z: f64,
    pub omega_x: f64,
    pub ac_stark: f64,
    pub driving_detuning: f64,
    pub gamma: f64,
    pub alpha: f64,
    /// Ω_g1, Ω_g2.
    pub probe_rabi: [f64; 2],
    /// Δ_g1, Δ_g2 before the mismatch is applied.
    pub probe_detuning: [f64; 2],
    pub mismatch: f64,
    /// η_gz; the radial factor is scaled by √(ω_z/ω_x).
    pub eta_z: f64,
    /// Angle θ between each probe wavevector and the mode axes.
    pub theta: f64,
    /// Fock truncations of (z, x).
    pub fock_dims: [usize; 2],
    pub initial_nbar: f64,
    pub resonant_only: bool,
}

impl TwoDimensionalParams {
    /// Reference parameters of the two-dimensional single-ion demonstration,
    /// in units of ω_z.
    pub fn reference() -> Self {
        Self {
            omega_z: 1.0,
            omega_x: 10.0,
            ac_stark: 2.0,
            driving_detuning: 330.0,
            gamma: 20.0,
            alpha: 1.0 / 3.0,
            probe_rabi: [1.0, 3.16],
            probe_detuning: [331.0, 322.0],
            mismatch: 0.005,
            eta_z: 0.17,
            theta: std::f64::consts::FRAC_PI_4,
            fock_dims: [18, 18],
            initial_nbar: 2.0,
            resonant_only: true,
        }
    }

    pub fn cooling_config(&self) -> CoolingConfig {
        let rabi = driving_rabi_for_stark_shift(self.ac_stark, self.driving_detuning);
        CoolingConfig {
            driving: LaserTone::new(rabi, self.driving_detuning),
            probes: (0..2)
                .map(|l| LaserTone::new(self.probe_rabi[l], self.probe_detuning[l]))
                .collect(),
            mismatch: self.mismatch,
            atom: AtomParams::new(self.gamma).with_alpha(self.alpha),
        }
    }

    pub fn spec(&self) -> Result<DressedSpec> {
        let config = self.cooling_config();
        let c = self.theta.cos();
        let (tones, dressed) = dressed_tones(&config, &[vec![c, c], vec![c, c]])?;
        let eta_x = self.eta_z * (self.omega_z / self.omega_x).sqrt();
        Ok(DressedSpec {
            ions: 1,
            modes: vec![
                DressedMode {
                    label: "z".into(),
                    frequency: self.omega_z,
                    fock_dim: self.fock_dims[0],
                    initial_nbar: self.initial_nbar,
                    eta: vec![self.eta_z],
                },
                DressedMode {
                    label: "x".into(),
                    frequency: self.omega_x,
                    fock_dim: self.fock_dims[1],
                    initial_nbar: self.initial_nbar,
                    eta: vec![eta_x],
                },
            ],
            tones,
            linewidth: dressed.effective_linewidth,
            alpha: self.alpha,
            resonant_cutoff: self.resonant_only.then(|| 0.1 * self.omega_z.min(self.omega_x)),
        })
    }

    /// The same physics restricted to one mode and its own tone
    /// (0: z with probe 1, 1: x with probe 2).
    pub fn single_mode_spec(&self, mode: usize) -> Result<DressedSpec> {
        if mode > 1 {
            return Err(invalid("mode index must be 0 or 1"));
        }
        let full = self.spec()?;
        let mut tone = full.tones[mode].clone();
        tone.projection = vec![tone.projection[mode]];
        Ok(DressedSpec {
            modes: vec![full.modes[mode].clone()],
            tones: vec![tone],
            ..full
        })
    }
}

pub fn build_2d_model(params: &TwoDimensionalParams) -> Result<DressedModel> {
    build_dressed_model(&params.spec()?)
}

/// Two ions, both axial modes, two global probe tones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoIonParams {
    pub omega_z: f64,
    pub ac_stark: f64,
    pub driving_detuning: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub probe_rabi: [f64; 2],
    pub probe_detuning: [f64; 2],
    pub mismatch: f64,
    /// Mode Lamb-Dicke factors (COM, stretch); η_jk = η_k b_jk.
    pub eta_modes: [f64; 2],
    pub fock_dims: [usize; 2],
    pub initial_nbar: f64,
    pub resonant_only: bool,
}

impl TwoIonParams {
    pub fn reference() -> Self {
        Self {
            omega_z: 1.0,
            ac_stark: 2.0,
            driving_detuning: 330.0,
            gamma: 20.0,
            alpha: 1.0 / 3.0,
            probe_rabi: [1.0, 1.32],
            probe_detuning: [331.0, 330.27],
            mismatch: 0.005,
            eta_modes: [0.24, 0.18],
            fock_dims: [16, 16],
            initial_nbar: 2.0,
            resonant_only: true,
        }
    }

    pub fn cooling_config(&self) -> CoolingConfig {
        let rabi = driving_rabi_for_stark_shift(self.ac_stark, self.driving_detuning);
        CoolingConfig {
            driving: LaserTone::new(rabi, self.driving_detuning),
            probes: (0..2)
                .map(|l| LaserTone::new(self.probe_rabi[l], self.probe_detuning[l]))
                .collect(),
            mismatch: self.mismatch,
            atom: AtomParams::new(self.gamma).with_alpha(self.alpha),
        }
    }

    pub fn spec(&self) -> Result<DressedSpec> {
        // Mode structure in units of ω_z: only the ratios and vectors matter.
        let chain = ChainConfig::new(2, TrapFrequencies::from_mhz(1.0, 10.0, 10.0));
        let axial = axial_modes(&chain)?;
        let config = self.cooling_config();
        let (tones, dressed) = dressed_tones(&config, &[vec![1.0, 1.0], vec![1.0, 1.0]])?;
        let base = axial.frequencies[0];
        let names = ["COM", "stretch"];
        let modes = (0..2)
            .map(|k| DressedMode {
                label: names[k].into(),
                frequency: self.omega_z * axial.frequencies[k] / base,
                fock_dim: self.fock_dims[k],
                initial_nbar: self.initial_nbar,
                eta: (0..2).map(|j| self.eta_modes[k] * axial.eigenvectors[(j, k)]).collect(),
            })
            .collect();
        Ok(DressedSpec {
            ions: 2,
            modes,
            tones,
            linewidth: dressed.effective_linewidth,
            alpha: self.alpha,
            resonant_cutoff: self.resonant_only.then_some(0.1 * self.omega_z),
        })
    }

    /// Both ions with only mode `mode` and its own tone.
    pub fn single_mode_spec(&self, mode: usize) -> Result<DressedSpec> {
        if mode > 1 {
            return Err(invalid("mode index must be 0 or 1"));
        }
        let full = self.spec()?;
        let mut tone = full.tones[mode].clone();
        tone.projection = vec![tone.projection[mode]];
        Ok(DressedSpec {
            modes: vec![full.modes[mode].clone()],
            tones: vec![tone],
            ..full
        })
    }
}

pub fn build_two_ion_model(params: &TwoIonParams) -> Result<DressedModel> {
    build_dressed_model(&params.spec()?)
}
