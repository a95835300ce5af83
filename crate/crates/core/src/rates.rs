// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Closed-form cooling theory for a three-level Λ atom coupled to one motional mode.
//!
//! A probe (|g⟩↔|e⟩, Rabi Ω_g, detuning Δ_g) and a strong driving beam
//! (|r⟩↔|e⟩, Rabi Ω_r, detuning Δ_r) form the Λ system. Second-order
//! scattering amplitudes give the heating and cooling coefficients A±, from
//! which W = A₋ − A₊ and n_ss = A₊/W follow.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::units;

/// Three-level atom constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    /// Total linewidth γ of |e⟩ in rad/µs.
    pub gamma: f64,
    /// Decay rate from |e⟩ into |g⟩.
    pub gamma_g: f64,
    /// Decay rate from |e⟩ into |r⟩.
    pub gamma_r: f64,
    /// Second moment of the recoil angular distribution.
    pub alpha: f64,
}

impl AtomParams {
    /// Equal branching and isotropic recoil (α = 1/3).
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma,
            gamma_g: gamma / 2.0,
            gamma_r: gamma / 2.0,
            alpha: 1.0 / 3.0,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_branching(mut self, gamma_g: f64) -> Self {
        self.gamma_g = gamma_g;
        self.gamma_r = self.gamma - gamma_g;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.gamma_g < 0.0 || self.gamma_r < 0.0 {
            return Err(invalid("branching rates must be non-negative"));
        }
        if (self.gamma_g + self.gamma_r - self.gamma).abs() > 1e-12 * self.gamma.max(1.0) {
            return Err(invalid(format!(
                "branching rates {} + {} do not sum to gamma {}",
                self.gamma_g, self.gamma_r, self.gamma
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        Ok(())
    }
}

/// One laser field. `projection[axis]` is cos φ between the wavevector
/// difference and the motional axis (z, x, y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserTone {
    pub rabi: f64,
    pub detuning: f64,
    pub projection: [f64; 3],
}

impl LaserTone {
    pub fn new(rabi: f64, detuning: f64) -> Self {
        Self {
            rabi,
            detuning,
            projection: [1.0, 0.0, 0.0],
        }
    }

    pub fn with_projection(mut self, projection: [f64; 3]) -> Self {
        self.projection = projection;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi >= 0.0 && self.rabi.is_finite()) {
            return Err(invalid(format!(
                "Rabi frequency must be non-negative, got {}",
                self.rabi
            )));
        }
        if !self.detuning.is_finite() {
            return Err(invalid("detuning must be finite"));
        }
        if self.projection.iter().any(|c| !(-1.0..=1.0).contains(c)) {
            return Err(invalid("axis projections must lie in [-1, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarkShift {
    pub exact: f64,
    /// Ω_r²/(4|Δ_r|); `None` when Δ_r = 0.
    pub approx: Option<f64>,
}

pub fn ac_stark_shift(driving: &LaserTone) -> StarkShift {
    let (w, d) = (driving.rabi, driving.detuning);
    let exact = 0.5 * ((w * w + d * d).sqrt() - d.abs());
    let approx = (d != 0.0).then(|| w * w / (4.0 * d.abs()));
    StarkShift { exact, approx }
}

/// Driving Rabi frequency that produces the light shift `stark` at detuning `delta_r`.
pub fn driving_rabi_for_stark_shift(stark: f64, delta_r: f64) -> f64 {
    let s = 2.0 * stark + delta_r.abs();
    (s * s - delta_r * delta_r).max(0.0).sqrt()
}

/// Dressed |±⟩ states of the driven |r⟩–|e⟩ pair. Energies are measured from
/// the bare |r⟩ level in the laser frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedState {
    pub mixing_angle: f64,
    pub energy_plus: f64,
    pub energy_minus: f64,
    pub ac_stark: f64,
    pub effective_linewidth: f64,
    pub driving_detuning: f64,
}

impl DressedState {
    pub fn new(driving: &LaserTone, atom: &AtomParams) -> Self {
        let (w, d) = (driving.rabi.abs(), driving.detuning);
        let root = (w * w + d * d).sqrt();
        let phi = 0.5 * w.atan2(d);
        Self {
            mixing_angle: phi,
            energy_plus: 0.5 * (-d + root),
            energy_minus: 0.5 * (-d - root),
            ac_stark: ac_stark_shift(driving).exact,
            effective_linewidth: atom.gamma * phi.sin().powi(2),
            driving_detuning: d,
        }
    }

    /// Effective Rabi frequency Ω sin φ between |g⟩ and |+⟩.
    pub fn plus_rabi(&self, probe_rabi: f64) -> f64 {
        probe_rabi * self.mixing_angle.sin()
    }
}

/// f(x) = (Δ_g + x)(Δ_gr + x) − Ω_r²/4 + i(Δ_gr + x)γ/2.
pub fn char_function(x: f64, probe: &LaserTone, driving: &LaserTone, atom: &AtomParams) -> Complex64 {
    let dg = probe.detuning;
    let dgr = probe.detuning - driving.detuning;
    Complex64::new(
        (dg + x) * (dgr + x) - driving.rabi * driving.rabi / 4.0,
        (dgr + x) * atom.gamma / 2.0,
    )
}

/// Lamb-Dicke couplings of the probe and driving beams to one mode, including
/// the geometric projections cos φ_g and cos φ_r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCoupling {
    pub frequency: f64,
    pub eta_g: f64,
    pub eta_r: f64,
    pub cos_g: f64,
    pub cos_r: f64,
}

impl ModeCoupling {
    /// The convention used for the single-mode figures: η_g = η_r = η/2 with
    /// counter-propagating components (cos φ_g = 1, cos φ_r = −1).
    pub fn symmetric(frequency: f64, eta: f64) -> Self {
        Self {
            frequency,
            eta_g: eta / 2.0,
            eta_r: eta / 2.0,
            cos_g: 1.0,
            cos_r: -1.0,
        }
    }
}

/// The seven scattering amplitudes; index 0 of each pair is the heating (+)
/// process, index 1 the cooling (−) process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Amplitudes {
    pub carrier: Complex64,
    pub t1: [Complex64; 2],
    pub t2: [Complex64; 2],
    pub t3: [Complex64; 2],
}

impl Amplitudes {
    pub fn heating_sum(&self) -> Complex64 {
        self.t1[0] + self.t2[0] + self.t3[0]
    }

    pub fn cooling_sum(&self) -> Complex64 {
        self.t1[1] + self.t2[1] + self.t3[1]
    }
}

fn checked_f(x: f64, probe: &LaserTone, driving: &LaserTone, atom: &AtomParams) -> Result<Complex64> {
    let f = char_function(x, probe, driving, atom);
    if f.re == 0.0 && f.im == 0.0 {
        return Err(Error::Pole { x });
    }
    Ok(f)
}

pub fn transition_amplitudes(
    probe: &LaserTone,
    driving: &LaserTone,
    atom: &AtomParams,
    mode: &ModeCoupling,
) -> Result<Amplitudes> {
    let w = mode.frequency;
    if !(w > 0.0) {
        return Err(invalid(format!("mode frequency must be positive, got {w}")));
    }
    let i = Complex64::i();
    let dgr = probe.detuning - driving.detuning;
    let (og, or) = (probe.rabi, driving.rabi);
    let f0 = checked_f(0.0, probe, driving, atom)?;
    let carrier = Complex64::from(mode.eta_g * og / 2.0 * dgr) / f0;
    let mut t1 = [Complex64::default(); 2];
    let mut t2 = [Complex64::default(); 2];
    let mut t3 = [Complex64::default(); 2];
    // s = +1 heating (x = −ω), s = −1 cooling (x = +ω).
    for (idx, s) in [1.0, -1.0].into_iter().enumerate() {
        let x = -s * w;
        let fx = checked_f(x, probe, driving, atom)?;
        let num = x + dgr;
        t1[idx] = -i * mode.eta_g * mode.cos_g * (og / 2.0) * num / fx;
        t2[idx] = -i * mode.eta_r * mode.cos_r * (or * og / 4.0) * (or / 2.0) / f0 * num / fx;
        t3[idx] = i * mode.eta_r * mode.cos_r * (or * og / 4.0) * dgr / f0 * (or / 2.0) / fx;
    }
    Ok(Amplitudes { carrier, t1, t2, t3 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateReport {
    /// Heating coefficient A₊ in 1/µs.
    pub a_plus: f64,
    /// Cooling coefficient A₋ in 1/µs.
    pub a_minus: f64,
    /// Cooling rate A₋ − A₊ in 1/µs.
    pub w: f64,
    /// A₊/W, or `None` when W ≤ 0.
    pub n_ss: Option<f64>,
    pub amplitudes: Amplitudes,
}

impl RateReport {
    pub fn is_cooling(&self) -> bool {
        self.w > 0.0
    }
}

pub fn rates(probe: &LaserTone, driving: &LaserTone, atom: &AtomParams, mode: &ModeCoupling) -> Result<RateReport> {
    atom.validate()?;
    let amp = transition_amplitudes(probe, driving, atom, mode)?;
    let diffusion = atom.alpha * atom.gamma * amp.carrier.norm_sqr();
    let a_plus = diffusion + atom.gamma * amp.heating_sum().norm_sqr();
    let a_minus = diffusion + atom.gamma * amp.cooling_sum().norm_sqr();
    let w = a_minus - a_plus;
    Ok(RateReport {
        a_plus,
        a_minus,
        w,
        n_ss: (w > 0.0).then(|| a_plus / w),
        amplitudes: amp,
    })
}

/// Probe detuning satisfying Δ_gr − δ_ac = −ω.
pub fn optimal_probe_detuning(omega: f64, ac_stark: f64, driving_detuning: f64) -> f64 {
    driving_detuning + (ac_stark - omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproximateLimits {
    pub w_approx: f64,
    pub n_eit: f64,
    pub ratio: f64,
    pub n_st: f64,
    pub eta1_sq: f64,
    pub eta2_sq: f64,
    /// True when |Δ_g| is at least ten times ω, |Δ_gr| and δ_ac.
    pub in_regime: bool,
}

/// Large-detuning limits. `eta` is the main-text Lamb-Dicke parameter; the
/// split η_g = η_r = η/2 with opposite projections is assumed.
pub fn approximate_limits(
    omega: f64,
    probe: &LaserTone,
    driving: &LaserTone,
    atom: &AtomParams,
    eta: f64,
) -> Result<ApproximateLimits> {
    if omega == 0.0 {
        return Err(invalid("mode frequency must be non-zero"));
    }
    let dg = probe.detuning;
    let dgr = dg - driving.detuning;
    let stark = ac_stark_shift(driving).exact;
    let x = stark / omega;
    let mismatch = if dg > 0.0 { 1.0 - x } else { 1.0 + x };
    let ratio = 1.0 + 4.0 * atom.alpha * mismatch * mismatch;
    let eta1_sq = eta * eta;
    let eta2_sq = eta * eta * ratio;
    let n_eit = atom.gamma * atom.gamma / (16.0 * dg * dg);
    let scale = omega.abs().max(dgr.abs()).max(stark);
    Ok(ApproximateLimits {
        w_approx: eta1_sq * probe.rabi * probe.rabi / atom.gamma,
        n_eit,
        ratio,
        n_st: ratio * n_eit,
        eta1_sq,
        eta2_sq,
        in_regime: dg.abs() >= 10.0 * scale,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiToneHeating {
    pub total: f64,
    pub per_tone: Vec<f64>,
}

/// Heating coefficient of a mode at `omega` from a set of probe tones acting
/// through the dressed |+⟩ state.
pub fn multi_tone_heating(
    omega: f64,
    tones: &[LaserTone],
    dressed: &DressedState,
    atom: &AtomParams,
    eta: f64,
) -> Result<MultiToneHeating> {
    let gp = dressed.effective_linewidth;
    if !(gp > 0.0) {
        return Err(invalid("effective linewidth γ₊ must be positive"));
    }
    let d = dressed.ac_stark;
    let per_tone: Vec<f64> = tones
        .iter()
        .map(|tone| {
            let op = dressed.plus_rabi(tone.rabi) / 2.0;
            let dglr = tone.detuning - dressed.driving_detuning;
            let u = dglr / omega;
            let v = (dglr - omega) / omega;
            let carrier = atom.alpha * u * u / ((dglr - d).powi(2) + gp * gp / 4.0 * u * u);
            let blue = v * v / ((dglr - d - omega).powi(2) + gp * gp / 4.0 * v * v);
            gp * eta * eta * op * op * (carrier + blue)
        })
        .collect();
    Ok(MultiToneHeating {
        total: per_tone.iter().sum(),
        per_tone,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhononTrajectory {
    pub values: Vec<f64>,
    /// Set when W ≤ 0; the values then grow without bound.
    pub heating: bool,
}

/// ⟨n(t)⟩ = n_ss + (n0 − n_ss)e^{−Wt}; for W = 0 the linear limit n0 + A₊t.
pub fn phonon_trajectory(n0: f64, report: &RateReport, times: &[f64]) -> PhononTrajectory {
    let w = report.w;
    let values = times
        .iter()
        .map(|&t| {
            if w == 0.0 {
                n0 + report.a_plus * t
            } else {
                let nss = report.a_plus / w;
                nss + (n0 - nss) * (-w * t).exp()
            }
        })
        .collect();
    PhononTrajectory {
        values,
        heating: w <= 0.0,
    }
}

/// How η depends on the mode frequency in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EtaRule {
    Constant {
        eta: f64,
    },
    /// η = eta_at_1mhz/√(ω/2π·MHz).
    InverseSqrt {
        eta_at_1mhz: f64,
    },
}

impl EtaRule {
    pub fn eta(&self, omega: f64) -> f64 {
        match *self {
            EtaRule::Constant { eta } => eta,
            EtaRule::InverseSqrt { eta_at_1mhz } => eta_at_1mhz / units::to_mhz(omega).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub ac_stark: f64,
    pub driving_detuning: f64,
    pub probe_rabi: f64,
    pub eta_rule: EtaRule,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub omega: f64,
    pub eta: f64,
    pub parallel_detuning: f64,
    pub parallel: Option<RateReport>,
    pub eit: Option<RateReport>,
}

/// Parallel-EIT (Δ_g from the optimality condition) against plain EIT
/// (Δ_g = Δ_r) over a grid of mode frequencies. Failing points become gaps.
pub fn sweep_mode_frequency(grid: &[f64], settings: &SweepSettings, atom: &AtomParams) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(invalid("sweep grid is empty"));
    }
    atom.validate()?;
    let driving = LaserTone::new(
        driving_rabi_for_stark_shift(settings.ac_stark, settings.driving_detuning),
        settings.driving_detuning,
    );
    Ok(grid
        .par_iter()
        .map(|&omega| {
            let eta = settings.eta_rule.eta(omega);
            let mode = ModeCoupling::symmetric(omega, eta);
            let dg = optimal_probe_detuning(omega, settings.ac_stark, settings.driving_detuning);
            let parallel = rates(&LaserTone::new(settings.probe_rabi, dg), &driving, atom, &mode).ok();
            let eit = rates(
                &LaserTone::new(settings.probe_rabi, settings.driving_detuning),
                &driving,
                atom,
                &mode,
            )
            .ok();
            SweepPoint {
                omega,
                eta,
                parallel_detuning: dg,
                parallel,
                eit,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::from_mhz;
    use approx::assert_relative_eq;

    fn fig2_atom() -> AtomParams {
        AtomParams::new(from_mhz(20.7))
    }

    #[test]
    fn stark_shift_closed_forms() {
        assert_eq!(ac_stark_shift(&LaserTone::new(0.0, 5.0)).exact, 0.0);
        let s = ac_stark_shift(&LaserTone::new(7.0, 7.0)).exact;
        assert_relative_eq!(s, 7.0 * (2f64.sqrt() - 1.0) / 2.0, max_relative = 1e-14);
        let om = driving_rabi_for_stark_shift(from_mhz(2.0), from_mhz(330.0));
        assert_relative_eq!(om / from_mhz(1.0), 51.536, max_relative = 1e-4);
        assert_eq!(ac_stark_shift(&LaserTone::new(1.0, 0.0)).approx, None);
    }

    #[test]
    fn dressed_state_energies() {
        let drive = LaserTone::new(from_mhz(51.54), from_mhz(330.0));
        let d = DressedState::new(&drive, &fig2_atom());
        let split = (drive.rabi.powi(2) + drive.detuning.powi(2)).sqrt();
        assert_relative_eq!(d.energy_plus - d.energy_minus, split, max_relative = 1e-12);
        assert_relative_eq!(d.energy_plus, d.ac_stark, max_relative = 1e-9);
        assert!((d.mixing_angle.sin() - 0.0774).abs() < 5e-4);
    }

    #[test]
    fn char_function_examples() {
        let atom = AtomParams {
            gamma: 0.0,
            gamma_g: 0.0,
            gamma_r: 0.0,
            alpha: 0.0,
        };
        let f = char_function(0.3, &LaserTone::new(1.0, 2.0), &LaserTone::new(0.0, 0.5), &atom);
        assert_relative_eq!(f.re, 2.3 * 1.8, max_relative = 1e-14);
        assert_eq!(f.im, 0.0);
        let f = char_function(-1.5, &LaserTone::new(1.0, 2.0), &LaserTone::new(3.0, 0.5), &fig2_atom());
        assert_eq!(f.im, 0.0);
    }

    #[test]
    fn optimal_detuning_examples() {
        let d = optimal_probe_detuning(from_mhz(1.4), from_mhz(1.2), from_mhz(330.0));
        assert_relative_eq!(d / from_mhz(1.0), 329.8, max_relative = 1e-12);
        let d = optimal_probe_detuning(from_mhz(3.6), from_mhz(2.0), from_mhz(330.0));
        assert_relative_eq!(d / from_mhz(1.0), 328.4, max_relative = 1e-12);
        assert_eq!(optimal_probe_detuning(2.5, 2.5, 17.0), 17.0);
    }

    #[test]
    fn ratio_examples() {
        let drive = LaserTone::new(driving_rabi_for_stark_shift(2.0, 300.0), 300.0);
        let probe = LaserTone::new(0.1, 300.0);
        let atom = AtomParams::new(100.0);
        let r = approximate_limits(2.0, &probe, &drive, &atom, 0.1).unwrap();
        assert_relative_eq!(r.ratio, 1.0, epsilon = 1e-12);
        let r = approximate_limits(1.0, &probe, &drive, &atom, 0.1).unwrap();
        assert_relative_eq!(r.ratio, 7.0 / 3.0, max_relative = 1e-12);
        let r = approximate_limits(1.0, &probe, &drive, &atom.with_alpha(0.0), 0.1).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert!(approximate_limits(0.0, &probe, &drive, &atom, 0.1).is_err());
    }

    #[test]
    fn trajectory_example() {
        let amp = Amplitudes {
            carrier: Complex64::default(),
            t1: [Complex64::default(); 2],
            t2: [Complex64::default(); 2],
            t3: [Complex64::default(); 2],
        };
        let w = 0.0183;
        let report = RateReport {
            a_plus: 0.1 * w,
            a_minus: 1.1 * w,
            w,
            n_ss: Some(0.1),
            amplitudes: amp,
        };
        let tr = phonon_trajectory(10.0, &report, &[0.0, 3.0 / w, 1e6]);
        assert_relative_eq!(tr.values[0], 10.0, max_relative = 1e-14);
        assert_relative_eq!(tr.values[1], 0.1 + 9.9 * (-3.0f64).exp(), max_relative = 1e-12);
        assert!((tr.values[1] - 0.593).abs() < 1e-3);
        assert_relative_eq!(tr.values[2], 0.1, max_relative = 1e-12);
        assert!(!tr.heating);
    }
}
