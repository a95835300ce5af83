// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use peit_core::cooling::{
    build_dressed_model, build_single_mode_model, simulate_cooling, CoolingConfig, CoolingRun, Coupling, DressedModel,
    DressedSpec, SingleModeSpec, TwoDimensionalParams, TwoIonParams,
};
use peit_core::lindblad::EvolveOptions;
use peit_core::rates::{ac_stark_shift, optimal_probe_detuning, rates, LaserTone, ModeCoupling, RateReport};
use peit_core::units::{from_mhz, to_mhz};

use crate::config::{check, AtomConfig, DrivingConfig};
use crate::error::{CliError, Result};
use crate::hygiene;
use crate::output::{Cell, Metadata, Table};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub samples: usize,
    /// Duration as a multiple of 1/W for the slowest estimated rate; give
    /// this or `duration_us`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_rate_multiples: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_us: Option<f64>,
    /// Also run each mode alone with its own tone (multi-mode models only).
    pub single_mode_references: bool,
}

impl RunConfig {
    fn duration(&self, slowest_rate: Option<f64>) -> Result<f64> {
        match (self.duration_rate_multiples, self.duration_us) {
            (Some(m), None) => {
                check(m > 0.0, "duration_rate_multiples must be positive")?;
                match slowest_rate {
                    Some(w) if w > 0.0 => Ok(m / w),
                    _ => Err(CliError::Regime(
                        "no positive cooling-rate estimate to scale the duration by".into(),
                    )),
                }
            }
            (None, Some(t)) => {
                check(t > 0.0, "duration_us must be positive")?;
                Ok(t)
            }
            _ => Err(CliError::Config(
                "give exactly one of duration_rate_multiples and duration_us".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingName {
    FirstOrder,
    ExactDisplacement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleConfig {
    pub gamma_mhz: f64,
    pub alpha: f64,
    pub driving_detuning_mhz: f64,
    pub ac_stark_mhz: f64,
    pub probe_rabi_mhz: f64,
    /// Defaults to the cooling condition Δ_r + δ_ac − ω.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_detuning_mhz: Option<f64>,
    pub mode_frequency_mhz: f64,
    pub eta: f64,
    pub fock_dim: usize,
    pub initial_nbar: f64,
    pub coupling: CouplingName,
}

/// Single ion, axial and radial modes; frequencies in units of ω_z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoDimensionalConfig {
    pub omega_z_mhz: f64,
    pub omega_x_wz: f64,
    pub ac_stark_wz: f64,
    pub driving_detuning_wz: f64,
    pub gamma_wz: f64,
    pub alpha: f64,
    pub probe_rabi_wz: [f64; 2],
    pub probe_detuning_wz: [f64; 2],
    pub mismatch_wz: f64,
    pub eta_z: f64,
    pub theta_deg: f64,
    pub fock_dims: [usize; 2],
    pub initial_nbar: f64,
    pub resonant_only: bool,
}

/// Two ions, COM and stretch; frequencies in units of ω_z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoIonConfig {
    pub omega_z_mhz: f64,
    pub ac_stark_wz: f64,
    pub driving_detuning_wz: f64,
    pub gamma_wz: f64,
    pub alpha: f64,
    pub probe_rabi_wz: [f64; 2],
    pub probe_detuning_wz: [f64; 2],
    pub mismatch_wz: f64,
    pub eta_modes: [f64; 2],
    pub fock_dims: [usize; 2],
    pub initial_nbar: f64,
    pub resonant_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    Single(SingleConfig),
    TwoDimensional(TwoDimensionalConfig),
    TwoIon(TwoIonConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolConfig {
    pub run: RunConfig,
    pub model: ModelConfig,
}

impl SingleConfig {
    fn driving(&self) -> LaserTone {
        DrivingConfig {
            detuning_mhz: self.driving_detuning_mhz,
            ac_stark_mhz: self.ac_stark_mhz,
        }
        .tone()
    }

    pub fn probe_detuning(&self) -> f64 {
        let d = self.driving();
        self.probe_detuning_mhz.map(from_mhz).unwrap_or_else(|| {
            optimal_probe_detuning(from_mhz(self.mode_frequency_mhz), ac_stark_shift(&d).exact, d.detuning)
        })
    }

    pub fn cooling_config(&self) -> CoolingConfig {
        CoolingConfig {
            driving: self.driving(),
            probes: vec![LaserTone::new(from_mhz(self.probe_rabi_mhz), self.probe_detuning())],
            mismatch: 0.0,
            atom: AtomConfig {
                gamma_mhz: self.gamma_mhz,
                alpha: self.alpha,
            }
            .params(),
        }
    }

    pub fn mode(&self) -> ModeCoupling {
        ModeCoupling::symmetric(from_mhz(self.mode_frequency_mhz), self.eta)
    }

    pub fn theory(&self) -> Result<RateReport> {
        let c = self.cooling_config();
        Ok(rates(&c.probes[0], &c.driving, &c.atom, &self.mode())?)
    }
}

impl TwoDimensionalConfig {
    pub fn params(&self) -> TwoDimensionalParams {
        let s = from_mhz(self.omega_z_mhz);
        TwoDimensionalParams {
            omega_z: s,
            omega_x: s * self.omega_x_wz,
            ac_stark: s * self.ac_stark_wz,
            driving_detuning: s * self.driving_detuning_wz,
            gamma: s * self.gamma_wz,
            alpha: self.alpha,
            probe_rabi: self.probe_rabi_wz.map(|v| s * v),
            probe_detuning: self.probe_detuning_wz.map(|v| s * v),
            mismatch: s * self.mismatch_wz,
            eta_z: self.eta_z,
            theta: self.theta_deg.to_radians(),
            fock_dims: self.fock_dims,
            initial_nbar: self.initial_nbar,
            resonant_only: self.resonant_only,
        }
    }
}

impl TwoIonConfig {
    pub fn params(&self) -> TwoIonParams {
        let s = from_mhz(self.omega_z_mhz);
        TwoIonParams {
            omega_z: s,
            ac_stark: s * self.ac_stark_wz,
            driving_detuning: s * self.driving_detuning_wz,
            gamma: s * self.gamma_wz,
            alpha: self.alpha,
            probe_rabi: self.probe_rabi_wz.map(|v| s * v),
            probe_detuning: self.probe_detuning_wz.map(|v| s * v),
            mismatch: s * self.mismatch_wz,
            eta_modes: self.eta_modes,
            fock_dims: self.fock_dims,
            initial_nbar: self.initial_nbar,
            resonant_only: self.resonant_only,
        }
    }
}

pub struct CoolResult {
    pub run: CoolingRun,
    /// Single-mode runs, in mode order.
    pub references: Vec<CoolingRun>,
    /// Analytic rates (single-mode model only).
    pub theory: Option<RateReport>,
    pub resolved: Value,
    pub warnings: Vec<String>,
}

impl CoolResult {
    /// Every density-matrix run this result is made of.
    pub fn runs(&self) -> impl Iterator<Item = &CoolingRun> {
        std::iter::once(&self.run).chain(&self.references)
    }

    /// Modes whose fitted rate is not positive.
    pub fn heating_modes(&self) -> Vec<String> {
        self.run
            .modes
            .iter()
            .filter(|m| !m.fit.is_some_and(|f| f.w > 0.0))
            .map(|m| m.label.clone())
            .collect()
    }
}

fn slowest(rates: &[Option<f64>]) -> Option<f64> {
    rates
        .iter()
        .map(|r| r.filter(|w| *w > 0.0))
        .collect::<Option<Vec<f64>>>()?
        .into_iter()
        .reduce(f64::min)
}

fn run_dressed(label: &str, model: &DressedModel, run: &RunConfig) -> Result<CoolingRun> {
    let t = run.duration(slowest(&model.rate_estimates))?;
    Ok(simulate_cooling(
        label,
        &model.model,
        &model.mode_observables(),
        t,
        run.samples,
        &EvolveOptions::default(),
    )?)
}

fn describe(spec: &DressedSpec, model: &DressedModel, scale: f64) -> Value {
    json!({
        "frequency_unit": "omega_z",
        "omega_z_rad_per_us": scale,
        "tones": spec.tones.iter().map(|t| json!({
            "plus_rabi_wz": t.plus_rabi / scale,
            "frequency_wz": t.frequency / scale,
            "projection": t.projection,
        })).collect::<Vec<_>>(),
        "modes": spec.modes.iter().map(|m| json!({
            "label": m.label,
            "frequency_wz": m.frequency / scale,
            "eta": m.eta,
            "fock_dim": m.fock_dim,
        })).collect::<Vec<_>>(),
        "effective_linewidth_wz": spec.linewidth / scale,
        "rate_estimates_per_us": model.rate_estimates,
        "dropped_terms": model.dropped_terms,
        "initial_truncation_loss": model.initial_truncation_loss,
    })
}

fn dressed(
    spec: DressedSpec,
    single: impl Fn(usize) -> peit_core::Result<DressedSpec>,
    scale: f64,
    run: &RunConfig,
    warnings: Vec<String>,
) -> Result<CoolResult> {
    let model = build_dressed_model(&spec)?;
    let mut resolved = describe(&spec, &model, scale);
    let main = run_dressed("full", &model, run)?;
    let mut references = Vec::new();
    let mut durations = vec![main.times.last().copied()];
    if run.single_mode_references {
        for k in 0..spec.modes.len() {
            let m = build_dressed_model(&single(k)?)?;
            let r = run_dressed(&format!("single {}", spec.modes[k].label), &m, run)?;
            durations.push(r.times.last().copied());
            references.push(r);
        }
    }
    resolved["durations_us"] = json!(durations);
    Ok(CoolResult {
        run: main,
        references,
        theory: None,
        resolved,
        warnings,
    })
}

pub fn compute(cfg: &CoolConfig) -> Result<CoolResult> {
    check(cfg.run.samples >= 3, "samples must be at least 3")?;
    match &cfg.model {
        ModelConfig::Single(s) => {
            let cc = s.cooling_config();
            let warnings = cc.validate()?;
            let theory = s.theory()?;
            let spec = SingleModeSpec {
                mode: s.mode(),
                fock_dim: s.fock_dim,
                initial_nbar: s.initial_nbar,
                coupling: match s.coupling {
                    CouplingName::FirstOrder => Coupling::FirstOrder,
                    CouplingName::ExactDisplacement => Coupling::ExactDisplacement,
                },
                carrier_only: false,
            };
            let m = build_single_mode_model(&cc, &spec)?;
            let t = cfg.run.duration(Some(theory.w))?;
            let run = simulate_cooling(
                "single",
                &m.model,
                &m.mode_observables(Some(theory.w)),
                t,
                cfg.run.samples,
                &EvolveOptions::default(),
            )?;
            let resolved = json!({
                "driving_rabi_mhz": to_mhz(cc.driving.rabi),
                "probe_detuning_mhz": to_mhz(s.probe_detuning()),
                "duration_us": t,
                "initial_truncation_loss": m.initial_truncation_loss,
                "theory": theory,
            });
            Ok(CoolResult {
                run,
                references: Vec::new(),
                theory: Some(theory),
                resolved,
                warnings,
            })
        }
        ModelConfig::TwoDimensional(c) => {
            let p = c.params();
            let warnings = p.cooling_config().validate()?;
            dressed(p.spec()?, |k| p.single_mode_spec(k), p.omega_z, &cfg.run, warnings)
        }
        ModelConfig::TwoIon(c) => {
            let p = c.params();
            let warnings = p.cooling_config().validate()?;
            dressed(p.spec()?, |k| p.single_mode_spec(k), p.omega_z, &cfg.run, warnings)
        }
    }
}

/// `trajectory.csv`, `fits.csv` and, with references, `references.csv`.
pub fn tables(r: &CoolResult) -> Vec<(&'static str, Table)> {
    let mut traj =
        Table::new(std::iter::once("time_us".to_string()).chain(r.run.modes.iter().map(|m| format!("n_{}", m.label))));
    for (i, t) in r.run.times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![(*t).into()];
        row.extend(r.run.modes.iter().map(|m| m.values[i].into()));
        traj.push(row);
    }
    let mut fits = Table::new([
        "run",
        "mode",
        "w_fit_per_us",
        "n_ss_fit",
        "n0_fit",
        "residual_rms",
        "fit_start_us",
        "rate_estimate_per_us",
        "n_ss_theory",
        "final_n",
        "tail_final",
    ]);
    let theory_nss = r.theory.and_then(|t| t.n_ss);
    for run in r.runs() {
        for m in &run.modes {
            let f = m.fit;
            fits.push(vec![
                run.description.clone().into(),
                m.label.clone().into(),
                f.map(|f| f.w).into(),
                f.map(|f| f.n_ss).into(),
                f.map(|f| f.n0).into(),
                f.map(|f| f.residual_rms).into(),
                m.fit_start.into(),
                m.rate_estimate.into(),
                theory_nss.into(),
                m.final_value().into(),
                m.tail_final.into(),
            ]);
        }
    }
    let mut out = vec![("trajectory.csv", traj), ("fits.csv", fits)];
    if !r.references.is_empty() {
        let mut refs = Table::new(["run", "mode", "time_us", "n"]);
        for run in &r.references {
            for m in &run.modes {
                for (t, v) in run.times.iter().zip(&m.values) {
                    refs.push(vec![
                        run.description.clone().into(),
                        m.label.clone().into(),
                        (*t).into(),
                        (*v).into(),
                    ]);
                }
            }
        }
        out.push(("references.csv", refs));
    }
    out
}

pub fn metadata(cfg: &CoolConfig, source: String, r: &CoolResult) -> Result<Metadata> {
    let mut meta = Metadata::new("cool", source, cfg)?;
    meta.resolved = r.resolved.clone();
    meta.decisions = vec![
        "fit n_ss + (n0 − n_ss)e^{−Wt} from 0.5/W_est on; refit with n_ss = 0 if a cooling fit gives n_ss < 0".into(),
        "truncation tail is the population of the top two Fock levels of the final state".into(),
    ];
    if !matches!(cfg.model, ModelConfig::Single(_)) {
        meta.decisions.extend([
            "dressed |g⟩–|+⟩ model in the interaction picture of the modes".to_string(),
            "recoil jumps split into η σ₋ a and η σ₋ a† (secular approximation)".to_string(),
            "single-mode references keep one mode and its own tone".to_string(),
        ]);
    }
    meta.accuracy = json!(r
        .runs()
        .map(|run| json!({
            "run": run.description,
            "accuracy": run.accuracy,
            "tail_final": run.max_tail(),
            "tail_initial": run.modes.iter().map(|m| m.tail_initial).fold(0.0, f64::max),
        }))
        .collect::<Vec<_>>());
    meta.warnings = r.warnings.clone();
    for run in r.runs() {
        for m in &run.modes {
            meta.warnings.extend(
                m.warnings
                    .iter()
                    .map(|w| format!("{} {}: {w}", run.description, m.label)),
            );
        }
    }
    Ok(meta)
}

/// Accuracy violations, then regime violations, as a deferred exit status.
pub fn failure(r: &CoolResult) -> Option<CliError> {
    let v: Vec<String> = r.runs().flat_map(hygiene::cooling_violations).collect();
    if !v.is_empty() {
        return Some(CliError::Numerical(v.join("; ")));
    }
    let heating = r.heating_modes();
    (!heating.is_empty()).then(|| CliError::Regime(format!("modes do not cool: {}", heating.join(", "))))
}
