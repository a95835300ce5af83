// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use peit_core::cooling::*;
use peit_core::fit::fit_exponential_approach;
use peit_core::lindblad::{evolve, steady_state, EvolveOptions};
use peit_core::rates::*;
use peit_core::Error;

// Dimensionless test units (ω = 1) keep the fast-oscillating e level cheap.
const GAMMA: f64 = 20.0;
const DELTA_R: f64 = 50.0;

fn atom() -> AtomParams {
    AtomParams::new(GAMMA)
}

fn driving(stark: f64) -> LaserTone {
    LaserTone::new(driving_rabi_for_stark_shift(stark, DELTA_R), DELTA_R)
}

fn config(probe: LaserTone, stark: f64) -> CoolingConfig {
    CoolingConfig {
        driving: driving(stark),
        probes: vec![probe],
        mismatch: 0.0,
        atom: atom(),
    }
}

fn spec(eta: f64, fock_dim: usize, nbar: f64) -> SingleModeSpec {
    SingleModeSpec {
        mode: ModeCoupling::symmetric(1.0, eta),
        fock_dim,
        initial_nbar: nbar,
        coupling: Coupling::FirstOrder,
        carrier_only: false,
    }
}

#[test]
fn no_motional_coupling_leaves_phonons_constant() {
    let probe = LaserTone::new(1.0, optimal_probe_detuning(1.0, 2.0, DELTA_R));
    let m = build_single_mode_model(&config(probe, 2.0), &spec(0.0, 6, 0.4)).unwrap();
    let ev = evolve(
        &m.model,
        &[0.0, 5.0, 10.0, 20.0],
        std::slice::from_ref(&m.number),
        &EvolveOptions::default(),
    )
    .unwrap();
    let n0 = ev.expectations[0][0];
    for v in &ev.expectations[0] {
        assert!((v - n0).abs() < 1e-10, "{v} vs {n0}");
    }
}

#[test]
fn carrier_is_dark_at_two_photon_resonance() {
    let cfg = config(LaserTone::new(2.0, DELTA_R), 1.0);
    let ss = steady_state(&build_internal_model(&cfg).unwrap()).unwrap();
    assert!(ss.state[(1, 1)].re <= 1e-6, "{}", ss.state[(1, 1)].re);
}

#[test]
fn cooling_run_tracks_rate_theory() {
    // Weak probe in the resolved regime: W within 15% of the analytic rate.
    let (omega, stark) = (1.0, 1.5);
    let probe = LaserTone::new(0.5, optimal_probe_detuning(omega, stark, DELTA_R));
    let cfg = config(probe, stark);
    let mode = ModeCoupling::symmetric(omega, 0.1);
    let report = rates(&probe, &cfg.driving, &atom(), &mode).unwrap();
    assert!(report.w > 0.0);
    let m = build_single_mode_model(
        &cfg,
        &SingleModeSpec {
            mode,
            ..spec(0.1, 7, 0.3)
        },
    )
    .unwrap();
    let run = simulate_cooling(
        "test",
        &m.model,
        &m.mode_observables(Some(report.w)),
        5.0 / report.w,
        41,
        &EvolveOptions::default(),
    )
    .unwrap();
    let fit = run.modes[0].fit.unwrap();
    assert!((fit.w - report.w).abs() / report.w < 0.15, "{} vs {}", fit.w, report.w);
    let n_ss = report.n_ss.unwrap();
    assert!((fit.n_ss - n_ss).abs() <= (0.15 * n_ss).max(0.02));
    assert!(run.accuracy.max_trace_drift < 1e-8);
}

#[test]
fn fit_recovers_rate_trajectory() {
    let probe = LaserTone::new(0.5, optimal_probe_detuning(1.0, 1.5, DELTA_R));
    let report = rates(&probe, &driving(1.5), &atom(), &ModeCoupling::symmetric(1.0, 0.1)).unwrap();
    let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.05 / report.w).collect();
    let traj = phonon_trajectory(5.0, &report, &times);
    let fit = fit_exponential_approach(&times, &traj.values, 0.7 * report.w).unwrap();
    assert!((fit.w - report.w).abs() / report.w < 1e-9);
    assert!((fit.n_ss - report.n_ss.unwrap()).abs() < 1e-9);
    assert!((fit.n0 - 5.0).abs() < 1e-9);
}

#[test]
fn blue_tuned_probe_heats() {
    let (omega, stark) = (1.0, 1.5);
    // Red and blue roles swapped: the probe sits on the heating resonance.
    let probe = LaserTone::new(0.5, DELTA_R + stark + omega);
    let cfg = config(probe, stark);
    let report = rates(&probe, &cfg.driving, &atom(), &ModeCoupling::symmetric(omega, 0.1)).unwrap();
    assert!(report.w < 0.0);
    let m = build_single_mode_model(&cfg, &spec(0.1, 8, 0.2)).unwrap();
    let run = simulate_cooling(
        "heat",
        &m.model,
        &m.mode_observables(Some(report.w)),
        0.5 / report.w.abs(),
        21,
        &EvolveOptions::default(),
    )
    .unwrap();
    let s = &run.modes[0];
    assert!(s.fit.unwrap().w < 0.0);
    assert!(s.warnings.iter().any(|w| w.contains("heats")));
}

#[test]
fn idle_second_tone_leaves_radial_mode_alone() {
    let mut p = TwoDimensionalParams::reference();
    p.probe_rabi[1] = 0.0;
    p.fock_dims = [10, 10];
    p.initial_nbar = 1.0;
    let times = [0.0, 500.0, 1000.0, 2000.0];
    // Without recoil the radial mode is exactly decoupled; with it, tone 1's
    // scattering adds only a small diffusion.
    for (alpha, tol) in [(0.0, 1e-10), (1.0 / 3.0, 1e-3)] {
        p.alpha = alpha;
        let m = build_2d_model(&p).unwrap();
        let ev = evolve(&m.model, &times, &m.numbers, &EvolveOptions::default()).unwrap();
        let (z, x) = (&ev.expectations[0], &ev.expectations[1]);
        for v in x {
            assert!((v - x[0]).abs() < tol, "α = {alpha}: {v} vs {}", x[0]);
        }
        assert!(z[3] < 0.5 * z[0]);
    }
}

#[test]
fn truncation_change_barely_moves_the_fit() {
    let p = TwoDimensionalParams::reference();
    let mut fits = Vec::new();
    for f in [12, 16] {
        let mut s = p.single_mode_spec(0).unwrap();
        s.modes[0].fock_dim = f;
        s.modes[0].initial_nbar = 1.0;
        let m = build_dressed_model(&s).unwrap();
        let w = m.rate_estimates[0].unwrap();
        let run = simulate_cooling(
            "z",
            &m.model,
            &m.mode_observables(),
            4.0 / w,
            41,
            &EvolveOptions::default(),
        )
        .unwrap();
        fits.push(run.modes[0].fit.unwrap());
    }
    assert!((fits[0].w - fits[1].w).abs() / fits[1].w <= 0.05);
    assert!((fits[0].n_ss - fits[1].n_ss).abs() <= 0.05 * fits[1].n_ss.abs().max(0.02));
}

#[test]
fn two_ion_couplings_follow_mode_vectors() {
    let s = TwoIonParams::reference().spec().unwrap();
    let (com, stretch) = (&s.modes[0], &s.modes[1]);
    assert_eq!(com.label, "COM");
    assert!((com.eta[0] - com.eta[1]).abs() < 1e-12 && com.eta[0] > 0.0);
    assert!((stretch.eta[0] + stretch.eta[1]).abs() < 1e-12);
    assert!((com.eta[0].abs() - 0.24 / 2f64.sqrt()).abs() < 1e-12);
    assert!((stretch.frequency - 3f64.sqrt()).abs() < 1e-9);
    // Δ_g2r = 0.27 sits at δ_ac − √3 to the two quoted decimals.
    let dg2r = 330.27 - 330.0;
    assert!((dg2r - (2.0 - 3f64.sqrt())).abs() < 0.005);
    // Tone 2 is resonant with the stretch red sideband up to the mismatch.
    assert!((s.tones[1].frequency - stretch.frequency).abs() < 0.01);
}

#[test]
fn two_dimensional_reference_tones_hit_their_sidebands() {
    let p = TwoDimensionalParams::reference();
    let s = p.spec().unwrap();
    assert!((s.tones[0].frequency - 1.0 + 0.005).abs() < 1e-3);
    assert!((s.tones[1].frequency - 10.0 - 0.005).abs() < 1e-3);
    assert!((s.linewidth - 0.1198).abs() < 1e-3);
    let m = build_2d_model(&p).unwrap();
    assert_eq!(m.model.dim(), 2 * 18 * 18);
    assert!(m.dropped_terms > 0);
}

#[test]
fn oversized_models_are_refused() {
    let probe = LaserTone::new(1.0, DELTA_R);
    let err = build_single_mode_model(&config(probe, 2.0), &spec(0.1, 400, 1.0)).unwrap_err();
    assert!(matches!(err, Error::DimensionCap { .. }));
    let mut p = TwoIonParams::reference();
    p.fock_dims = [20, 20];
    assert!(matches!(
        build_two_ion_model(&p).unwrap_err(),
        Error::DimensionCap { .. }
    ));
}

#[test]
fn strong_probe_is_flagged() {
    let cfg = config(LaserTone::new(30.0, DELTA_R), 2.0);
    let warnings = cfg.validate().unwrap();
    assert_eq!(warnings.len(), 1);
}

#[test]
fn bare_line_is_lorentzian() {
    let grid: Vec<f64> = (-20..=20).map(|i| i as f64).collect();
    let rabi = 2.0;
    let prof = absorption_profile(&LaserTone::new(0.0, DELTA_R), &atom(), &grid, rabi).unwrap();
    let s = 2.0 * rabi * rabi / (GAMMA * GAMMA);
    for p in prof {
        let x = 2.0 * p.probe_detuning / GAMMA;
        let expected = GAMMA * 0.5 * s / (1.0 + s + x * x);
        assert!((p.scattering_rate - expected).abs() < 1e-8 * expected.max(1.0), "{p:?}");
    }
}

#[test]
fn profile_has_null_and_dressed_peak() {
    let stark = 2.0;
    let step = 0.02;
    let grid: Vec<f64> = (0..=400).map(|i| DELTA_R - 2.0 + i as f64 * step).collect();
    let prof = absorption_profile(&driving(stark), &atom(), &grid, 0.5).unwrap();
    let peak = prof
        .iter()
        .max_by(|a, b| a.scattering_rate.total_cmp(&b.scattering_rate))
        .unwrap();
    assert!(
        (peak.probe_detuning - (DELTA_R + stark)).abs() <= step + 1e-9,
        "{peak:?}"
    );
    let null = prof.iter().find(|p| (p.probe_detuning - DELTA_R).abs() < 1e-9).unwrap();
    assert!(null.scattering_rate <= 1e-8 * peak.scattering_rate);
}
