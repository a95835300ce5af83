// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use peit_core::modes::{axial_modes, ChainConfig, TrapFrequencies};
use peit_core::thermometry::*;
use peit_core::Error;

fn single(nbar: f64) -> ThermometrySetup {
    ThermometrySetup {
        ion_count: 1,
        mode_label: "COM".into(),
        mode_frequency: 1.0,
        eta: vec![0.1],
        rabi: 1.0,
        initial_nbar: nbar,
        fock_truncation: default_truncation(1.0, 1),
        readout: Readout::AnyIon,
    }
}

fn grid(setup: &ThermometrySetup, samples: usize) -> Vec<f64> {
    probe_times(setup, samples)
}

#[test]
fn red_sideband_of_ground_state_stays_dark() {
    let s = single(0.0);
    let sig = sideband_signal(&s, Sideband::Red, 0, &grid(&s, 101)).unwrap();
    assert!(sig.p_up.iter().all(|p| p.abs() < 1e-12));
}

#[test]
fn blue_sideband_of_ground_state_is_sine_squared() {
    let s = single(0.0);
    let times = grid(&s, 201);
    let sig = sideband_signal(&s, Sideband::Blue, 0, &times).unwrap();
    for (t, p) in times.iter().zip(&sig.p_up) {
        let expected = (0.1 * t / 2.0).sin().powi(2);
        assert!((p - expected).abs() < 1e-6, "t = {t}: {p} vs {expected}");
    }
    assert!(sig.max_norm_drift < 1e-9);
}

#[test]
fn single_ion_thermal_ratio_is_exact() {
    for nbar in [0.2, 0.5, 1.0] {
        // Blue sums reach one Fock level further than red, so the ratio error
        // tracks the tail weight; keep it far below the tolerance.
        let s = ThermometrySetup {
            fock_truncation: 40,
            ..single(nbar)
        };
        let times = grid(&s, 301);
        let b = thermal_signal(&s, Sideband::Blue, &times).unwrap();
        let r = thermal_signal(&s, Sideband::Red, &times).unwrap();
        assert!(b.truncation_loss <= 1e-9);
        for i in 1..times.len() {
            if b.p_up[i] < 1e-6 {
                continue;
            }
            let ratio = r.p_up[i] / b.p_up[i];
            assert!(
                (ratio - nbar / (nbar + 1.0)).abs() < 1e-6,
                "n̄ = {nbar}, i = {i}: {ratio}"
            );
            let est = asymmetry_estimate(b.p_up[i], r.p_up[i], 1.0).unwrap();
            assert!((est - nbar).abs() < 1e-4);
        }
    }
}

#[test]
fn single_ion_factor_is_one() {
    let grid: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
    let f = correction_factor(&single(0.5), &grid).unwrap();
    assert!((f.value - 1.0).abs() < 0.01, "{}", f.value);
    assert!(f.r_squared > 0.999);
}

#[test]
fn worked_asymmetry_example() {
    let n = asymmetry_estimate(129.0, 21.0, 2.06).unwrap();
    assert_eq!(format!("{n:.2}"), "0.40");
    assert_eq!(asymmetry_estimate(0.4, 0.0, 2.0).unwrap(), 0.0);
    assert!(matches!(
        asymmetry_estimate(0.2, 0.3, 1.0),
        Err(Error::Saturated { .. })
    ));
    assert!(matches!(
        asymmetry_estimate(0.2, 0.2, 1.0),
        Err(Error::Saturated { .. })
    ));
}

#[test]
fn fitted_traces_give_the_worked_estimate() {
    let times: Vec<f64> = (0..120).map(|i| i as f64 * 0.5).collect();
    let trace = |amp: f64, omega: f64| -> Vec<f64> {
        times
            .iter()
            .map(|t| 0.5 * amp * (1.0 - (-0.01 * t).exp() * (omega * t).cos()))
            .collect()
    };
    let (b, r) = (trace(129.0, 0.21), trace(21.0, 0.15));
    let est = estimate_from_traces((&times, &b), (&times, &r), 2.06).unwrap();
    assert!((est.blue.amplitude - 129.0).abs() < 1e-3 * 129.0);
    assert!((est.red.amplitude - 21.0).abs() < 1e-3 * 21.0);
    assert_eq!(format!("{:.2}", est.nbar), "0.40");
}

#[test]
fn four_ion_com_red_stays_below_blue() {
    let chain = ChainConfig::new(4, TrapFrequencies::from_mhz(0.6, 1.706, 1.754));
    let modes = axial_modes(&chain).unwrap();
    let k_proj = 2.0 * std::f64::consts::PI / 0.729;
    let s = ThermometrySetup::from_modes(&modes, modes.com_index(), k_proj, chain.mass, 1.0, 0.5).unwrap();
    let times = grid(&s, 301);
    let b = thermal_signal(&s, Sideband::Blue, &times).unwrap();
    let r = thermal_signal(&s, Sideband::Red, &times).unwrap();
    assert_eq!(b.p_up[0], 0.0);
    assert_eq!(r.p_up[0], 0.0);
    for i in 1..times.len() {
        assert!(r.p_up[i] < b.p_up[i], "i = {i}");
        assert!((0.0..=1.0).contains(&b.p_up[i]));
    }
    assert_eq!(b.per_ion.len(), 4);
    assert!(b.max_norm_drift < 1e-9);
}

#[test]
fn setups_are_validated() {
    let mut s = single(0.5);
    s.fock_truncation = 5;
    assert!(s.validate().is_err());
    let mut s = single(0.5);
    s.eta = vec![0.0];
    assert!(s.validate().is_err());
    let s = single(0.5);
    assert!(correction_factor(&s, &[0.1, 0.2]).is_err());
    assert!(sideband_signal(&s, Sideband::Blue, 0, &[1.0, 2.0]).is_err());
}
