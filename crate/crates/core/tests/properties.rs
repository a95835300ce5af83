// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use proptest::prelude::*;

use peit_core::modes::*;
use peit_core::rates::*;
use peit_core::units::from_mhz;

fn stable_trap(axial: f64, ratio: f64) -> TrapFrequencies {
    TrapFrequencies::from_mhz(axial, ratio * axial, 1.02 * ratio * axial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chains_are_balanced_and_symmetric(n in 1usize..=12, axial in 0.3f64..3.0) {
        let c = ChainConfig::new(n, stable_trap(axial, 6.0));
        let eq = equilibrium_positions(&c).unwrap();
        prop_assert!(eq.residual_force <= 1e-10);
        for j in 0..n {
            prop_assert!((eq.positions[j] + eq.positions[n - 1 - j]).abs() < 1e-9);
        }
        prop_assert!(eq.positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn every_branch_is_orthonormal(n in 1usize..=8, axial in 0.3f64..3.0, ratio in 5.0f64..8.0) {
        let c = ChainConfig::new(n, stable_trap(axial, ratio));
        for axis in Axis::ALL {
            let m = if axis == Axis::Z { axial_modes(&c) } else { transverse_modes(&c, axis) }.unwrap();
            let b = &m.eigenvectors;
            let gram = b.transpose() * b;
            for i in 0..n {
                for j in 0..n {
                    let id = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((gram[(i, j)] - id).abs() < 1e-9);
                }
            }
            prop_assert!(m.frequencies.iter().all(|w| *w > 0.0));
            prop_assert!(m.frequencies.windows(2).all(|w| w[0] <= w[1]));
            let com = m.vector(m.com_index());
            let s = com[0].signum();
            prop_assert!(com.iter().all(|x| (s * x - 1.0 / (n as f64).sqrt()).abs() < 1e-9));
        }
    }

    #[test]
    fn lamb_dicke_scales_with_vector_over_root_frequency(n in 2usize..=6, k_proj in 1.0f64..12.0) {
        let c = ChainConfig::new(n, stable_trap(1.0, 6.0));
        let m = axial_modes(&c).unwrap();
        let eta = m.lamb_dicke(k_proj, c.mass);
        let mut reference = None;
        for k in 0..n {
            for j in 0..n {
                let b = m.eigenvectors[(j, k)];
                if b.abs() < 1e-3 {
                    continue;
                }
                let r = eta[(j, k)] * m.frequencies[k].sqrt() / b;
                let r0 = *reference.get_or_insert(r);
                prop_assert!((r - r0).abs() <= 1e-9 * r0.abs());
            }
        }
    }

    #[test]
    fn rates_are_non_negative(
        omega in 0.5f64..30.0,
        stark in 0.5f64..20.0,
        probe_rabi in 0.1f64..20.0,
        offset in -40.0f64..40.0,
        eta in 0.01f64..0.3,
        alpha in 0.0f64..1.0,
    ) {
        let atom = AtomParams::new(from_mhz(20.7)).with_alpha(alpha);
        let delta_r = from_mhz(330.0);
        let driving = LaserTone::new(driving_rabi_for_stark_shift(stark, delta_r), delta_r);
        let probe = LaserTone::new(probe_rabi, delta_r + offset);
        let r = rates(&probe, &driving, &atom, &ModeCoupling::symmetric(omega, eta)).unwrap();
        prop_assert!(r.a_plus >= 0.0 && r.a_minus >= 0.0);
        prop_assert_eq!(r.n_ss.is_some(), r.w > 0.0);
        if let Some(n) = r.n_ss {
            prop_assert!(n.is_finite());
        }
    }

    #[test]
    fn ratio_is_at_least_one(omega in 0.5f64..30.0, stark in 0.5f64..20.0, alpha in 0.01f64..1.0) {
        let atom = AtomParams::new(from_mhz(20.7)).with_alpha(alpha);
        let delta_r = from_mhz(330.0);
        let driving = LaserTone::new(driving_rabi_for_stark_shift(stark, delta_r), delta_r);
        let probe = LaserTone::new(1.0, optimal_probe_detuning(omega, stark, delta_r));
        let lim = approximate_limits(omega, &probe, &driving, &atom, 0.1).unwrap();
        prop_assert!(lim.ratio >= 1.0);
        let tuned = LaserTone::new(driving_rabi_for_stark_shift(omega, delta_r), delta_r);
        let at_match = approximate_limits(omega, &probe, &tuned, &atom, 0.1).unwrap();
        prop_assert!((at_match.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn light_shift_approximation_holds_for_weak_driving(delta_r in 10.0f64..3000.0, frac in 0.0f64..0.3) {
        let driving = LaserTone::new(frac * delta_r, delta_r);
        let s = ac_stark_shift(&driving);
        if s.exact > 0.0 {
            prop_assert!((s.approx.unwrap() - s.exact).abs() <= 0.05 * s.exact);
        }
        let d = DressedState::new(&driving, &AtomParams::new(1.0));
        let split = (driving.rabi.powi(2) + delta_r * delta_r).sqrt();
        prop_assert!((d.energy_plus - d.energy_minus - split).abs() <= 1e-12 * split);
        prop_assert!((d.ac_stark - d.energy_plus).abs() <= 1e-12 * split);
        prop_assert!(d.ac_stark >= 0.0);
    }

    #[test]
    fn stark_inverse_round_trips(stark in 0.01f64..50.0, delta_r in 10.0f64..3000.0) {
        let s = ac_stark_shift(&LaserTone::new(driving_rabi_for_stark_shift(stark, delta_r), delta_r));
        prop_assert!((s.exact - stark).abs() <= 1e-9 * stark.max(1.0));
    }

    #[test]
    fn tone_heating_adds_up(rabis in prop::collection::vec(0.1f64..10.0, 1..5), omega in 1.0f64..20.0) {
        let atom = AtomParams::new(from_mhz(20.0)).with_alpha(0.4);
        let delta_r = from_mhz(330.0);
        let driving = LaserTone::new(driving_rabi_for_stark_shift(from_mhz(2.0), delta_r), delta_r);
        let dressed = DressedState::new(&driving, &atom);
        let tones: Vec<LaserTone> = rabis
            .iter()
            .enumerate()
            .map(|(i, &r)| LaserTone::new(r, delta_r + dressed.ac_stark - omega + i as f64))
            .collect();
        let total = multi_tone_heating(omega, &tones, &dressed, &atom, 0.1).unwrap();
        let singles: f64 = tones
            .iter()
            .map(|t| multi_tone_heating(omega, std::slice::from_ref(t), &dressed, &atom, 0.1).unwrap().total)
            .sum();
        prop_assert!((total.total - singles).abs() <= 1e-12 * singles.abs().max(1e-300));
        prop_assert!(total.per_tone.iter().all(|a| *a >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cooling_peaks_at_predicted_detuning(omega_mhz in 0.6f64..4.0, stark_mhz in 1.0f64..3.0) {
        let atom = AtomParams::new(from_mhz(20.7));
        let delta_r = from_mhz(330.0);
        let (omega, stark) = (from_mhz(omega_mhz), from_mhz(stark_mhz));
        let driving = LaserTone::new(driving_rabi_for_stark_shift(stark, delta_r), delta_r);
        let predicted = optimal_probe_detuning(omega, stark, delta_r);
        let step = from_mhz(0.02);
        let mode = ModeCoupling::symmetric(omega, 0.1);
        let best = (-200..=200)
            .map(|i| predicted + i as f64 * step)
            .map(|dg| (dg, rates(&LaserTone::new(from_mhz(1.0), dg), &driving, &atom, &mode).unwrap().a_minus))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        prop_assert!((best.0 - predicted).abs() <= step + 1e-9, "{} vs {}", best.0, predicted);
    }
}
