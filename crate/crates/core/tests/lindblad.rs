// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use peit_core::lindblad::layout::{self, diagonal_density, product_density, pure_density, thermal_populations};
use peit_core::lindblad::{
    evolve, evolve_pure, steady_state, EvolveOptions, HilbertLayout, Jump, Operator, OperatorTerm, QuantumModel, C64,
};
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn two_level() -> (HilbertLayout, Operator, Operator, Operator) {
    let l = HilbertLayout::new(vec![2]).unwrap();
    // level 0 = g, level 1 = e
    let sp = l.transition(0, 1, 0).unwrap();
    let sm = l.transition(0, 0, 1).unwrap();
    let pe = l.projector(0, 1).unwrap();
    (l, sp, sm, pe)
}

fn grid(n: usize, t_max: f64) -> Vec<f64> {
    (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
}

fn sequential() -> EvolveOptions {
    EvolveOptions {
        step_map_limit: 0,
        reduced_support: false,
        ..EvolveOptions::default()
    }
}

#[test]
fn free_evolution_is_constant() {
    let l = HilbertLayout::new(vec![2, 3]).unwrap();
    let mut rho = pure_density(6, 4);
    rho[(4, 4)] = c(0.5);
    rho[(1, 1)] = c(0.5);
    rho[(1, 4)] = c(0.3);
    rho[(4, 1)] = c(0.3);
    let model = QuantumModel::new(l.clone(), vec![], vec![], rho).unwrap();
    let obs = vec![l.number(1).unwrap(), l.projector(0, 0).unwrap()];
    for opts in [EvolveOptions::default(), sequential()] {
        let ev = evolve(&model, &grid(10, 5.0), &obs, &opts).unwrap();
        for series in &ev.expectations {
            for v in series {
                assert!((v - series[0]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn spontaneous_decay_matches_exponential() {
    let (l, _sp, sm, pe) = two_level();
    let gamma = 1.7;
    let model = QuantumModel::new(l, vec![], vec![Jump::new(sm, gamma)], pure_density(2, 1)).unwrap();
    let times = grid(40, 3.0);
    for opts in [EvolveOptions::default(), sequential()] {
        let ev = evolve(&model, &times, std::slice::from_ref(&pe), &opts).unwrap();
        for (t, p) in times.iter().zip(&ev.expectations[0]) {
            assert!((p - (-gamma * t).exp()).abs() < 1e-6, "{t} {p}");
        }
        assert!(ev.accuracy.max_trace_drift < 1e-12);
    }
}

fn rabi_model(omega: f64) -> (QuantumModel, Operator) {
    let (l, sp, _sm, pe) = two_level();
    let h = (&sp + &sp.adjoint()).scale(c(omega / 2.0));
    (
        QuantumModel::new(l, vec![OperatorTerm::fixed(h)], vec![], pure_density(2, 0)).unwrap(),
        pe,
    )
}

#[test]
fn resonant_rabi_flopping() {
    let omega = 2.3;
    let (model, pe) = rabi_model(omega);
    let times = grid(50, 6.0);
    for opts in [EvolveOptions::default(), sequential()] {
        let ev = evolve(&model, &times, std::slice::from_ref(&pe), &opts).unwrap();
        for (t, p) in times.iter().zip(&ev.expectations[0]) {
            assert!((p - (omega * t / 2.0).sin().powi(2)).abs() < 1e-6);
        }
        assert!(ev.accuracy.min_eigenvalue > -1e-7);
        assert!(ev.accuracy.max_hermiticity_error < 1e-12);
    }
}

#[test]
fn rk4_convergence_order() {
    let omega = 2.0;
    let (model, pe) = rabi_model(omega);
    let t = 5.0;
    let err = |dt: f64| {
        let opts = EvolveOptions {
            dt: Some(dt),
            ..sequential()
        };
        let ev = evolve(&model, &[t], std::slice::from_ref(&pe), &opts).unwrap();
        (ev.expectations[0][0] - (omega * t / 2.0).sin().powi(2)).abs()
    };
    let (e1, e2) = (err(0.2), err(0.1));
    assert!(e1 / e2 >= 8.0, "ratio {}", e1 / e2);
}

#[test]
fn oscillating_term_matches_rotating_frame() {
    // Drive detuned by δ: lab-frame coupling (Ω/2)σ₊e^{−iδt} + h.c. versus
    // the static frame H = −δ|e⟩⟨e| + (Ω/2)(σ₊ + σ₋).
    let (l, sp, sm, pe) = two_level();
    let (omega, delta, gamma) = (1.3, 0.8, 0.2);
    let rot = QuantumModel::new(
        l.clone(),
        vec![OperatorTerm::rotating(sp.scale(c(omega / 2.0)), -delta)],
        vec![Jump::new(sm.clone(), gamma)],
        pure_density(2, 0),
    )
    .unwrap();
    let h = &pe.scale(c(-delta)) + &(&sp + &sm).scale(c(omega / 2.0));
    let stat = QuantumModel::new(
        l,
        vec![OperatorTerm::fixed(h)],
        vec![Jump::new(sm, gamma)],
        pure_density(2, 0),
    )
    .unwrap();
    let times = grid(30, 8.0);
    let a = evolve(&rot, &times, std::slice::from_ref(&pe), &EvolveOptions::default()).unwrap();
    let b = evolve(&stat, &times, &[pe], &EvolveOptions::default()).unwrap();
    for (x, y) in a.expectations[0].iter().zip(&b.expectations[0]) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn steady_state_of_pure_decay() {
    let (l, _sp, sm, _pe) = two_level();
    let model = QuantumModel::new(l, vec![], vec![Jump::new(sm, 1.0)], pure_density(2, 1)).unwrap();
    let ss = steady_state(&model).unwrap();
    assert!((ss.state[(0, 0)].re - 1.0).abs() < 1e-12);
    assert!(ss.residual < 1e-10);
}

#[test]
fn optical_bloch_steady_state() {
    let (l, sp, sm, pe) = two_level();
    let (omega, gamma) = (0.9, 1.4);
    let h = (&sp + &sm).scale(c(omega / 2.0));
    let model = QuantumModel::new(
        l,
        vec![OperatorTerm::fixed(h)],
        vec![Jump::new(sm, gamma)],
        pure_density(2, 0),
    )
    .unwrap();
    let ss = steady_state(&model).unwrap();
    let s = 2.0 * omega * omega / (gamma * gamma);
    let pe_ss = pe.expectation(&ss.state).re;
    assert!((pe_ss - s / (2.0 * (1.0 + s))).abs() < 1e-12);
}

#[test]
fn lambda_system_dark_state() {
    // g = 0, e = 1, r = 2; two-photon resonance.
    let l = HilbertLayout::new(vec![3]).unwrap();
    let (og, or, d) = (3.0, 50.0, 300.0);
    let h = &(&l.projector(0, 1).unwrap().scale(c(-d)) + &l.projector(0, 2).unwrap().scale(c(0.0)))
        + &(&(&l.transition(0, 1, 0).unwrap().scale(c(og / 2.0)) + &l.transition(0, 1, 2).unwrap().scale(c(or / 2.0)))
            + &(&l.transition(0, 0, 1).unwrap().scale(c(og / 2.0))
                + &l.transition(0, 2, 1).unwrap().scale(c(or / 2.0))));
    let jumps = vec![
        Jump::new(l.transition(0, 0, 1).unwrap(), 65.0),
        Jump::new(l.transition(0, 2, 1).unwrap(), 65.0),
    ];
    let model = QuantumModel::new(l.clone(), vec![OperatorTerm::fixed(h)], jumps, pure_density(3, 0)).unwrap();
    let ss = steady_state(&model).unwrap();
    assert!(l.projector(0, 1).unwrap().expectation(&ss.state).re <= 1e-10);
    assert!(ss.residual <= 1e-10, "{}", ss.residual);
}

#[test]
fn ambiguous_steady_state_reported() {
    // An undriven third level that nothing decays into or out of.
    let l = HilbertLayout::new(vec![3]).unwrap();
    let model = QuantumModel::new(
        l.clone(),
        vec![],
        vec![Jump::new(l.transition(0, 0, 1).unwrap(), 1.0)],
        pure_density(3, 0),
    )
    .unwrap();
    assert!(matches!(
        steady_state(&model),
        Err(peit_core::Error::AmbiguousSteadyState { .. })
    ));
}

#[test]
fn invalid_models_rejected() {
    let (l, sp, sm, _) = two_level();
    assert!(QuantumModel::new(
        l.clone(),
        vec![OperatorTerm::fixed(sp.clone())],
        vec![],
        pure_density(2, 0)
    )
    .is_err());
    assert!(QuantumModel::new(l.clone(), vec![], vec![Jump::new(sm, -1.0)], pure_density(2, 0)).is_err());
    let mut rho = pure_density(2, 0);
    rho[(1, 1)] = c(0.5);
    assert!(QuantumModel::new(l, vec![], vec![], rho).is_err());
}

#[test]
fn pure_state_free_and_unitary() {
    let l = HilbertLayout::new(vec![2, 6]).unwrap();
    let psi0: Vec<C64> = (0..12).map(|i| if i == 3 { c(1.0) } else { c(0.0) }).collect();
    let ev = evolve_pure(&l, &[], &psi0, &grid(5, 2.0), &[], None).unwrap();
    assert_eq!(ev.final_state, psi0);

    let a = l.annihilation(1).unwrap();
    let sp = l.transition(0, 1, 0).unwrap();
    let h = (&(&sp * &a.adjoint()) + &(&sp.adjoint() * &a)).scale(c(0.4));
    let ev = evolve_pure(&l, &[OperatorTerm::fixed(h)], &psi0, &grid(100, 40.0), &[], None).unwrap();
    assert!(ev.max_norm_drift <= 1e-9, "{}", ev.max_norm_drift);
}

#[test]
fn blue_sideband_jaynes_cummings() {
    let (eta, omega, n) = (0.08, 1.5, 3usize);
    let f = 8;
    let l = HilbertLayout::new(vec![2, f]).unwrap();
    let a = l.annihilation(1).unwrap();
    let sp = l.transition(0, 1, 0).unwrap();
    // H_b = (iηΩ/2)σ₊a† + h.c.
    let m = (&sp * &a.adjoint()).scale(C64::new(0.0, eta * omega / 2.0));
    let h = &m + &m.adjoint();
    let idx = l.basis_index(&[0, n]).unwrap();
    let mut psi0 = vec![c(0.0); 2 * f];
    psi0[idx] = c(1.0);
    let times = grid(60, 60.0);
    let ev = evolve_pure(
        &l,
        &[OperatorTerm::fixed(h)],
        &psi0,
        &times,
        &[l.projector(0, 1).unwrap()],
        None,
    )
    .unwrap();
    let g = eta * omega * ((n + 1) as f64).sqrt();
    for (t, p) in times.iter().zip(&ev.expectations[0]) {
        assert!((p - (g * t / 2.0).sin().powi(2)).abs() < 1e-6);
    }
}

#[test]
fn thermal_populations_feed_models() {
    let (p, _) = layout::thermal_populations(24, 1.0);
    let rho = layout::diagonal_density(&p);
    let l = HilbertLayout::new(vec![24]).unwrap();
    let model = QuantumModel::new(l.clone(), vec![], vec![], rho).unwrap();
    let n = l.number(0).unwrap().expectation(&model.initial_state).re;
    assert!((n - 1.0).abs() < 2e-3);
}

#[test]
fn reduced_support_matches_dense_integration() {
    // Red sideband with decay conserves n + P_e up to jumps, so ρ stays block
    // diagonal and the reduced path is taken.
    let l = HilbertLayout::new(vec![2, 8]).unwrap();
    let a = l.annihilation(1).unwrap();
    let sp = l.transition(0, 1, 0).unwrap();
    let sm = sp.adjoint();
    let m = (&sp * &a).scale(C64::new(0.0, 0.3));
    let terms = vec![OperatorTerm::rotating(m, 0.05)];
    let jumps = vec![
        Jump::new(sm.clone(), 0.4),
        Jump::new((&sm * &a).scale(c(0.1)), 0.1),
        Jump::new((&sm * &a.adjoint()).scale(c(0.1)), 0.1),
    ];
    let (p, _) = thermal_populations(8, 0.8);
    let rho = product_density(&[pure_density(2, 0), diagonal_density(&p)]);
    let model = QuantumModel::new(l.clone(), terms, jumps, rho).unwrap();
    let obs = vec![l.number(1).unwrap(), l.projector(0, 1).unwrap()];
    let times = grid(20, 30.0);
    let fast = evolve(&model, &times, &obs, &EvolveOptions::default()).unwrap();
    let dense = evolve(&model, &times, &obs, &sequential()).unwrap();
    assert!(
        fast.accuracy.method.starts_with("rk4-reduced"),
        "{}",
        fast.accuracy.method
    );
    assert_eq!(dense.accuracy.method, "rk4");
    for k in 0..2 {
        for (x, y) in fast.expectations[k].iter().zip(&dense.expectations[k]) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }
    assert!((&fast.final_state - &dense.final_state).camax() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn damped_drive_preserves_state_properties(
        omega in 0.1f64..3.0, delta in -2.0f64..2.0, gamma in 0.05f64..2.0, t in 0.5f64..6.0,
    ) {
        let (l, sp, sm, pe) = two_level();
        let h = &pe.scale(c(-delta)) + &(&sp + &sm).scale(c(omega / 2.0));
        let model = QuantumModel::new(l, vec![OperatorTerm::fixed(h)], vec![Jump::new(sm, gamma)], pure_density(2, 0)).unwrap();
        let ev = evolve(&model, &grid(8, t), &[pe], &sequential()).unwrap();
        prop_assert!(ev.accuracy.max_trace_drift <= 1e-8);
        prop_assert!(ev.accuracy.max_hermiticity_error <= 1e-9);
        prop_assert!(ev.accuracy.min_eigenvalue >= -1e-7);
        for p in &ev.expectations[0] {
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(p));
        }
    }

    #[test]
    fn step_map_agrees_with_sequential(
        omega in 0.1f64..3.0, delta in -2.0f64..2.0, gamma in 0.05f64..2.0,
    ) {
        let (l, sp, sm, pe) = two_level();
        let h = &pe.scale(c(-delta)) + &(&sp + &sm).scale(c(omega / 2.0));
        let model = QuantumModel::new(l, vec![OperatorTerm::fixed(h)], vec![Jump::new(sm, gamma)], pure_density(2, 0)).unwrap();
        let times = grid(6, 3.0);
        let a = evolve(&model, &times, std::slice::from_ref(&pe), &sequential()).unwrap();
        let b = evolve(&model, &times, &[pe], &EvolveOptions::default()).unwrap();
        for (x, y) in a.expectations[0].iter().zip(&b.expectations[0]) {
            prop_assert!((x - y).abs() < 1e-7);
        }
    }
}
