// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Three-level Λ atom coupled to one motional mode, in the laser frame.
//!
//! Levels: g = 0, e = 1, r = 2. The Hamiltonian is
//!
//! ```text
//! H = −Δ_g|e⟩⟨e| − Δ_gr|r⟩⟨r| + ω a†a
//!   + (Ω_g/2)|e⟩⟨g|D_g + (Ω_r/2)|e⟩⟨r|D_r + h.c.,
//! ```
//!
//! with D_j = 1 + iη_j cos φ_j (a + a†) to first order, or the full
//! displacement exp(iη_j cos φ_j (a + a†)).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::config::CoolingConfig;
use crate::error::{invalid, Result};
use crate::lindblad::layout::{self, annihilation, diagonal_density, product_density, pure_density};
use crate::lindblad::{HilbertLayout, Jump, Operator, OperatorTerm, QuantumModel, C64, DENSITY_DIM_CAP};
use crate::rates::ModeCoupling;

const G: usize = 0;
const E: usize = 1;
const R: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    FirstOrder,
    ExactDisplacement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleModeSpec {
    pub mode: ModeCoupling,
    pub fock_dim: usize,
    /// Mean phonon number of the initial thermal state.
    pub initial_nbar: f64,
    pub coupling: Coupling,
    /// Drop the η-dependent Hamiltonian terms (recoil jumps stay).
    pub carrier_only: bool,
}

#[derive(Debug, Clone)]
pub struct SingleModeModel {
    pub model: QuantumModel,
    pub number: Operator,
    pub excited: Operator,
    /// Thermal weight discarded by the Fock truncation.
    pub initial_truncation_loss: f64,
}

/// exp(iθ(a + a†)) on a truncated Fock space.
fn displacement(dim: usize, theta: f64) -> Operator {
    let a = annihilation(dim).to_dense();
    let x: DMatrix<f64> = (&a + a.adjoint()).map(|z| z.re);
    let eig = SymmetricEigen::new(x);
    let v = eig.eigenvectors.map(|r| C64::new(r, 0.0));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, theta * l)));
    Operator::from_dense(&(&v * phases * v.transpose()))
}

fn coupling_factor(
    layout: &HilbertLayout,
    dim: usize,
    theta: f64,
    coupling: Coupling,
    carrier_only: bool,
) -> Result<Operator> {
    let id = layout.identity();
    if carrier_only || theta == 0.0 {
        return Ok(id);
    }
    match coupling {
        Coupling::FirstOrder => {
            let a = layout.annihilation(1)?;
            let x = &a + &a.adjoint();
            Ok(&id + &x.scale(C64::new(0.0, theta)))
        }
        Coupling::ExactDisplacement => layout.embed(1, &displacement(dim, theta)),
    }
}

pub fn build_single_mode_model(config: &CoolingConfig, spec: &SingleModeSpec) -> Result<SingleModeModel> {
    config.validate()?;
    if config.probes.len() != 1 {
        return Err(invalid("the single-mode model takes exactly one probe tone"));
    }
    let f = spec.fock_dim;
    if f < 2 {
        return Err(invalid("Fock truncation must be at least 2"));
    }
    if !(spec.initial_nbar >= 0.0) {
        return Err(invalid("initial mean phonon number must be non-negative"));
    }
    let layout = HilbertLayout::new(vec![3, f])?;
    layout.check_cap(DENSITY_DIM_CAP)?;
    let atom = &config.atom;
    let probe = &config.probes[0];
    let dg = config.probe_detuning(0);
    let dgr = dg - config.driving.detuning;
    let m = &spec.mode;
    let c = |x: f64| C64::new(x, 0.0);

    let h0 = &(&layout.projector(0, E)?.scale(c(-dg)) + &layout.projector(0, R)?.scale(c(-dgr)))
        + &layout.number(1)?.scale(c(m.frequency));
    let dg_op = coupling_factor(&layout, f, m.eta_g * m.cos_g, spec.coupling, spec.carrier_only)?;
    let dr_op = coupling_factor(&layout, f, m.eta_r * m.cos_r, spec.coupling, spec.carrier_only)?;
    let v = &(&layout.transition(0, E, G)? * &dg_op).scale(c(probe.rabi / 2.0))
        + &(&layout.transition(0, E, R)? * &dr_op).scale(c(config.driving.rabi / 2.0));
    let h = &(&h0 + &v) + &v.adjoint();

    let a = layout.annihilation(1)?;
    let x = &a + &a.adjoint();
    let mut jumps = Vec::new();
    for (level, rate, eta) in [(G, atom.gamma_g, m.eta_g), (R, atom.gamma_r, m.eta_r)] {
        let l = layout.transition(0, level, E)?;
        if rate > 0.0 {
            jumps.push(Jump::new(l.clone(), rate));
            if eta != 0.0 && atom.alpha > 0.0 {
                jumps.push(Jump::new((&l * &x).scale(c(eta)), rate * atom.alpha));
            }
        }
    }

    let (pops, loss) = layout::thermal_populations(f, spec.initial_nbar);
    let rho0 = product_density(&[pure_density(3, G), diagonal_density(&pops)]);
    let model = QuantumModel::new(layout.clone(), vec![OperatorTerm::fixed(h)], jumps, rho0)?;
    Ok(SingleModeModel {
        model,
        number: layout.number(1)?,
        excited: layout.projector(0, E)?,
        initial_truncation_loss: loss,
    })
}

/// The atom alone (no motion): levels g, e, r driven by one probe and the
/// driving beam, with plain spontaneous decay. With the driving beam off the
/// atom is a closed two-level system decaying to g at the full γ.
pub fn build_internal_model(config: &CoolingConfig) -> Result<QuantumModel> {
    config.validate()?;
    if config.probes.len() != 1 {
        return Err(invalid("the internal model takes exactly one probe tone"));
    }
    let c = |x: f64| C64::new(x, 0.0);
    let dg = config.probe_detuning(0);
    let probe = config.probes[0].rabi / 2.0;
    if config.driving.rabi == 0.0 {
        let layout = HilbertLayout::new(vec![2])?;
        let v = layout.transition(0, E, G)?.scale(c(probe));
        let h = &(&layout.projector(0, E)?.scale(c(-dg)) + &v) + &v.adjoint();
        let jumps = vec![Jump::new(layout.transition(0, G, E)?, config.atom.gamma)];
        return QuantumModel::new(layout, vec![OperatorTerm::fixed(h)], jumps, pure_density(2, G));
    }
    let layout = HilbertLayout::new(vec![3])?;
    let dgr = dg - config.driving.detuning;
    let h0 = &layout.projector(0, E)?.scale(c(-dg)) + &layout.projector(0, R)?.scale(c(-dgr));
    let v =
        &layout.transition(0, E, G)?.scale(c(probe)) + &layout.transition(0, E, R)?.scale(c(config.driving.rabi / 2.0));
    let h = &(&h0 + &v) + &v.adjoint();
    let mut jumps = Vec::new();
    for (level, rate) in [(G, config.atom.gamma_g), (R, config.atom.gamma_r)] {
        if rate > 0.0 {
            jumps.push(Jump::new(layout.transition(0, level, E)?, rate));
        }
    }
    QuantumModel::new(layout, vec![OperatorTerm::fixed(h)], jumps, pure_density(3, G))
}
