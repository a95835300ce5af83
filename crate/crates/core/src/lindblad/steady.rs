// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use nalgebra::{DMatrix, DVector};

use super::dense::{liouvillian, unvectorize, vectorize};
use super::model::QuantumModel;
use super::operator::C64;
use crate::error::{invalid, Error, Result};

/// Largest d² handled by the dense null-space solve.
pub const STEADY_STATE_LIMIT: usize = 1600;

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: DMatrix<C64>,
    /// max |dρ/dt| entry at the returned state.
    pub residual: f64,
}

/// Unique stationary state of a static model.
pub fn steady_state(model: &QuantumModel) -> Result<SteadyState> {
    if !model.is_static() {
        return Err(invalid("steady state requires a static Hamiltonian"));
    }
    if !model.jumps.iter().any(|j| j.rate > 0.0 && j.operator.nnz() > 0) {
        return Err(invalid("steady state requires at least one dissipative channel"));
    }
    let d = model.dim();
    if d * d > STEADY_STATE_LIMIT {
        return Err(Error::DimensionCap {
            dim: d * d,
            cap: STEADY_STATE_LIMIT,
        });
    }
    let s = liouvillian(model);
    let sv = s.clone().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let null_dim = sv.iter().filter(|&&x| x <= 1e-12 * smax).count();
    if null_dim > 1 {
        return Err(Error::AmbiguousSteadyState { dim: null_dim });
    }
    // Replace the ρ₀₀ equation, which is redundant with trace conservation,
    // by tr ρ = 1.
    let dd = d * d;
    let mut a = s.clone();
    for c in 0..dd {
        a[(0, c)] = C64::default();
    }
    for k in 0..d {
        a[(0, k * d + k)] = C64::new(1.0, 0.0);
    }
    let mut rhs = DVector::<C64>::zeros(dd);
    rhs[0] = C64::new(1.0, 0.0);
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::AmbiguousSteadyState { dim: null_dim.max(2) })?;
    let mut rho = unvectorize(&x, d);
    let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    rho = herm;
    let residual = (&s * vectorize(&rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SteadyState { state: rho, residual })
}
