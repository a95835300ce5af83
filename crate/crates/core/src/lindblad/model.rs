// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use nalgebra::DMatrix;

use super::layout::{HilbertLayout, DENSITY_DIM_CAP};
use super::operator::{Operator, C64};
use crate::error::{invalid, Result};

/// A Hamiltonian term. With `frequency` ν ≠ 0 the term contributes
/// M e^{iνt} + M† e^{−iνt}; with ν = 0 the matrix is Hermitian and static.
#[derive(Debug, Clone)]
pub struct OperatorTerm {
    pub matrix: Operator,
    pub frequency: f64,
}

impl OperatorTerm {
    pub fn fixed(matrix: Operator) -> Self {
        Self { matrix, frequency: 0.0 }
    }

    /// One-sided rotating term. A zero frequency folds into M + M†.
    pub fn rotating(matrix: Operator, frequency: f64) -> Self {
        if frequency == 0.0 {
            let herm = &matrix + &matrix.adjoint();
            Self::fixed(herm)
        } else {
            Self { matrix, frequency }
        }
    }

    pub fn is_static(&self) -> bool {
        self.frequency == 0.0
    }
}

#[derive(Debug, Clone)]
pub struct Jump {
    pub operator: Operator,
    pub rate: f64,
}

impl Jump {
    pub fn new(operator: Operator, rate: f64) -> Self {
        Self { operator, rate }
    }
}

#[derive(Debug, Clone)]
pub struct QuantumModel {
    pub layout: HilbertLayout,
    pub terms: Vec<OperatorTerm>,
    pub jumps: Vec<Jump>,
    pub initial_state: DMatrix<C64>,
}

impl QuantumModel {
    pub fn new(
        layout: HilbertLayout,
        terms: Vec<OperatorTerm>,
        jumps: Vec<Jump>,
        initial_state: DMatrix<C64>,
    ) -> Result<Self> {
        let model = Self {
            layout,
            terms,
            jumps,
            initial_state,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn is_static(&self) -> bool {
        self.terms.iter().all(OperatorTerm::is_static)
    }

    pub fn validate(&self) -> Result<()> {
        self.layout.check_cap(DENSITY_DIM_CAP)?;
        let d = self.dim();
        for (k, term) in self.terms.iter().enumerate() {
            if term.matrix.dim() != d {
                return Err(invalid(format!("Hamiltonian term {k} has the wrong dimension")));
            }
            if !term.frequency.is_finite() {
                return Err(invalid(format!("Hamiltonian term {k} has a non-finite frequency")));
            }
            if term.is_static() && !term.matrix.is_hermitian(1e-12 * term.matrix.row_sum_norm().max(1.0)) {
                return Err(invalid(format!("static Hamiltonian term {k} is not Hermitian")));
            }
        }
        for (k, jump) in self.jumps.iter().enumerate() {
            if jump.operator.dim() != d {
                return Err(invalid(format!("jump operator {k} has the wrong dimension")));
            }
            if !(jump.rate >= 0.0 && jump.rate.is_finite()) {
                return Err(invalid(format!(
                    "jump rate {k} must be non-negative, got {}",
                    jump.rate
                )));
            }
        }
        validate_density(&self.initial_state, d)
    }
}

/// Hermitian, unit trace within 1e-12, eigenvalues ≥ −1e-10.
pub fn validate_density(rho: &DMatrix<C64>, dim: usize) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(invalid(format!(
            "initial state is {}×{}, expected {dim}×{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if hermiticity_error(rho) > 1e-12 {
        return Err(invalid("initial state is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
        return Err(invalid(format!("initial state has trace {tr}")));
    }
    if min_eigenvalue(rho) < -1e-10 {
        return Err(invalid("initial state is not positive semidefinite"));
    }
    Ok(())
}

pub fn hermiticity_error(rho: &DMatrix<C64>) -> f64 {
    let n = rho.nrows();
    let mut err: f64 = 0.0;
    for j in 0..n {
        for i in j..n {
            err = err.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
        }
    }
    err
}

fn is_diagonal(rho: &DMatrix<C64>) -> bool {
    let n = rho.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || rho[(i, j)] == C64::default()))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(rho: &DMatrix<C64>) -> f64 {
    if is_diagonal(rho) {
        return rho.diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    }
    let mut h = rho.clone();
    let n = h.nrows();
    for j in 0..n {
        for i in j..n {
            let avg = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            h[(i, j)] = avg;
            h[(j, i)] = avg.conj();
        }
    }
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}
