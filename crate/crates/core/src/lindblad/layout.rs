// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use nalgebra::DMatrix;

use super::operator::{Operator, C64};
use crate::error::{invalid, Error, Result};

/// Default dimension cap for density-matrix evolution.
pub const DENSITY_DIM_CAP: usize = 1024;
/// Default dimension cap for pure-state evolution.
pub const PURE_DIM_CAP: usize = 8192;

/// Ordered tensor-product structure. The first factor is the most significant
/// index, matching `A ⊗ B` with index `a·dim(B) + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertLayout {
    factors: Vec<usize>,
}

impl HilbertLayout {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(invalid(format!(
                "every layout factor must be at least 1, got {factors:?}"
            )));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn check_cap(&self, cap: usize) -> Result<()> {
        let dim = self.total_dim();
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        Ok(())
    }

    fn check_factor(&self, factor: usize) -> Result<usize> {
        self.factors.get(factor).copied().ok_or(Error::FactorIndex {
            index: factor,
            count: self.factors.len(),
        })
    }

    /// 1 ⊗ … ⊗ local ⊗ … ⊗ 1 with `local` acting on `factor`.
    pub fn embed(&self, factor: usize, local: &Operator) -> Result<Operator> {
        let d = self.check_factor(factor)?;
        if local.dim() != d {
            return Err(invalid(format!(
                "local operator has dimension {} but factor {factor} has dimension {d}",
                local.dim()
            )));
        }
        let before: usize = self.factors[..factor].iter().product();
        let after: usize = self.factors[factor + 1..].iter().product();
        Ok(Operator::identity(before).kron(local).kron(&Operator::identity(after)))
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.total_dim())
    }

    pub fn annihilation(&self, factor: usize) -> Result<Operator> {
        self.embed(factor, &annihilation(self.check_factor(factor)?))
    }

    pub fn creation(&self, factor: usize) -> Result<Operator> {
        Ok(self.annihilation(factor)?.adjoint())
    }

    pub fn number(&self, factor: usize) -> Result<Operator> {
        self.embed(factor, &number(self.check_factor(factor)?))
    }

    /// |i⟩⟨j| on `factor`.
    pub fn transition(&self, factor: usize, i: usize, j: usize) -> Result<Operator> {
        let d = self.check_factor(factor)?;
        if i >= d || j >= d {
            return Err(invalid(format!(
                "level ({i}, {j}) outside factor {factor} of dimension {d}"
            )));
        }
        self.embed(factor, &transition(d, i, j))
    }

    pub fn projector(&self, factor: usize, i: usize) -> Result<Operator> {
        self.transition(factor, i, i)
    }

    /// Flat index of a product basis state.
    pub fn basis_index(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.factors.len() {
            return Err(invalid("basis label length does not match the layout"));
        }
        let mut idx = 0;
        for (&l, &d) in levels.iter().zip(&self.factors) {
            if l >= d {
                return Err(invalid(format!("level {l} outside a factor of dimension {d}")));
            }
            idx = idx * d + l;
        }
        Ok(idx)
    }
}

/// Truncated annihilation operator: a|n⟩ = √n|n−1⟩.
pub fn annihilation(dim: usize) -> Operator {
    Operator::from_triplets(dim, (1..dim).map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0))))
}

pub fn number(dim: usize) -> Operator {
    Operator::diagonal(&(0..dim).map(|n| C64::new(n as f64, 0.0)).collect::<Vec<_>>())
}

pub fn transition(dim: usize, i: usize, j: usize) -> Operator {
    Operator::from_triplets(dim, [(i, j, C64::new(1.0, 0.0))])
}

/// Thermal occupation p_n = n̄ⁿ/(1+n̄)^{n+1} for n < dim, renormalised.
/// Returns the populations and the discarded weight.
pub fn thermal_populations(dim: usize, nbar: f64) -> (Vec<f64>, f64) {
    let r = nbar / (1.0 + nbar);
    let mut p: Vec<f64> = (0..dim).map(|n| r.powi(n as i32) / (1.0 + nbar)).collect();
    let kept: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= kept);
    (p, 1.0 - kept)
}

pub fn diagonal_density(populations: &[f64]) -> DMatrix<C64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        populations.len(),
        populations.iter().map(|&p| C64::new(p, 0.0)),
    ))
}

pub fn pure_density(dim: usize, level: usize) -> DMatrix<C64> {
    let mut rho = DMatrix::zeros(dim, dim);
    rho[(level, level)] = C64::new(1.0, 0.0);
    rho
}

/// ρ₁ ⊗ ρ₂ ⊗ ….
pub fn product_density(parts: &[DMatrix<C64>]) -> DMatrix<C64> {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.kronecker(p))
}

/// Populations of `factor`'s levels in the reduced state of a diagonal-ish ρ.
pub fn reduced_populations(layout: &HilbertLayout, rho: &DMatrix<C64>, factor: usize) -> Vec<f64> {
    let factors = layout.factors();
    let d = factors[factor];
    let after: usize = factors[factor + 1..].iter().product();
    let mut pops = vec![0.0; d];
    for i in 0..layout.total_dim() {
        pops[(i / after) % d] += rho[(i, i)].re;
    }
    pops
}
