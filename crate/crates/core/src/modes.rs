// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Equilibrium and normal modes of a linear chain of identical ions.
//!
//! Positions are in units of the Coulomb length ℓ, so the scaled potential is
//! V(u) = Σ u_i²/2 + Σ_{i<j} 1/|u_i − u_j| and the axial Hessian is
//! independent of the trap strength.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::units::{self, CA40_ION_MASS};

const NEWTON_ITERATIONS: usize = 200;
const FORCE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    X,
    Y,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Z, Axis::X, Axis::Y];

    pub fn index(self) -> usize {
        match self {
            Axis::Z => 0,
            Axis::X => 1,
            Axis::Y => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Z => "z",
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Trap frequencies in rad/µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapFrequencies {
    pub axial: f64,
    pub x: f64,
    pub y: f64,
}

impl TrapFrequencies {
    pub fn from_mhz(axial: f64, x: f64, y: f64) -> Self {
        Self {
            axial: units::from_mhz(axial),
            x: units::from_mhz(x),
            y: units::from_mhz(y),
        }
    }

    pub fn along(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Z => self.axial,
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub ion_count: usize,
    /// Ion mass in kg.
    pub mass: f64,
    pub trap: TrapFrequencies,
}

impl ChainConfig {
    /// A chain of ⁴⁰Ca⁺ ions.
    pub fn new(ion_count: usize, trap: TrapFrequencies) -> Self {
        Self {
            ion_count,
            mass: CA40_ION_MASS,
            trap,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ion_count == 0 {
            return Err(invalid("ion_count must be at least 1"));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(invalid(format!("mass must be positive, got {}", self.mass)));
        }
        for axis in Axis::ALL {
            let w = self.trap.along(axis);
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid(format!(
                    "trap frequency along {} must be positive, got {w}",
                    axis.name()
                )));
            }
        }
        if self.ion_count > 1 && (self.trap.x <= self.trap.axial || self.trap.y <= self.trap.axial) {
            return Err(invalid(
                "transverse trap frequencies must exceed the axial frequency for a linear chain",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSolution {
    /// Scaled positions u_j, ascending.
    pub positions: Vec<f64>,
    /// max |∇V| at the returned positions.
    pub residual_force: f64,
    pub iterations: usize,
}

/// Normal modes of one motional branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeStructure {
    pub axis: Axis,
    /// ω_k in rad/µs, ascending.
    pub frequencies: Vec<f64>,
    /// Column k holds b_jk for mode k.
    pub eigenvectors: DMatrix<f64>,
    /// Axial Hessian eigenvalue λ_k each mode was derived from.
    pub hessian_eigenvalues: Vec<f64>,
}

impl ModeStructure {
    pub fn mode_count(&self) -> usize {
        self.frequencies.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    /// Index of the centre-of-mass mode (all components equal).
    pub fn com_index(&self) -> usize {
        (0..self.mode_count())
            .find(|&k| mode_label(&self.vector(k)) == ModeLabel::Com)
            .unwrap_or(0)
    }

    pub fn label(&self, k: usize) -> ModeLabel {
        mode_label(&self.vector(k))
    }

    /// η_jk for an optical wavevector projection `k_proj` in rad/µm.
    pub fn lamb_dicke(&self, k_proj: f64, mass: f64) -> DMatrix<f64> {
        lamb_dicke_factors(self, k_proj, mass)
    }
}

/// Symmetry class of a mode vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeLabel {
    Com,
    Stretch,
    Sym,
    Asym,
    ZigZag,
}

impl ModeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeLabel::Com => "COM",
            ModeLabel::Stretch => "stretch",
            ModeLabel::Sym => "Sym",
            ModeLabel::Asym => "Asym",
            ModeLabel::ZigZag => "ZZ",
        }
    }
}

impl std::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn mode_label(b: &[f64]) -> ModeLabel {
    let n = b.len();
    let tol = 1e-6;
    if b.iter().all(|&x| (x - b[0]).abs() < tol) {
        return ModeLabel::Com;
    }
    if n == 2 {
        return ModeLabel::Stretch;
    }
    if n >= 3 && b.windows(2).all(|w| w[0] * w[1] < 0.0) {
        return ModeLabel::ZigZag;
    }
    if (0..n).all(|j| (b[j] - b[n - 1 - j]).abs() < tol) {
        ModeLabel::Sym
    } else {
        ModeLabel::Asym
    }
}

fn gradient(u: &[f64]) -> DVector<f64> {
    let n = u.len();
    DVector::from_fn(n, |i, _| {
        let mut g = u[i];
        for j in 0..n {
            if j != i {
                let d = u[i] - u[j];
                g -= d.signum() / (d * d);
            }
        }
        g
    })
}

fn potential(u: &[f64]) -> f64 {
    let mut v: f64 = u.iter().map(|x| 0.5 * x * x).sum();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            v += 1.0 / (u[i] - u[j]).abs();
        }
    }
    v
}

/// Axial Hessian of the scaled potential at `u`.
pub fn axial_hessian(u: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 1.0;
        for j in 0..n {
            if j != i {
                let c = 2.0 / (u[i] - u[j]).abs().powi(3);
                diag += c;
                a[(i, j)] = -c;
            }
        }
        a[(i, i)] = diag;
    }
    a
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn equilibrium_positions(config: &ChainConfig) -> Result<EquilibriumSolution> {
    config.validate()?;
    let n = config.ion_count;
    let spacing = 2.018 / (n as f64).powf(0.559);
    let mut u: Vec<f64> = (0..n).map(|j| (j as f64 - (n as f64 - 1.0) / 2.0) * spacing).collect();
    let mut g = gradient(&u);
    let mut iterations = 0;
    while iterations < NEWTON_ITERATIONS && max_abs(&g) > 1e-14 {
        iterations += 1;
        let h = axial_hessian(&u);
        let step = match h.clone().cholesky() {
            Some(c) => c.solve(&(-&g)),
            None => -&g,
        };
        let v0 = potential(&u);
        let g0 = max_abs(&g);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, s)| a + lambda * s).collect();
            let ordered = trial.windows(2).all(|w| w[0] < w[1]);
            if ordered {
                let gt = gradient(&trial);
                if potential(&trial) <= v0 || max_abs(&gt) < g0 {
                    u = trial;
                    g = gt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let residual = max_abs(&g);
    if residual > FORCE_TOLERANCE {
        return Err(Error::SolverFailure { iterations, residual });
    }
    Ok(EquilibriumSolution {
        positions: u,
        residual_force: residual,
        iterations,
    })
}

/// Flip the sign of a column so its largest-magnitude component is positive.
/// Ties are resolved towards the lowest index.
fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(lead) = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-9)) {
        if v[lead] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Hessian eigenpairs, ascending, with sign-fixed eigenvectors.
fn hessian_modes(config: &ChainConfig) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eq = equilibrium_positions(config)?;
    let n = config.ion_count;
    let eig = SymmetricEigen::new(axial_hessian(&eq.positions));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &idx) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[idx];
        if lambda <= 0.0 {
            return Err(Error::StructuralInstability(format!(
                "axial Hessian eigenvalue {lambda} is not positive"
            )));
        }
        values.push(lambda);
        let mut col: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        fix_sign(&mut col);
        vectors.set_column(k, &DVector::from_vec(col));
    }
    // The COM mode has eigenvalue exactly 1; pin it to suppress rounding.
    if (values[0] - 1.0).abs() < 1e-9 {
        values[0] = 1.0;
    }
    Ok((values, vectors))
}

pub fn axial_modes(config: &ChainConfig) -> Result<ModeStructure> {
    let (values, vectors) = hessian_modes(config)?;
    let wz = config.trap.axial;
    Ok(ModeStructure {
        axis: Axis::Z,
        frequencies: values.iter().map(|l| wz * l.sqrt()).collect(),
        eigenvectors: vectors,
        hessian_eigenvalues: values,
    })
}

/// Transverse modes along `axis` (X or Y): ω⊥² = ω_t² − (λ_k − 1)ω_z²/2,
/// since the transverse Hessian is (ω_t/ω_z)²·1 − (A − 1)/2.
/// Returned ascending in frequency, so the COM mode comes last.
pub fn transverse_modes(config: &ChainConfig, axis: Axis) -> Result<ModeStructure> {
    if axis == Axis::Z {
        return axial_modes(config);
    }
    let (values, vectors) = hessian_modes(config)?;
    let wt = config.trap.along(axis);
    let wz = config.trap.axial;
    let n = config.ion_count;
    let mut freqs = Vec::with_capacity(n);
    for &lambda in &values {
        let w2 = wt * wt - 0.5 * (lambda - 1.0) * wz * wz;
        if w2 <= 0.0 {
            return Err(Error::StructuralInstability(format!(
                "transverse mode along {} is unstable (ω² = {w2})",
                axis.name()
            )));
        }
        freqs.push(w2.sqrt());
    }
    let mut out_vectors = DMatrix::zeros(n, n);
    for k in 0..n {
        out_vectors.set_column(k, &vectors.column(n - 1 - k));
    }
    freqs.reverse();
    let mut lambdas = values;
    lambdas.reverse();
    Ok(ModeStructure {
        axis,
        frequencies: freqs,
        eigenvectors: out_vectors,
        hessian_eigenvalues: lambdas,
    })
}

/// η_jk = k_proj·√(ħ/(2Mω_k))·b_jk with `k_proj` in rad/µm.
pub fn lamb_dicke_factors(modes: &ModeStructure, k_proj: f64, mass: f64) -> DMatrix<f64> {
    let n = modes.eigenvectors.nrows();
    let m = modes.mode_count();
    DMatrix::from_fn(n, m, |j, k| {
        k_proj * 1e6 * units::zero_point_length(mass, modes.frequencies[k]) * modes.eigenvectors[(j, k)]
    })
}

/// Wavevector projection (rad/µm) giving a single-ion Lamb-Dicke factor `eta` at `omega`.
pub fn wavevector_for_eta(eta: f64, omega: f64, mass: f64) -> f64 {
    eta / (units::zero_point_length(mass, omega) * 1e6)
}

/// η at `omega` given η_ref at `omega_ref`, using η ∝ 1/√ω.
pub fn scale_eta(eta_ref: f64, omega_ref: f64, omega: f64) -> f64 {
    eta_ref * (omega_ref / omega).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn chain(n: usize) -> ChainConfig {
        ChainConfig::new(n, TrapFrequencies::from_mhz(1.0, 5.0, 5.2))
    }

    #[test]
    fn single_ion_sits_at_centre() {
        let eq = equilibrium_positions(&chain(1)).unwrap();
        assert_eq!(eq.positions, vec![0.0]);
    }

    #[test]
    fn two_ion_positions_closed_form() {
        let eq = equilibrium_positions(&chain(2)).unwrap();
        let u = 0.25f64.cbrt();
        assert_abs_diff_eq!(eq.positions[0], -u, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.positions[1], u, epsilon = 1e-12);
    }

    #[test]
    fn three_ion_positions() {
        // u = 1/u² + 1/(2u)² ⇒ u³ = 5/4 for the outer ions.
        let eq = equilibrium_positions(&chain(3)).unwrap();
        let u = 1.25f64.cbrt();
        assert_abs_diff_eq!(eq.positions[2], u, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.positions[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn labels_for_four_ions() {
        let modes = axial_modes(&chain(4)).unwrap();
        let labels: Vec<_> = (0..4).map(|k| modes.label(k)).collect();
        assert_eq!(
            labels,
            vec![ModeLabel::Com, ModeLabel::Asym, ModeLabel::Sym, ModeLabel::ZigZag]
        );
    }

    #[test]
    fn invalid_chain_rejected() {
        let mut c = chain(2);
        c.trap.x = c.trap.axial * 0.5;
        assert!(equilibrium_positions(&c).is_err());
        assert!(equilibrium_positions(&ChainConfig::new(0, c.trap)).is_err());
    }

    #[test]
    fn two_ion_transverse_pair() {
        let c = chain(2);
        let m = transverse_modes(&c, Axis::X).unwrap();
        let (wt, wz) = (c.trap.x, c.trap.axial);
        assert_abs_diff_eq!(m.frequencies[0], (wt * wt - wz * wz).sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(m.frequencies[1], wt, epsilon = 1e-9);
    }

    #[test]
    fn four_ion_transverse_chain_is_stable() {
        let c = ChainConfig::new(4, TrapFrequencies::from_mhz(0.6, 1.706, 1.754));
        let m = transverse_modes(&c, Axis::X).unwrap();
        assert_eq!(m.mode_count(), 4);
        assert!(m.frequencies.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zigzag_instability_reported() {
        // Weak transverse confinement with four ions: the zigzag mode goes soft.
        let c = ChainConfig::new(4, TrapFrequencies::from_mhz(1.0, 1.5, 3.0));
        match transverse_modes(&c, Axis::X) {
            Err(Error::StructuralInstability(_)) => {}
            other => panic!("expected instability, got {other:?}"),
        }
    }
}
