// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad class of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: invalid parameters, out-of-range indices, oversize models.
    Config,
    /// The numerics could not deliver the requested accuracy.
    Numerical,
    /// The parameters are valid but describe a regime the operation rejects.
    Regime,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("equilibrium solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("structural instability: {0}")]
    StructuralInstability(String),

    #[error("characteristic function vanishes at x = {x} (undamped resonance)")]
    Pole { x: f64 },

    #[error("Hilbert space dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("factor index {index} out of range for a layout with {count} factors")]
    FactorIndex { index: usize, count: usize },

    #[error("integration accuracy: {0}; retry with a smaller step")]
    IntegrationAccuracy(String),

    #[error("steady state is not unique (null space dimension {dim})")]
    AmbiguousSteadyState { dim: usize },

    #[error("sideband signals saturated: p_b = {p_blue} does not exceed p_r = {p_red}")]
    Saturated { p_blue: f64, p_red: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("physics regime: {0}")]
    Regime(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) | Error::DimensionCap { .. } | Error::FactorIndex { .. } => ErrorKind::Config,
            Error::SolverFailure { .. }
            | Error::IntegrationAccuracy(_)
            | Error::AmbiguousSteadyState { .. }
            | Error::Fit(_) => ErrorKind::Numerical,
            Error::StructuralInstability(_) | Error::Pole { .. } | Error::Saturated { .. } | Error::Regime(_) => {
                ErrorKind::Regime
            }
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
