// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Open-system engine for atoms ⊗ truncated Fock modes.
//!
//! Operators are stored sparsely ([`Operator`]); density matrices are dense.
//! The master equation is
//! dρ/dt = −i[H(t), ρ] + Σ rate·(LρL† − ½{L†L, ρ}).

pub mod dense;
pub mod evolve;
pub mod layout;
pub mod model;
pub mod operator;
mod reduced;
pub mod steady;

pub use evolve::{evolve, evolve_pure, AccuracyReport, Evolution, EvolveOptions, PureEvolution};
pub use layout::{HilbertLayout, DENSITY_DIM_CAP, PURE_DIM_CAP};
pub use model::{Jump, OperatorTerm, QuantumModel};
pub use operator::{Operator, C64};
pub use steady::{steady_state, SteadyState};
