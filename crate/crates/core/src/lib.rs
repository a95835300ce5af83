// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Parallel-EIT cooling toolkit.
//!
//! The crate is organised bottom-up:
//!
//! * [`modes`] solves the equilibrium of a linear ion chain and its normal modes.
//! * [`rates`] evaluates the closed-form scattering-amplitude cooling theory.
//! * [`lindblad`] is a small open-system engine (dense states, sparse operators).
//! * [`cooling`] builds the cooling models on top of the engine and fits trajectories.
//! * [`thermometry`] simulates multi-ion sideband flops and extracts correction factors.
//!
//! Frequencies are angular and stored in rad/µs, times are in µs. Conversions
//! from the customary 2π·MHz inputs live in [`units`].

// `!(x >= 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cooling;
pub mod error;
pub mod fit;
pub mod lindblad;
pub mod modes;
pub mod rates;
pub mod thermometry;
pub mod units;

pub use error::{Error, Result};
