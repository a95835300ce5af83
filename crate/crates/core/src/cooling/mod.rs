// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Dynamical cooling models built on the open-system engine.

mod config;
mod dressed;
mod profile;
mod simulate;
mod single;

pub use config::CoolingConfig;
pub use dressed::{
    build_2d_model, build_dressed_model, build_two_ion_model, DressedMode, DressedModel, DressedSpec, DressedTone,
    TwoDimensionalParams, TwoIonParams,
};
pub use profile::{absorption_profile, ProfilePoint};
pub use simulate::{simulate_cooling, CoolingRun, ModeObservable, ModeSeries};
pub use single::{build_internal_model, build_single_mode_model, Coupling, SingleModeModel, SingleModeSpec};

/// Fock truncation recommended for a thermal state of mean `nbar`: ⌈4n̄ + 10⌉.
pub fn default_truncation(nbar: f64) -> usize {
    (4.0 * nbar + 10.0).ceil() as usize
}
