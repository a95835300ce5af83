// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Batch front end for `peit-core`: one TOML configuration in, a directory of
//! CSV tables and `metadata.json` out.

// `!(x >= 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod hygiene;
pub mod output;
pub mod presets;

pub use error::{CliError, Result};
