// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Accuracy limits every simulation result is held to.

use peit_core::cooling::CoolingRun;
use peit_core::lindblad::AccuracyReport;
use peit_core::thermometry::CorrectionFactor;

pub const MAX_TRACE_DRIFT: f64 = 1e-8;
pub const MAX_HERMITICITY: f64 = 1e-9;
pub const MIN_EIGENVALUE: f64 = -1e-7;
pub const MAX_TAIL: f64 = 1e-4;
pub const MAX_NORM_DRIFT: f64 = 1e-9;

/// Violations in a density-matrix run; empty when clean.
pub fn density_violations(label: &str, acc: &AccuracyReport, tail: f64) -> Vec<String> {
    let mut v = Vec::new();
    if !(acc.max_trace_drift <= MAX_TRACE_DRIFT) {
        v.push(format!(
            "{label}: trace drift {:e} > {MAX_TRACE_DRIFT:e}",
            acc.max_trace_drift
        ));
    }
    if !(acc.max_hermiticity_error <= MAX_HERMITICITY) {
        v.push(format!(
            "{label}: Hermiticity error {:e} > {MAX_HERMITICITY:e}",
            acc.max_hermiticity_error
        ));
    }
    if !(acc.min_eigenvalue >= MIN_EIGENVALUE) {
        v.push(format!(
            "{label}: min eigenvalue {:e} < {MIN_EIGENVALUE:e}",
            acc.min_eigenvalue
        ));
    }
    if !(tail <= MAX_TAIL) {
        v.push(format!("{label}: truncation tail {tail:e} > {MAX_TAIL:e}"));
    }
    v
}

pub fn cooling_violations(run: &CoolingRun) -> Vec<String> {
    density_violations(&run.description, &run.accuracy, run.max_tail())
}

pub fn thermometry_violations(label: &str, f: &CorrectionFactor) -> Vec<String> {
    let mut v = Vec::new();
    if !(f.max_norm_drift <= MAX_NORM_DRIFT) {
        v.push(format!(
            "{label}: norm drift {:e} > {MAX_NORM_DRIFT:e}",
            f.max_norm_drift
        ));
    }
    if !(f.max_truncation_loss <= MAX_TAIL) {
        v.push(format!(
            "{label}: thermal tail {:e} > {MAX_TAIL:e}",
            f.max_truncation_loss
        ));
    }
    v
}
