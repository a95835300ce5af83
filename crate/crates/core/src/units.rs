// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Unit conversions and physical constants (SI, CODATA 2018).

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Mass of a singly charged ⁴⁰Ca⁺ ion in kg.
pub const CA40_ION_MASS: f64 = 39.962_590_863 * ATOMIC_MASS_UNIT - ELECTRON_MASS;

/// 2π·MHz to rad/µs.
pub fn from_mhz(f_mhz: f64) -> f64 {
    TWO_PI * f_mhz
}

/// rad/µs to 2π·MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / TWO_PI
}

/// Ground-state extent √(ħ/(2Mω)) in metres, with ω in rad/µs.
pub fn zero_point_length(mass_kg: f64, omega: f64) -> f64 {
    (HBAR / (2.0 * mass_kg * omega * 1e6)).sqrt()
}

/// Coulomb length scale ℓ = (e²/(4πϵ₀Mω²))^{1/3} in metres, with ω in rad/µs.
pub fn coulomb_length(mass_kg: f64, omega: f64) -> f64 {
    let w = omega * 1e6;
    (ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (4.0 * PI * VACUUM_PERMITTIVITY * mass_kg * w * w)).cbrt()
}
