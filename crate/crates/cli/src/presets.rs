// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Configurations shipped with the binary.

use crate::error::{CliError, Result};

pub struct Preset {
    pub name: &'static str,
    pub command: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "modes",
        command: "modes",
        text: include_str!("../presets/modes.toml"),
    },
    Preset {
        name: "modes-fig4",
        command: "modes",
        text: include_str!("../presets/modes-fig4.toml"),
    },
    Preset {
        name: "profile-fig2c",
        command: "profile",
        text: include_str!("../presets/profile-fig2c.toml"),
    },
    Preset {
        name: "sweep-fig2",
        command: "sweep",
        text: include_str!("../presets/sweep-fig2.toml"),
    },
    Preset {
        name: "cool-single",
        command: "cool",
        text: include_str!("../presets/cool-single.toml"),
    },
    Preset {
        name: "figS2-1",
        command: "cool",
        text: include_str!("../presets/figS2-1.toml"),
    },
    Preset {
        name: "figS2-2",
        command: "cool",
        text: include_str!("../presets/figS2-2.toml"),
    },
    Preset {
        name: "table-s1",
        command: "thermo",
        text: include_str!("../presets/table-s1.toml"),
    },
    Preset {
        name: "thermo-trace",
        command: "thermo",
        text: include_str!("../presets/thermo-trace.toml"),
    },
];

/// Data files that presets refer to by name.
pub const ASSETS: &[(&str, &str)] = &[
    ("trace-blue.csv", include_str!("../presets/trace-blue.csv")),
    ("trace-red.csv", include_str!("../presets/trace-red.csv")),
];

pub fn find(name: &str, command: &str) -> Result<&'static Preset> {
    let p = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::Config(format!("unknown preset `{name}` (see `peit presets`)")))?;
    if p.command != command {
        return Err(CliError::Config(format!(
            "preset `{name}` belongs to `{}`, not `{command}`",
            p.command
        )));
    }
    Ok(p)
}

pub fn asset(name: &str) -> Option<&'static str> {
    ASSETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
