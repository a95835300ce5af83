// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

use std::path::Path;
use std::process::{Command, Output};

use peit_cli::commands::{cool, thermo};
use peit_cli::config::parse;
use peit_cli::presets::PRESETS;
use tempfile::TempDir;

fn peit(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peit"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn modes_preset_writes_golden_ratios() {
    let dir = TempDir::new().unwrap();
    let out = peit(&["modes", "--preset", "modes", "--out", "run"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = dir.path().join("run");
    let axial: Vec<f64> = rows(&run.join("modes.csv"))
        .iter()
        .filter(|r| &r[0] == "z")
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(axial.len(), 3);
    assert!((axial[1] - 3f64.sqrt()).abs() < 1e-9);
    assert!((axial[2] - (29.0f64 / 5.0).sqrt()).abs() < 1e-9);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "modes");
    assert_eq!(meta["source"], "preset:modes");
}

#[test]
fn unknown_key_is_a_configuration_error() {
    let dir = TempDir::new().unwrap();
    let text = PRESETS.iter().find(|p| p.name == "modes").unwrap().text.to_string() + "\nbogus = 1\n";
    std::fs::write(dir.path().join("bad.toml"), text).unwrap();
    let out = peit(&["modes", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn preset_for_another_command_is_rejected() {
    let dir = TempDir::new().unwrap();
    let out = peit(&["cool", "--preset", "modes"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = peit(&["modes", "--preset", "no-such-preset"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_is_a_configuration_error() {
    let dir = TempDir::new().unwrap();
    let out = peit(&["sweep", "--config", "absent.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_preset_gives_the_worked_estimate() {
    let dir = TempDir::new().unwrap();
    let out = peit(&["thermo", "--preset", "thermo-trace", "--out", "t"], dir.path());
    assert!(out.status.success());
    let est = rows(&dir.path().join("t/estimate.csv"));
    let nbar: f64 = est[0][0].parse().unwrap();
    assert_eq!(format!("{nbar:.2}"), "0.40");
}

#[test]
fn trace_files_resolve_next_to_the_config() {
    let dir = TempDir::new().unwrap();
    for name in ["trace-blue.csv", "trace-red.csv"] {
        std::fs::write(dir.path().join(name), peit_cli::presets::asset(name).unwrap()).unwrap();
    }
    let cfg = PRESETS.iter().find(|p| p.name == "thermo-trace").unwrap().text;
    std::fs::create_dir(dir.path().join("cfg")).unwrap();
    std::fs::write(dir.path().join("trace.toml"), cfg).unwrap();
    let out = peit(&["thermo", "--config", "trace.toml", "--out", "t"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // From another directory the relative paths still resolve against the file.
    let out = peit(
        &["thermo", "--config", "../trace.toml", "--out", "u"],
        &dir.path().join("cfg"),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn presets_are_listed_and_printed() {
    let dir = TempDir::new().unwrap();
    let out = peit(&["presets"], dir.path());
    let listing = String::from_utf8_lossy(&out.stdout);
    for p in PRESETS {
        assert!(listing.contains(p.name));
    }
    let out = peit(&["presets", "figS2-2"], dir.path());
    assert!(String::from_utf8_lossy(&out.stdout).contains("kind = \"two-ion\""));
}

#[test]
fn every_preset_parses() {
    for p in PRESETS {
        let ok = match p.command {
            "modes" => parse::<peit_cli::commands::modes::ModesConfig>(p.text).is_ok(),
            "profile" => parse::<peit_cli::commands::profile::ProfileConfig>(p.text).is_ok(),
            "sweep" => parse::<peit_cli::commands::sweep::SweepConfig>(p.text).is_ok(),
            "cool" => parse::<cool::CoolConfig>(p.text).is_ok(),
            "thermo" => parse::<thermo::ThermoConfig>(p.text).is_ok(),
            _ => false,
        };
        assert!(ok, "preset {} does not parse", p.name);
    }
}

#[test]
fn tagged_models_reject_foreign_keys() {
    let single = PRESETS.iter().find(|p| p.name == "cool-single").unwrap().text;
    // A two-ion key inside a single-mode model.
    let bad = single.replace("kind = \"single\"", "kind = \"single\"\neta_modes = [0.1, 0.1]");
    assert!(parse::<cool::CoolConfig>(&bad).is_err());
    let bad = single.replace("kind = \"single\"", "kind = \"three-ion\"");
    assert!(parse::<cool::CoolConfig>(&bad).is_err());
}

#[test]
fn invalid_physics_is_a_configuration_error() {
    let dir = TempDir::new().unwrap();
    let text = PRESETS
        .iter()
        .find(|p| p.name == "sweep-fig2")
        .unwrap()
        .text
        .replace("probe_rabi_mhz = 3.0", "probe_rabi_mhz = -1.0");
    std::fs::write(dir.path().join("s.toml"), text).unwrap();
    let out = peit(&["sweep", "--config", "s.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
