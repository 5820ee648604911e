// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: a TOML file with one section per experiment,
//! plus `section.key=value` overrides from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use digista_core::sim::NoiseParams;
use digista_core::sta::{RefineOptions, Sampling};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct General {
    pub h2_table: PathBuf,
    pub bhz_params: PathBuf,
    pub out: PathBuf,
    pub noise: bool,
    pub refine: bool,
    pub repreparation: bool,
    pub sampling: Sampling,
    /// 0 lets the thread pool pick.
    pub workers: usize,
    pub seed: u64,
}

impl Default for General {
    fn default() -> Self {
        General {
            h2_table: PathBuf::from("data/h2_coefficients.csv"),
            bhz_params: PathBuf::from("data/bhz_hgte.toml"),
            out: PathBuf::from("out"),
            noise: false,
            refine: true,
            repreparation: true,
            sampling: Sampling::RightEndpoint,
            workers: 0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct H2Reference {
    /// Internuclear distance in Å.
    pub r: f64,
    pub total_time: f64,
    pub steps: Vec<usize>,
}

impl Default for H2Reference {
    fn default() -> Self {
        H2Reference {
            r: 0.05,
            total_time: 1.0,
            steps: vec![1, 2, 3, 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct H2Landscape {
    pub r0: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
    pub reference_steps: usize,
    pub reference_time: f64,
    /// Operation time of the one-step drive.
    pub total_time: f64,
}

impl Default for H2Landscape {
    fn default() -> Self {
        H2Landscape {
            r0: 0.05,
            r_min: 0.05,
            r_max: 2.05,
            r_step: 0.1,
            reference_steps: 4,
            reference_time: 1.0,
            total_time: 1.0,
        }
    }
}

impl H2Landscape {
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.r_max - self.r_min) / self.r_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| round_grid(self.r_min + i as f64 * self.r_step))
            .collect()
    }
}

/// Snap to 1e-9 so grid points match table rows exactly.
fn round_grid(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bhz {
    /// Reference wavevector `|kx0·a|`; runs use both signs.
    pub kx0: f64,
    pub reference_steps: usize,
    pub reference_time: f64,
    pub total_time: f64,
    /// Points of the `kx·a ∈ [-π, π)` linecut.
    pub grid_points: usize,
}

impl Default for Bhz {
    fn default() -> Self {
        Bhz {
            kx0: 0.1,
            reference_steps: 4,
            reference_time: 1.0,
            total_time: 1.0,
            grid_points: 128,
        }
    }
}

impl Bhz {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        (0..n)
            .map(|i| {
                let x = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                if x.abs() < 1e-12 {
                    0.0
                } else {
                    x
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaConvergence {
    pub r: f64,
    pub steps_max: usize,
    pub threshold: f64,
    pub total_time: f64,
    pub preset: String,
    pub refine: bool,
    /// Operation time of the companion run with all 15 generators; 0 skips it.
    pub full_time: f64,
}

impl Default for StaConvergence {
    fn default() -> Self {
        StaConvergence {
            r: 1.55,
            steps_max: 60,
            threshold: 0.99,
            total_time: 1.0,
            preset: "h2-ground".into(),
            refine: false,
            full_time: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Refine {
    pub simplex_size: f64,
    pub tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for Refine {
    fn default() -> Self {
        let d = RefineOptions::default();
        Refine {
            simplex_size: d.simplex_size,
            tolerance: d.tolerance,
            max_evaluations: d.max_evaluations,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub general: General,
    pub h2_reference: H2Reference,
    pub h2_landscape: H2Landscape,
    pub bhz: Bhz,
    pub sta_convergence: StaConvergence,
    pub refine: Refine,
    pub noise: NoiseParams,
}

impl Config {
    /// Parse TOML text; relative data paths resolve against `base`.
    pub fn from_toml(text: &str, base: Option<&Path>, overrides: &[String]) -> Result<Config, CliError> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        if let Some(base) = base {
            resolve_paths(&mut table, base);
        }
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: Config = toml::Value::Table(table)
            .try_into()
            .map_err(|e| CliError::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, CliError> {
        match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Config::from_toml(&text, p.parent(), overrides)
            }
            None => Config::from_toml("", None, overrides),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::Config(msg.to_string()));
        let positive = [
            ("h2_reference.total_time", self.h2_reference.total_time),
            ("h2_landscape.total_time", self.h2_landscape.total_time),
            ("h2_landscape.reference_time", self.h2_landscape.reference_time),
            ("h2_landscape.r_step", self.h2_landscape.r_step),
            ("bhz.total_time", self.bhz.total_time),
            ("bhz.reference_time", self.bhz.reference_time),
            ("bhz.kx0", self.bhz.kx0),
            ("sta_convergence.total_time", self.sta_convergence.total_time),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return bad(&format!("{name} must be positive"));
            }
        }
        if self.h2_reference.steps.is_empty() {
            return bad("h2_reference.steps must be non-empty");
        }
        if self.h2_landscape.r_max < self.h2_landscape.r_min {
            return bad("h2_landscape.r_max must be >= r_min");
        }
        if self.bhz.grid_points == 0 {
            return bad("bhz.grid_points must be positive");
        }
        if self.bhz.reference_steps == 0 || self.h2_landscape.reference_steps == 0 {
            return bad("reference_steps must be positive");
        }
        if self.sta_convergence.steps_max == 0 {
            return bad("sta_convergence.steps_max must be positive");
        }
        if self.sta_convergence.preset.parse::<digista_core::circuits::Preset>().is_err() {
            return bad(&format!("unknown preset {:?}", self.sta_convergence.preset));
        }
        self.noise
            .validate()
            .map_err(|e| CliError::Config(format!("noise: {e}")))?;
        Ok(())
    }

    pub fn refine_options(&self, seed_offset: u64) -> RefineOptions {
        RefineOptions {
            simplex_size: self.refine.simplex_size,
            tolerance: self.refine.tolerance,
            max_evaluations: self.refine.max_evaluations,
            seed: self.general.seed.wrapping_add(seed_offset),
        }
    }
}

fn resolve_paths(table: &mut toml::Table, base: &Path) {
    let Some(toml::Value::Table(general)) = table.get_mut("general") else {
        return;
    };
    for key in ["h2_table", "bhz_params"] {
        if let Some(toml::Value::String(s)) = general.get_mut(key) {
            let p = Path::new(s.as_str());
            if p.is_relative() {
                *s = base.join(p).to_string_lossy().into_owned();
            }
        }
    }
}

/// `section.key=value`; the value is read as TOML and falls back to a bare
/// string.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let bad = || CliError::Config(format!("override {spec:?} is not section.key=value"));
    let (path, raw) = spec.split_once('=').ok_or_else(bad)?;
    let (section, key) = path.trim().split_once('.').ok_or_else(bad)?;
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(key.to_string(), value);
            Ok(())
        }
        _ => Err(bad()),
    }
}
