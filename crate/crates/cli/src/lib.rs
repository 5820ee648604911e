// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment runner for digitized shortcut-to-adiabaticity state
//! preparation: configuration, the experiments, output files and plots.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod plot;

pub use config::Config;
pub use error::CliError;
