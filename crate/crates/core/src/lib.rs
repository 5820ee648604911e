// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Digitized shortcut-to-adiabaticity state preparation on two qubits.
//!
//! * [`qcore`]: dense complex linear algebra and the two-qubit Pauli basis.
//! * [`models`]: the H₂ (minimal basis) and BHZ Hamiltonians.
//! * [`sta`]: adiabatic path, counter-diabatic term and rotation angles.
//! * [`circuits`]: gate set, Trotter circuits and state preparation.
//! * [`sim`]: ideal and noisy execution of digitized runs.

pub mod circuits;
pub mod error;
pub mod models;
pub mod qcore;
pub mod sim;
pub mod sta;

pub use error::{Error, Result};
