// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Complex linear algebra and Pauli algebra for systems of at most two qubits.

mod matrix;
mod pauli;

pub use matrix::{
    dominant_eigenvector, fidelity, herm_eig, propagator, CMatrix, DensityMatrix, Eigen,
    StateVector, C64, DOMINANT_GAP_TOL, HERMITIAN_TOL, I, ONE, ZERO,
};
pub use pauli::{
    expectation, pauli_decompose, pauli_matrix, pauli_sum_matrix, Pauli, PauliString, PauliSum,
};
pub(crate) use pauli::{matrix_expectation, trace_product};
