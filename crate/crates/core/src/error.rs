// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::qcore::PauliString;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^H| = {max_dev:e})")]
    NotHermitian { max_dev: f64 },

    #[error("unsupported dimension {0} (expected 2 or 4)")]
    Dimension(usize),

    #[error("dominant eigenvalue is degenerate (gap {gap:e}); extraction is ambiguous")]
    DegenerateDominant { gap: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("coefficient table is empty")]
    EmptyTable,

    #[error("duplicate internuclear distance R = {0} in coefficient table")]
    DuplicateDistance(f64),

    #[error("no coefficient row for R = {0} (tables are looked up exactly, not interpolated)")]
    MissingDistance(f64),

    #[error("initial Hamiltonian is degenerate: {0}")]
    DegenerateInitial(&'static str),

    #[error("reference coupling is zero; scaled reference Hamiltonian undefined")]
    ZeroCoupling,

    #[error("two-qubit rotation requested for {0}, which has an identity factor")]
    IdentityFactor(PauliString),

    #[error("angle sequence terms do not match the circuit preset: {0}")]
    TermMismatch(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }

    /// Whether the failure is numerical (as opposed to bad input data).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::DegenerateDominant { .. } | Error::NotHermitian { .. } => true,
            Error::Step { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
