// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Pauli strings and real-weighted Pauli sums.
//!
//! A [`PauliSum`] stores coefficients `ω_j` in the convention
//! `H = Σ_j ω_j Γ_j / 2`, so a rotation `exp(-i θ Γ_j / 2)` driven by `H` for a
//! time `dt` has angle `θ = ω_j dt` with no extra factor.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, StateVector, C64, HERMITIAN_TOL, I, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -I, I, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        CMatrix::from_row_slice(2, &entries).expect("2x2")
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_label(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product `P_A ⊗ P_B`; qubit A is the first factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(pub Pauli, pub Pauli);

impl PauliString {
    pub const II: PauliString = PauliString(Pauli::I, Pauli::I);
    pub const XI: PauliString = PauliString(Pauli::X, Pauli::I);
    pub const YI: PauliString = PauliString(Pauli::Y, Pauli::I);
    pub const ZI: PauliString = PauliString(Pauli::Z, Pauli::I);
    pub const IX: PauliString = PauliString(Pauli::I, Pauli::X);
    pub const IY: PauliString = PauliString(Pauli::I, Pauli::Y);
    pub const IZ: PauliString = PauliString(Pauli::I, Pauli::Z);
    pub const XX: PauliString = PauliString(Pauli::X, Pauli::X);
    pub const YY: PauliString = PauliString(Pauli::Y, Pauli::Y);
    pub const ZZ: PauliString = PauliString(Pauli::Z, Pauli::Z);
    pub const ZX: PauliString = PauliString(Pauli::Z, Pauli::X);
    pub const ZY: PauliString = PauliString(Pauli::Z, Pauli::Y);

    /// All 16 strings in lexicographic order, starting with `II`.
    pub fn all() -> impl Iterator<Item = PauliString> {
        Pauli::ALL
            .into_iter()
            .flat_map(|a| Pauli::ALL.into_iter().map(move |b| PauliString(a, b)))
    }

    /// The 15 strings other than `II`.
    pub fn non_identity() -> impl Iterator<Item = PauliString> {
        Self::all().filter(|p| *p != Self::II)
    }

    pub fn a(self) -> Pauli {
        self.0
    }

    pub fn b(self) -> Pauli {
        self.1
    }

    /// Number of non-identity factors.
    pub fn weight(self) -> usize {
        [self.0, self.1].iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn matrix(self) -> CMatrix {
        self.0.matrix().kron(&self.1.matrix())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0.label(), self.1.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        let parse = |c: Option<char>| c.and_then(Pauli::from_label);
        match (parse(chars.next()), parse(chars.next()), chars.next()) {
            (Some(a), Some(b), None) => Ok(PauliString(a, b)),
            _ => Err(Error::Parse {
                line: 0,
                msg: format!("invalid Pauli string {s:?}"),
            }),
        }
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 4x4 matrix of a Pauli string.
pub fn pauli_matrix(p: PauliString) -> CMatrix {
    p.matrix()
}

/// `H = Σ_j ω_j Γ_j / 2` with real `ω_j`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    terms: BTreeMap<PauliString, f64>,
}

impl PauliSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Repeated strings accumulate.
    pub fn from_terms<I: IntoIterator<Item = (PauliString, f64)>>(terms: I) -> Self {
        let mut sum = Self::new();
        for (p, w) in terms {
            sum.add_term(p, w);
        }
        sum
    }

    pub fn add_term(&mut self, p: PauliString, omega: f64) {
        *self.terms.entry(p).or_insert(0.0) += omega;
    }

    /// Coefficient `ω` of `p` (0 when absent).
    pub fn coeff(&self, p: PauliString) -> f64 {
        self.terms.get(&p).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliString, f64)> + '_ {
        self.terms.iter().map(|(p, w)| (*p, *w))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        PauliSum {
            terms: self.terms.iter().map(|(p, w)| (*p, w * factor)).collect(),
        }
    }

    /// `a·self + b·other`, term by term.
    pub fn combine(&self, a: f64, other: &PauliSum, b: f64) -> PauliSum {
        let mut out = self.scaled(a);
        for (p, w) in other.iter() {
            out.add_term(p, b * w);
        }
        out
    }

    pub fn matrix(&self) -> CMatrix {
        pauli_sum_matrix(self)
    }

    /// Largest `|ω|` difference over the union of both term sets.
    pub fn max_coeff_diff(&self, other: &PauliSum) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|p| (self.coeff(*p) - other.coeff(*p)).abs())
            .fold(0.0, f64::max)
    }
}

/// `Σ_j ω_j · pauli_matrix(Γ_j) / 2`.
pub fn pauli_sum_matrix(h: &PauliSum) -> CMatrix {
    h.iter().fold(CMatrix::zeros(4), |acc, (p, w)| {
        &acc + &p.matrix().scale(0.5 * w)
    })
}

/// Coefficients below this magnitude are dropped by [`pauli_decompose`].
const DECOMPOSE_DROP_TOL: f64 = 1e-13;

/// Inverse of [`pauli_sum_matrix`] on Hermitian 4x4 matrices:
/// `ω_j = Tr(Γ_j m) / 2`.
pub fn pauli_decompose(m: &CMatrix) -> Result<PauliSum> {
    if m.dim() != 4 {
        return Err(Error::Dimension(m.dim()));
    }
    let max_dev = m.hermiticity_deviation();
    if max_dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_dev });
    }
    let mut sum = PauliSum::new();
    for p in PauliString::all() {
        let w = trace_product(&p.matrix(), m) * 0.5;
        if w.abs() >= DECOMPOSE_DROP_TOL {
            sum.add_term(p, w);
        }
    }
    Ok(sum)
}

/// `Re Tr(a b)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a.get(i, k) * b.get(k, i);
        }
    }
    acc.re
}

/// `⟨s|H|s⟩` (real part).
pub fn expectation(h: &PauliSum, s: &StateVector) -> f64 {
    matrix_expectation(&h.matrix(), s)
}

pub(crate) fn matrix_expectation(m: &CMatrix, s: &StateVector) -> f64 {
    s.dot(&m.apply(s)).re
}
