// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices, state vectors and density matrices for one or two
//! qubits.
//!
//! Basis ordering for two qubits is `|q_A q_B⟩` with qubit A as the most
//! significant factor: `|00⟩, |01⟩, |10⟩, |11⟩`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Absolute tolerance on `|m - m^H|` entries for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Amplitudes below this magnitude are skipped when fixing the phase of an
/// eigenvector.
const PHASE_FIX_TOL: f64 = 1e-10;

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::Dimension(d)),
    }
}

/// A square complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        CMatrix(DMatrix::identity(dim, dim))
    }

    /// Build from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension(entries.len()));
        }
        Ok(CMatrix(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Ok(CMatrix(DMatrix::from_diagonal(&d)))
    }

    pub(crate) fn from_inner(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        CMatrix(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn scale(&self, factor: f64) -> Self {
        CMatrix(self.0.map(|z| z * factor))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        CMatrix(self.0.map(|z| z * factor))
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        CMatrix(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_diff(&self, other: &CMatrix) -> f64 {
        (&self.0 - &other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `max |U^H U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_diff(&CMatrix::identity(self.dim()))
    }

    /// Distance to `other` after removing the best global phase, measured as
    /// the max entry difference.
    pub fn max_diff_up_to_phase(&self, other: &CMatrix) -> f64 {
        let overlap: C64 = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if overlap.norm() == 0.0 {
            return self.max_diff(other);
        }
        let phase = overlap / overlap.norm();
        self.scale_complex(phase).max_diff(other)
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        StateVector(&self.0 * &v.0)
    }

    fn require_hermitian(&self) -> Result<()> {
        let max_dev = self.hermiticity_deviation();
        if max_dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev });
        }
        Ok(())
    }

    fn hermitian_part(&self) -> DMatrix<C64> {
        (&self.0 + self.0.adjoint()).map(|z| z * 0.5)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.dim(), self.dim())?;
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

/// A normalized pure state.
#[derive(Clone, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    /// Normalizes the given amplitudes.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidProblem("state vector has zero norm".into()));
        }
        Ok(StateVector(v / C64::new(norm, 0.0)))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = ONE;
        StateVector(v)
    }

    pub(crate) fn from_inner_normalized(v: DVector<C64>) -> Self {
        let norm = v.norm();
        StateVector(v / C64::new(norm, 0.0))
    }

    pub fn inner(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        self.0.iter().copied().collect()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.0[index]
    }

    /// `⟨self|other⟩`.
    pub fn dot(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    /// Computational-basis populations.
    pub fn populations(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Same state with the first non-negligible amplitude made real positive.
    pub fn with_canonical_phase(&self) -> StateVector {
        let Some(first) = self.0.iter().find(|z| z.norm() > PHASE_FIX_TOL) else {
            return self.clone();
        };
        let phase = first.conj() / first.norm();
        StateVector(self.0.map(|z| z * phase))
    }

    pub fn projector(&self) -> CMatrix {
        CMatrix(&self.0 * self.0.adjoint())
    }

    /// Apply a global phase `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> StateVector {
        let p = C64::from_polar(1.0, phi);
        StateVector(self.0.map(|z| z * p))
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amps: Vec<String> = self
            .0
            .iter()
            .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
            .collect();
        write!(f, "StateVector[{}]", amps.join(", "))
    }
}

/// Serialized as a list of `[re, im]` pairs.
impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        StateVector::new(pairs.iter().map(|p| C64::new(p[0], p[1])).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// A mixed state. Construction through [`DensityMatrix::new`] validates
/// Hermiticity, unit trace and positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-10;

    pub fn new(m: CMatrix) -> Result<Self> {
        check_dim(m.dim())?;
        let max_dev = m.hermiticity_deviation();
        if max_dev > Self::HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev });
        }
        let tr = m.trace();
        if (tr - ONE).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidProblem(format!("density matrix trace {tr}")));
        }
        let eig = herm_eig(&m)?;
        if eig.values[0] < -Self::POSITIVITY_TOL {
            return Err(Error::InvalidProblem(format!(
                "density matrix eigenvalue {:e} is negative",
                eig.values[0]
            )));
        }
        Ok(DensityMatrix(m))
    }

    pub fn pure(state: &StateVector) -> Self {
        DensityMatrix(state.projector())
    }

    /// Wraps a matrix produced by a trace-preserving channel, symmetrizing
    /// away rounding in the anti-Hermitian part.
    pub(crate) fn from_channel_output(m: CMatrix) -> Self {
        DensityMatrix(CMatrix(m.hermitian_part()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0.get(i, i).re).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        // A DensityMatrix is Hermitian by construction.
        herm_eig(&self.0).map(|e| e.values).unwrap_or_default()
    }
}

/// Ascending eigenvalues with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
}

impl Eigen {
    /// `V diag(values) V^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.values.len();
        let mut out = CMatrix::zeros(dim);
        for (val, vec) in self.values.iter().zip(&self.vectors) {
            out = &out + &vec.projector().scale(*val);
        }
        out
    }

    /// Indices of all eigenvalues within `tol` of eigenvalue `index`.
    pub fn degenerate_block(&self, index: usize, tol: f64) -> Vec<usize> {
        let target = self.values[index];
        (0..self.values.len())
            .filter(|&k| (self.values[k] - target).abs() <= tol)
            .collect()
    }
}

/// Hermitian eigendecomposition. Eigenvalues ascending; each eigenvector has
/// its first non-negligible amplitude real and positive.
pub fn herm_eig(m: &CMatrix) -> Result<Eigen> {
    m.require_hermitian()?;
    let dim = m.dim();
    let se = SymmetricEigen::new(m.hermitian_part());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            StateVector::from_inner_normalized(se.eigenvectors.column(k).into_owned())
                .with_canonical_phase()
        })
        .collect();
    Ok(Eigen { values, vectors })
}

/// `exp(-i h dt)` through the eigendecomposition of `h`.
pub fn propagator(h: &CMatrix, dt: f64) -> Result<CMatrix> {
    let eig = herm_eig(h)?;
    Ok(propagator_from_eigen(&eig, dt))
}

fn propagator_from_eigen(eig: &Eigen, dt: f64) -> CMatrix {
    let dim = eig.values.len();
    let mut u = CMatrix::zeros(dim);
    for (val, vec) in eig.values.iter().zip(&eig.vectors) {
        let phase = C64::from_polar(1.0, -val * dt);
        u = &u + &vec.projector().scale_complex(phase);
    }
    u
}

/// `|⟨b|a⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    b.dot(a).norm_sqr().clamp(0.0, 1.0)
}

/// Gap below which the top two populations of a density matrix are treated as
/// degenerate.
pub const DOMINANT_GAP_TOL: f64 = 1e-9;

/// Eigenvector of the largest eigenvalue of `rho`.
pub fn dominant_eigenvector(rho: &DensityMatrix) -> Result<StateVector> {
    let eig = herm_eig(rho.matrix())?;
    let n = eig.values.len();
    let gap = eig.values[n - 1] - eig.values[n - 2];
    if gap < DOMINANT_GAP_TOL {
        return Err(Error::DegenerateDominant { gap });
    }
    Ok(eig.vectors[n - 1].clone())
}
