// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Target and initial Hamiltonians for the H₂ molecule (two-qubit reduced
//! form) and the BHZ lattice model.

use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{PauliString, PauliSum, StateVector, C64};

/// Two distances closer than this are the same table row.
pub const DISTANCE_MATCH_TOL: f64 = 1e-9;

/// Coefficients of `H = g0 + g Z_A + g Z_B + g12 Y_A Y_B` (hartree) at an
/// internuclear distance `r` (Å).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct H2Coefficients {
    pub r: f64,
    pub g0: f64,
    pub g: f64,
    pub g12: f64,
}

/// Rows sorted by strictly increasing `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct H2CoefficientTable {
    rows: Vec<H2Coefficients>,
}

impl H2CoefficientTable {
    pub fn new(mut rows: Vec<H2Coefficients>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        if let Some(row) = rows.iter().find(|row| !(row.r > 0.0)) {
            return Err(Error::InvalidProblem(format!(
                "internuclear distance must be positive, got {}",
                row.r
            )));
        }
        rows.sort_by(|a, b| a.r.total_cmp(&b.r));
        if let Some(w) = rows
            .windows(2)
            .find(|w| (w[1].r - w[0].r).abs() < DISTANCE_MATCH_TOL)
        {
            return Err(Error::DuplicateDistance(w[1].r));
        }
        Ok(H2CoefficientTable { rows })
    }

    pub fn rows(&self) -> &[H2Coefficients] {
        &self.rows
    }

    /// Exact-match lookup; no interpolation.
    pub fn get(&self, r: f64) -> Result<H2Coefficients> {
        self.rows
            .iter()
            .find(|row| (row.r - r).abs() < DISTANCE_MATCH_TOL)
            .copied()
            .ok_or(Error::MissingDistance(r))
    }

    pub fn contains(&self, r: f64) -> bool {
        self.get(r).is_ok()
    }
}

const H2_HEADER: [&str; 4] = ["R_angstrom", "g0", "g", "g12"];

/// Parse a coefficient table: header `R_angstrom,g0,g,g12`, `#` comments.
pub fn load_h2_table<R: Read>(mut source: R) -> Result<H2CoefficientTable> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;

    let mut saw_header = false;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !saw_header {
            if fields != H2_HEADER {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected header {:?}, got {line:?}", H2_HEADER.join(",")),
                });
            }
            saw_header = true;
            continue;
        }
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let mut vals = [0.0; 4];
        for (slot, field) in vals.iter_mut().zip(&fields) {
            *slot = field.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("{field:?}: {e}"),
            })?;
            if !slot.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("non-finite value {field:?}"),
                });
            }
        }
        rows.push(H2Coefficients {
            r: vals[0],
            g0: vals[1],
            g: vals[2],
            g12: vals[3],
        });
    }
    if !saw_header {
        return Err(Error::EmptyTable);
    }
    H2CoefficientTable::new(rows)
}

pub fn h2_hamiltonian(c: &H2Coefficients) -> PauliSum {
    PauliSum::from_terms([
        (PauliString::II, 2.0 * c.g0),
        (PauliString::ZI, 2.0 * c.g),
        (PauliString::IZ, 2.0 * c.g),
        (PauliString::YY, 2.0 * c.g12),
    ])
}

/// `H_0 = g (Y_A + Y_B)` with the product state `(|0⟩+i|1⟩)(|0⟩+i|1⟩)/2`,
/// its ground state for `g < 0`.
pub fn h2_initial_ground(c: &H2Coefficients) -> Result<(PauliSum, StateVector)> {
    if c.g == 0.0 {
        return Err(Error::DegenerateInitial("g = 0 makes g(Y_A + Y_B) vanish"));
    }
    let h0 = PauliSum::from_terms([(PauliString::YI, 2.0 * c.g), (PauliString::IY, 2.0 * c.g)]);
    let psi0 = StateVector::new(vec![
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.5),
        C64::new(0.0, 0.5),
        C64::new(-0.5, 0.0),
    ])?;
    Ok((h0, psi0))
}

/// `H_0 = g Z_A` with `|01⟩`.
pub fn h2_initial_excited(c: &H2Coefficients) -> Result<(PauliSum, StateVector)> {
    if c.g == 0.0 {
        return Err(Error::DegenerateInitial("g = 0 makes g Z_A vanish"));
    }
    let h0 = PauliSum::from_terms([(PauliString::ZI, 2.0 * c.g)]);
    Ok((h0, StateVector::basis(4, 0b01)))
}

/// `[g12(R) / g12(R0)] · H(R0)`.
pub fn h2_scaled_reference(table: &H2CoefficientTable, r: f64, r0: f64) -> Result<PauliSum> {
    let target = table.get(r)?;
    let reference = table.get(r0)?;
    if reference.g12 == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(h2_hamiltonian(&reference).scaled(target.g12 / reference.g12))
}

/// BHZ lattice parameters (eV). `a` only labels the length unit; wavevectors
/// are stored as the dimensionless products `k·a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhzParams {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "C3")]
    pub c3: f64,
    #[serde(rename = "C4")]
    pub c4: f64,
    #[serde(rename = "a_units")]
    pub a: f64,
}

impl BhzParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.c1, self.c2, self.c3, self.c4, self.a];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidProblem("BHZ parameters must be finite".into()));
        }
        if self.a <= 0.0 {
            return Err(Error::InvalidProblem("lattice constant must be positive".into()));
        }
        Ok(())
    }

    /// `g0(k) = C1 - C2 f(k)`.
    pub fn g0(&self, k: &Wavevector) -> f64 {
        self.c1 - self.c2 * bhz_f(k)
    }

    /// `g(k) = C3 f(k)`.
    pub fn g(&self, k: &Wavevector) -> f64 {
        self.c3 * bhz_f(k)
    }

    /// `g12(k) = C4 sin(k a)`.
    pub fn g12(&self, k_a: f64) -> f64 {
        self.c4 * k_a.sin()
    }
}

/// Wavevector in units of `1/a`, i.e. the fields are `k_x a` and `k_y a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wavevector {
    pub kx: f64,
    pub ky: f64,
}

impl Wavevector {
    pub fn new(kx: f64, ky: f64) -> Self {
        Wavevector { kx, ky }
    }

    /// Checked constructor for points of the first Brillouin zone `[-π, π)²`.
    pub fn in_first_zone(kx: f64, ky: f64) -> Result<Self> {
        let ok = |k: f64| (-PI..PI).contains(&k);
        if !ok(kx) || !ok(ky) {
            return Err(Error::InvalidProblem(format!(
                "wavevector ({kx}, {ky}) outside the first Brillouin zone"
            )));
        }
        Ok(Wavevector { kx, ky })
    }

    pub fn on_linecut(kx: f64) -> Self {
        Wavevector { kx, ky: 0.0 }
    }
}

/// `f(k) = 8[sin²(k_x a/2) + sin²(k_y a/2)]`.
pub fn bhz_f(k: &Wavevector) -> f64 {
    8.0 * ((k.kx / 2.0).sin().powi(2) + (k.ky / 2.0).sin().powi(2))
}

pub fn bhz_hamiltonian(k: &Wavevector, p: &BhzParams) -> PauliSum {
    PauliSum::from_terms([
        (PauliString::II, 2.0 * p.g0(k)),
        (PauliString::IZ, 2.0 * p.g(k)),
        (PauliString::ZX, 2.0 * p.g12(k.kx)),
        (PauliString::ZY, 2.0 * p.g12(k.ky)),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Ground,
    Excited,
}

impl Branch {
    /// Index of the lowest eigenvalue of the tracked BHZ band (bands are
    /// twofold degenerate: valence = {0,1}, conduction = {2,3}).
    pub fn bhz_level(self) -> usize {
        match self {
            Branch::Ground => 0,
            Branch::Excited => 2,
        }
    }
}

/// `H_0 = g(k_{x;0}) Z_B` with `|01⟩` (ground) or `|00⟩` (excited) for
/// `g > 0`; the two states swap roles if `g < 0`.
pub fn bhz_initial(kx0: f64, p: &BhzParams, branch: Branch) -> Result<(PauliSum, StateVector)> {
    let g = p.g(&Wavevector::on_linecut(kx0));
    if g == 0.0 {
        return Err(Error::DegenerateInitial("g(k) = 0 at the Dirac point"));
    }
    let h0 = PauliSum::from_terms([(PauliString::IZ, 2.0 * g)]);
    let lower_is_01 = g > 0.0;
    let index = match (branch, lower_is_01) {
        (Branch::Ground, true) | (Branch::Excited, false) => 0b01,
        (Branch::Excited, true) | (Branch::Ground, false) => 0b00,
    };
    Ok((h0, StateVector::basis(4, index)))
}

/// `[g12(k_x) / g12(k_{x;0})] · H(k_{x;0})` on the `k_y = 0` linecut.
pub fn bhz_scaled_reference(kx: f64, kx0: f64, p: &BhzParams) -> Result<PauliSum> {
    let g12_ref = p.g12(kx0);
    if g12_ref == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let h_ref = bhz_hamiltonian(&Wavevector::on_linecut(kx0), p);
    Ok(h_ref.scaled(p.g12(kx) / g12_ref))
}
