// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Gates, Trotter circuits and two-qubit state preparation.
//!
//! Gate lists are in application order: the first gate acts first.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{propagator, CMatrix, Pauli, PauliString, StateVector, C64, ONE, ZERO};
use crate::sta::{AngleSequence, Slot};

/// Angles below this magnitude are dropped from state-preparation circuits.
const ANGLE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    A,
    B,
}

impl Qubit {
    fn other(self) -> Qubit {
        match self {
            Qubit::A => Qubit::B,
            Qubit::B => Qubit::A,
        }
    }

    /// Single-qubit Pauli placed on this qubit.
    pub fn string(self, p: Pauli) -> PauliString {
        match self {
            Qubit::A => PauliString(p, Pauli::I),
            Qubit::B => PauliString(Pauli::I, p),
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Qubit::A => "A",
            Qubit::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// `exp(-i θ P / 2)`.
    Rotation { pauli: PauliString, angle: f64 },
    Cnot { control: Qubit, target: Qubit },
    Cz,
}

impl Gate {
    pub fn rot(pauli: PauliString, angle: f64) -> Gate {
        Gate::Rotation { pauli, angle }
    }

    pub fn cnot(control: Qubit) -> Gate {
        Gate::Cnot {
            control,
            target: control.other(),
        }
    }

    /// Whether the gate couples the two qubits.
    pub fn is_two_qubit(&self) -> bool {
        match self {
            Gate::Rotation { pauli, .. } => pauli.weight() == 2,
            Gate::Cnot { .. } | Gate::Cz => true,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rotation { pauli, angle } => write!(f, "ROT {pauli} {angle}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Cz => write!(f, "CZ"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gate> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("invalid gate {s:?}"),
        };
        let qubit = |t: &str| match t {
            "A" => Ok(Qubit::A),
            "B" => Ok(Qubit::B),
            _ => Err(bad()),
        };
        let fields: Vec<&str> = s.split_whitespace().collect();
        match fields.as_slice() {
            ["ROT", p, angle] => {
                let angle: f64 = angle.parse().map_err(|_| bad())?;
                if !angle.is_finite() {
                    return Err(bad());
                }
                Ok(Gate::rot(p.parse()?, angle))
            }
            ["CNOT", c, t] => {
                let (control, target) = (qubit(c)?, qubit(t)?);
                if control == target {
                    return Err(bad());
                }
                Ok(Gate::Cnot { control, target })
            }
            ["CZ"] => Ok(Gate::Cz),
            _ => Err(bad()),
        }
    }
}

pub fn gate_matrix(g: &Gate) -> CMatrix {
    match g {
        Gate::Rotation { pauli, angle } => {
            let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
            // exp(-iθP/2) = cos(θ/2) 1 - i sin(θ/2) P since P² = 1.
            &CMatrix::identity(4).scale(c) + &pauli.matrix().scale_complex(C64::new(0.0, -s))
        }
        Gate::Cnot { control, .. } => {
            let perm: [usize; 4] = match control {
                Qubit::A => [0, 1, 3, 2],
                Qubit::B => [0, 3, 2, 1],
            };
            let mut m = CMatrix::zeros(4);
            for (col, row) in perm.into_iter().enumerate() {
                m.set(row, col, ONE);
            }
            m
        }
        Gate::Cz => CMatrix::from_row_slice(
            4,
            &[
                ONE, ZERO, ZERO, ZERO, //
                ZERO, ONE, ZERO, ZERO, //
                ZERO, ZERO, ONE, ZERO, //
                ZERO, ZERO, ZERO, -ONE,
            ],
        )
        .expect("4x4"),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_gates(gates: Vec<Gate>) -> Self {
        Circuit { gates }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn append(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    pub fn unitary(&self) -> CMatrix {
        circuit_unitary(self)
    }

    /// Parse the text dump produced by `Display`; blank lines and `#`
    /// comments are skipped.
    pub fn parse_text(text: &str) -> Result<Circuit> {
        let mut gates = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            gates.push(line.parse().map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                other => other,
            })?);
        }
        Ok(Circuit { gates })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// `G_n ⋯ G_2 G_1` for gates applied in list order.
pub fn circuit_unitary(c: &Circuit) -> CMatrix {
    c.gates
        .iter()
        .fold(CMatrix::identity(4), |u, g| &gate_matrix(g) * &u)
}

/// `exp(-iθ P/2)` for a string with two non-identity factors, as
/// basis changes, `CNOT(A→B) · R_{Z_B}(±θ) · CNOT(A→B)`, and the inverse basis
/// changes.
///
/// X factors are conjugated to Z by `R_Y(∓π/2)`, Y factors by `R_X(∓π/2)`.
/// The latter maps Z to -Y, so an odd number of Y factors flips the sign of
/// the central angle.
pub fn decompose_two_qubit_rotation(p: PauliString, theta: f64) -> Result<Vec<Gate>> {
    if p.weight() != 2 {
        return Err(Error::IdentityFactor(p));
    }
    let basis = |q: Qubit, f: Pauli, sign: f64| match f {
        Pauli::X => Some(Gate::rot(q.string(Pauli::Y), sign * FRAC_PI_2)),
        Pauli::Y => Some(Gate::rot(q.string(Pauli::X), sign * FRAC_PI_2)),
        _ => None,
    };
    let y_count = [p.a(), p.b()].iter().filter(|f| **f == Pauli::Y).count();
    let angle = if y_count % 2 == 1 { -theta } else { theta };

    let mut gates = Vec::with_capacity(7);
    gates.extend(basis(Qubit::A, p.a(), -1.0));
    gates.extend(basis(Qubit::B, p.b(), -1.0));
    gates.push(Gate::cnot(Qubit::A));
    gates.push(Gate::rot(PauliString::IZ, angle));
    gates.push(Gate::cnot(Qubit::A));
    gates.extend(basis(Qubit::A, p.a(), 1.0));
    gates.extend(basis(Qubit::B, p.b(), 1.0));
    Ok(gates)
}

/// Physical gates for `exp(-iθ P/2)`; identity strings produce nothing.
pub fn rotation_gates(p: PauliString, theta: f64) -> Result<Vec<Gate>> {
    match p.weight() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![Gate::rot(p, theta)]),
        _ => decompose_two_qubit_rotation(p, theta),
    }
}

/// Gate orderings of the supported experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `R_{Z_A}R_{Z_B}R_{X_A}R_{X_B}R_{Y_A}R_{Y_B}R_{Y_AY_B}`.
    H2Ground,
    /// `R_{X_A}R_{Z_A}R_{Z_B}R_{Y_AY_B}`.
    H2Excited,
    /// `R_{Z_B}R_{Y_B}R_{Z_AX_B}`.
    Bhz,
    /// `R_{Z_A}R_{Z_B}R_{Y_AY_B}` with a single step.
    H2OneStep,
    /// Symmetric `R_{Z_B}R_{Z_AX_B}R_{Z_B}`.
    BhzOneStep,
    /// All 15 non-identity strings, one slot each.
    Full,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::H2Ground,
        Preset::H2Excited,
        Preset::Bhz,
        Preset::H2OneStep,
        Preset::BhzOneStep,
        Preset::Full,
    ];

    /// Slots in application order.
    pub fn slots(self) -> Vec<Slot> {
        use PauliString as P;
        match self {
            Preset::H2Ground => vec![
                Slot::single(P::YY),
                Slot::pair(P::YI, P::IY),
                Slot::pair(P::XI, P::IX),
                Slot::pair(P::ZI, P::IZ),
            ],
            Preset::H2Excited => vec![
                Slot::single(P::YY),
                Slot::single(P::IZ),
                Slot::single(P::ZI),
                Slot::single(P::XI),
            ],
            Preset::Bhz => vec![
                Slot::single(P::ZX),
                Slot::single(P::IY),
                Slot::single(P::IZ),
            ],
            Preset::H2OneStep => vec![Slot::single(P::YY), Slot::pair(P::ZI, P::IZ)],
            Preset::BhzOneStep => vec![
                Slot::single(P::IZ),
                Slot::single(P::ZX),
                Slot::single(P::IZ),
            ],
            Preset::Full => PauliString::non_identity().map(Slot::single).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::H2Ground => "h2-ground",
            Preset::H2Excited => "h2-excited",
            Preset::Bhz => "bhz",
            Preset::H2OneStep => "h2-one-step",
            Preset::BhzOneStep => "bhz-one-step",
            Preset::Full => "full",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("unknown preset {s:?}"),
            })
    }
}

/// Gates of Trotter step `m` (0-based row of `seq`), slots in order.
pub fn step_circuit(seq: &AngleSequence, m: usize) -> Result<Circuit> {
    let row = seq
        .theta
        .get(m)
        .ok_or_else(|| Error::InvalidProblem(format!("step {m} out of range")))?;
    if row.len() != seq.slots.len() {
        return Err(Error::TermMismatch(format!(
            "row {m} has {} angles for {} slots",
            row.len(),
            seq.slots.len()
        )));
    }
    let mut c = Circuit::new();
    for (slot, theta) in seq.slots.iter().zip(row) {
        for p in slot.strings() {
            c.gates.extend(rotation_gates(*p, *theta)?);
        }
    }
    Ok(c)
}

pub fn trotter_circuit(seq: &AngleSequence, preset: Preset) -> Result<Circuit> {
    let want = preset.slots();
    if seq.slots != want {
        let names = |s: &[Slot]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        return Err(Error::TermMismatch(format!(
            "sequence has [{}], preset {preset} expects [{}]",
            names(&seq.slots),
            names(&want)
        )));
    }
    let mut c = Circuit::new();
    for m in 0..seq.steps() {
        c.append(&step_circuit(seq, m)?);
    }
    Ok(c)
}

/// Exact `exp(-i H Δt)` of the slot-restricted Hamiltonian of step `m`, for
/// comparison with [`step_circuit`].
pub fn step_exact(seq: &AngleSequence, m: usize) -> Result<CMatrix> {
    let mut h = CMatrix::zeros(4);
    for (slot, theta) in seq.slots.iter().zip(&seq.theta[m]) {
        for p in slot.strings() {
            h = &h + &p.matrix().scale(0.5 * theta);
        }
    }
    propagator(&h, 1.0)
}

/// `(β, γ, δ)` with `u = e^{iα} R_Z(β) R_Y(γ) R_Z(δ)`.
fn zyz_angles(u: [[C64; 2]; 2]) -> (f64, f64, f64) {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let phase = det.sqrt();
    let v00 = u[0][0] / phase;
    let v10 = u[1][0] / phase;
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    // v00 = e^{-i(β+δ)/2} cos(γ/2), v10 = e^{i(β-δ)/2} sin(γ/2).
    let sum = if v00.norm() > ANGLE_EPS { -2.0 * v00.arg() } else { 0.0 };
    let diff = if v10.norm() > ANGLE_EPS { 2.0 * v10.arg() } else { 0.0 };
    ((sum + diff) / 2.0, gamma, (sum - diff) / 2.0)
}

fn push_local(c: &mut Circuit, q: Qubit, u: [[C64; 2]; 2]) {
    let (beta, gamma, delta) = zyz_angles(u);
    for (p, angle) in [(Pauli::Z, delta), (Pauli::Y, gamma), (Pauli::Z, beta)] {
        if angle.abs() > ANGLE_EPS {
            c.push(Gate::rot(q.string(p), angle));
        }
    }
}

/// Circuit taking `|00⟩` to `target` up to global phase, from the Schmidt
/// decomposition `c = U Σ V^H` of the amplitude matrix `c_{ab} = ⟨ab|target⟩`:
/// `R_{Y_A}(α)`, `CNOT(A→B)`, then `U` on A and `(V^H)^T` on B.
pub fn prepare_state(target: &StateVector) -> Result<Circuit> {
    if target.dim() != 4 {
        return Err(Error::Dimension(target.dim()));
    }
    let amp = target.amplitudes();
    let c = nalgebra::Matrix2::new(amp[0], amp[1], amp[2], amp[3]);
    let svd = c.svd(true, true);
    let (mut u, mut v_t) = (svd.u.expect("u"), svd.v_t.expect("v_t"));
    let mut s = svd.singular_values;
    if s[1] > s[0] {
        s.swap_rows(0, 1);
        u.swap_columns(0, 1);
        v_t.swap_rows(0, 1);
    }
    let norm = (s[0] * s[0] + s[1] * s[1]).sqrt();
    let (s0, s1) = (s[0] / norm, s[1] / norm);

    let mut circ = Circuit::new();
    let alpha = 2.0 * s1.atan2(s0);
    if alpha.abs() <= ANGLE_EPS {
        // Product state: only the first columns matter.
        push_single(&mut circ, Qubit::A, [u[(0, 0)], u[(1, 0)]]);
        push_single(&mut circ, Qubit::B, [v_t[(0, 0)], v_t[(0, 1)]]);
        return Ok(circ);
    }
    circ.push(Gate::rot(PauliString::YI, alpha));
    circ.push(Gate::cnot(Qubit::A));
    push_local(&mut circ, Qubit::A, [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]);
    // Column k of the B unitary is row k of V^H.
    push_local(
        &mut circ,
        Qubit::B,
        [[v_t[(0, 0)], v_t[(1, 0)]], [v_t[(0, 1)], v_t[(1, 1)]]],
    );
    Ok(circ)
}

/// `R_Z(φ) R_Y(γ)` taking `|0⟩` to `v` up to phase.
fn push_single(c: &mut Circuit, q: Qubit, v: [C64; 2]) {
    let gamma = 2.0 * v[1].norm().atan2(v[0].norm());
    if gamma.abs() > ANGLE_EPS {
        c.push(Gate::rot(q.string(Pauli::Y), gamma));
        let phi = v[1].arg() - v[0].arg();
        if v[0].norm() > ANGLE_EPS && phi.abs() > ANGLE_EPS {
            c.push(Gate::rot(q.string(Pauli::Z), phi));
        }
    }
}
