// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Ideal and noisy execution of circuits and of step-wise digitized runs.

use serde::{Deserialize, Serialize};

use crate::circuits::{gate_matrix, prepare_state, step_circuit, Circuit, Gate};
use crate::error::{Error, Result};
use crate::qcore::{
    dominant_eigenvector, herm_eig, matrix_expectation, CMatrix, DensityMatrix, StateVector, C64,
    ONE, ZERO,
};
use crate::sta::{degeneracy_cutoff, refine_angles, AngleSequence, RefineOptions, Refined, StaProblem};

/// `U ψ`, gate by gate, renormalized at the end.
pub fn run_ideal(c: &Circuit, psi0: &StateVector) -> StateVector {
    let out = c
        .gates
        .iter()
        .fold(psi0.clone(), |psi, g| gate_matrix(g).apply(&psi));
    StateVector::new(out.amplitudes()).expect("unitary evolution keeps a nonzero norm")
}

/// Device noise. Times in µs, gate durations in ns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseParams {
    pub t1_a: f64,
    pub t1_b: f64,
    pub tphi_a: f64,
    pub tphi_b: f64,
    pub single_gate_ns: f64,
    pub two_gate_ns: f64,
    /// `P(read 0 | prepared 0)` and `P(read 1 | prepared 1)` per qubit.
    pub readout_f0_a: f64,
    pub readout_f1_a: f64,
    pub readout_f0_b: f64,
    pub readout_f1_b: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            t1_a: 5.8,
            t1_b: 6.9,
            tphi_a: 26.0,
            tphi_b: 28.0,
            // Gate durations are assumed typical transmon values, not
            // measured device data.
            single_gate_ns: 30.0,
            two_gate_ns: 45.0,
            readout_f0_a: 0.99,
            readout_f1_a: 0.95,
            readout_f0_b: 0.97,
            readout_f1_b: 0.93,
        }
    }
}

impl NoiseParams {
    /// No decoherence and perfect readout.
    pub fn noiseless() -> Self {
        NoiseParams {
            t1_a: f64::INFINITY,
            t1_b: f64::INFINITY,
            tphi_a: f64::INFINITY,
            tphi_b: f64::INFINITY,
            readout_f0_a: 1.0,
            readout_f1_a: 1.0,
            readout_f0_b: 1.0,
            readout_f1_b: 1.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let times = [
            self.t1_a,
            self.t1_b,
            self.tphi_a,
            self.tphi_b,
            self.single_gate_ns,
            self.two_gate_ns,
        ];
        if times.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::InvalidProblem(
                "noise times and gate durations must be positive".into(),
            ));
        }
        let probs = [
            self.readout_f0_a,
            self.readout_f1_a,
            self.readout_f0_b,
            self.readout_f1_b,
        ];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidProblem(
                "readout fidelities must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    fn gate_time_us(&self, g: &Gate) -> f64 {
        let ns = if g.is_two_qubit() {
            self.two_gate_ns
        } else {
            self.single_gate_ns
        };
        ns * 1e-3
    }
}

/// Kraus operators of one qubit idling for `t_us`: amplitude damping followed
/// by dephasing.
fn idle_kraus(t_us: f64, t1: f64, tphi: f64) -> Vec<[[C64; 2]; 2]> {
    let gamma = 1.0 - (-t_us / t1).exp();
    // A phase flip with probability q scales coherences by 1 - 2q.
    let q = 0.5 * (1.0 - (-t_us / tphi).exp());
    let r = |x: f64| C64::new(x, 0.0);
    let damping = [
        [[ONE, ZERO], [ZERO, r((1.0 - gamma).sqrt())]],
        [[ZERO, r(gamma.sqrt())], [ZERO, ZERO]],
    ];
    let dephasing = [
        [[r((1.0 - q).sqrt()), ZERO], [ZERO, r((1.0 - q).sqrt())]],
        [[r(q.sqrt()), ZERO], [ZERO, r(-q.sqrt())]],
    ];
    let mut out = Vec::with_capacity(4);
    for d in &dephasing {
        for a in &damping {
            let mut k = [[ZERO; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    k[i][j] = d[i][0] * a[0][j] + d[i][1] * a[1][j];
                }
            }
            out.push(k);
        }
    }
    out
}

fn embed(k: &[[C64; 2]; 2], on_a: bool) -> CMatrix {
    let small = CMatrix::from_row_slice(2, &[k[0][0], k[0][1], k[1][0], k[1][1]]).expect("2x2");
    if on_a {
        small.kron(&CMatrix::identity(2))
    } else {
        CMatrix::identity(2).kron(&small)
    }
}

fn apply_kraus(rho: &CMatrix, ops: &[CMatrix]) -> CMatrix {
    ops.iter().fold(CMatrix::zeros(rho.dim()), |acc, k| {
        &acc + &(&(k * rho) * &k.adjoint())
    })
}

/// Density-matrix execution from an arbitrary input state.
pub fn run_noisy_density(c: &Circuit, rho0: &DensityMatrix, n: &NoiseParams) -> DensityMatrix {
    let mut rho = rho0.matrix().clone();
    for g in &c.gates {
        let u = gate_matrix(g);
        rho = &(&u * &rho) * &u.adjoint();
        let t = n.gate_time_us(g);
        let on_a: Vec<CMatrix> = idle_kraus(t, n.t1_a, n.tphi_a)
            .iter()
            .map(|k| embed(k, true))
            .collect();
        let on_b: Vec<CMatrix> = idle_kraus(t, n.t1_b, n.tphi_b)
            .iter()
            .map(|k| embed(k, false))
            .collect();
        rho = apply_kraus(&apply_kraus(&rho, &on_a), &on_b);
    }
    DensityMatrix::from_channel_output(rho)
}

/// Each gate is followed by amplitude damping and dephasing on both qubits
/// for the gate's duration.
pub fn run_noisy(c: &Circuit, psi0: &StateVector, n: &NoiseParams) -> DensityMatrix {
    run_noisy_density(c, &DensityMatrix::pure(psi0), n)
}

/// Measured populations after per-qubit confusion `[[F0, 1-F1], [1-F0, F1]]`.
pub fn readout_confusion(populations: &[f64; 4], n: &NoiseParams) -> [f64; 4] {
    let conf = |f0: f64, f1: f64| [[f0, 1.0 - f1], [1.0 - f0, f1]];
    let ca = conf(n.readout_f0_a, n.readout_f1_a);
    let cb = conf(n.readout_f0_b, n.readout_f1_b);
    let mut out = [0.0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, p) in populations.iter().enumerate() {
            *o += ca[i >> 1][j >> 1] * cb[i & 1][j & 1] * p;
        }
    }
    out
}

/// Eigenspace of the tracked level of `h_target`. Degenerate levels are
/// handled by projecting onto the whole block.
#[derive(Clone, Debug)]
pub struct TargetSpace {
    pub energy: f64,
    pub basis: Vec<StateVector>,
}

impl TargetSpace {
    pub fn of(p: &StaProblem) -> Result<TargetSpace> {
        let eig = herm_eig(&p.h_target.matrix())?;
        let tol = degeneracy_cutoff(&eig, p.degeneracy_rel).max(1e-12);
        let block = eig.degenerate_block(p.track, tol);
        Ok(TargetSpace {
            energy: eig.values[p.track],
            basis: block.into_iter().map(|k| eig.vectors[k].clone()).collect(),
        })
    }

    pub fn fidelity(&self, psi: &StateVector) -> f64 {
        self.basis
            .iter()
            .map(|v| v.dot(psi).norm_sqr())
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub m: usize,
    #[serde(rename = "F")]
    pub fidelity: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    /// Purity of the step's output density matrix (1 for ideal runs).
    pub purity: f64,
    pub state: StateVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub target_energy: f64,
    pub entries: Vec<RunEntry>,
}

impl RunRecord {
    pub fn last(&self) -> &RunEntry {
        self.entries.last().expect("record always holds the initial entry")
    }

    pub fn final_fidelity(&self) -> f64 {
        self.last().fidelity
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,F,E\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.m, e.fidelity, e.energy));
        }
        out
    }
}

fn check_consistent(p: &StaProblem, seq: &AngleSequence) -> Result<()> {
    if seq.slots != p.slots {
        return Err(Error::TermMismatch(
            "angle sequence terms differ from the problem's".into(),
        ));
    }
    if seq.steps() != p.steps {
        return Err(Error::InvalidProblem(format!(
            "angle sequence has {} steps, problem has {}",
            seq.steps(),
            p.steps
        )));
    }
    Ok(())
}

/// Step-wise execution of a digitized drive, recording fidelity against the
/// tracked eigenspace of `p.h_target` and energy after every step.
///
/// With noise, each step's output is the dominant eigenvector of the
/// density matrix; with `repreparation` the next step starts from a fresh
/// [`prepare_state`] circuit of that state on `|00⟩`, otherwise the density
/// matrix is carried over.
pub fn run_digitized_sta(
    p: &StaProblem,
    seq: &AngleSequence,
    repreparation: bool,
    noise: Option<&NoiseParams>,
) -> Result<RunRecord> {
    p.validate()?;
    check_consistent(p, seq)?;
    if let Some(n) = noise {
        n.validate()?;
    }
    let target = TargetSpace::of(p)?;
    let h = p.h_target.matrix();
    let entry = |m: usize, state: StateVector, purity: f64| RunEntry {
        m,
        fidelity: target.fidelity(&state),
        energy: matrix_expectation(&h, &state),
        purity,
        state: state.with_canonical_phase(),
    };

    let zero = StateVector::basis(4, 0);
    let mut entries = vec![entry(0, p.initial.clone(), 1.0)];
    let mut state = p.initial.clone();
    let mut rho: Option<DensityMatrix> = None;
    for m in 0..seq.steps() {
        let block = step_circuit(seq, m)?;
        let step = m + 1;
        match noise {
            None => {
                let start = if repreparation {
                    run_ideal(&prepare_state(&state)?, &zero)
                } else {
                    state.clone()
                };
                state = run_ideal(&block, &start);
                entries.push(entry(step, state.clone(), 1.0));
            }
            Some(n) => {
                let out = match (&rho, repreparation) {
                    (Some(prev), false) => run_noisy_density(&block, prev, n),
                    _ => {
                        let mut c = prepare_state(&state)?;
                        c.append(&block);
                        run_noisy(&c, &zero, n)
                    }
                };
                state = dominant_eigenvector(&out).map_err(|e| e.at_step(step))?;
                entries.push(entry(step, state.clone(), out.purity()));
                rho = Some(out);
            }
        }
    }
    Ok(RunRecord {
        target_energy: target.energy,
        entries,
    })
}

/// Ideal final state of the whole sequence applied to `p.initial`.
pub fn final_state(p: &StaProblem, seq: &AngleSequence) -> Result<StateVector> {
    let mut c = Circuit::new();
    for m in 0..seq.steps() {
        c.append(&step_circuit(seq, m)?);
    }
    Ok(run_ideal(&c, &p.initial))
}

/// Refine `seq` for the ideal final-state fidelity of `p`.
pub fn refine_for_problem(p: &StaProblem, seq: &AngleSequence, opts: &RefineOptions) -> Result<Refined> {
    check_consistent(p, seq)?;
    let target = TargetSpace::of(p)?;
    refine_angles(seq, opts, |s| Ok(target.fidelity(&final_state(p, s)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{decompose_two_qubit_rotation, Preset};
    use crate::models::{h2_hamiltonian, h2_initial_excited, h2_initial_ground, H2Coefficients};
    use crate::qcore::{expectation, fidelity, PauliString};
    use crate::sta::angle_sequence;
    use approx::assert_abs_diff_eq;

    const PAPER_ROW: H2Coefficients = H2Coefficients {
        r: 0.05,
        g0: 10.08,
        g: -1.055,
        g12: 0.1557,
    };

    fn ground(steps: usize) -> StaProblem {
        let (h0, psi0) = h2_initial_ground(&PAPER_ROW).unwrap();
        let h = h2_hamiltonian(&PAPER_ROW);
        StaProblem::new(h0, h, psi0, 1.0, steps, Preset::H2Ground.slots(), 0).unwrap()
    }

    fn excited(steps: usize) -> StaProblem {
        let (h0, psi0) = h2_initial_excited(&PAPER_ROW).unwrap();
        let h = h2_hamiltonian(&PAPER_ROW);
        StaProblem::new(h0, h, psi0, 1.0, steps, Preset::H2Excited.slots(), 1).unwrap()
    }

    #[test]
    fn empty_circuit_keeps_state() {
        let psi = StateVector::new(vec![C64::new(0.3, 0.1), ONE, ZERO, C64::new(0.0, -0.4)]).unwrap();
        assert_eq!(run_ideal(&Circuit::new(), &psi), psi);
    }

    #[test]
    fn yy_circuit_matches_direct_rotation() {
        let theta = 0.83;
        let c = Circuit::from_gates(decompose_two_qubit_rotation(PauliString::YY, theta).unwrap());
        let direct = gate_matrix(&Gate::rot(PauliString::YY, theta)).apply(&StateVector::basis(4, 0));
        let out = run_ideal(&c, &StateVector::basis(4, 0));
        assert_abs_diff_eq!(fidelity(&out, &direct), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_density_matches_ideal() {
        let c = crate::circuits::trotter_circuit(
            &angle_sequence(&ground(2)).unwrap(),
            Preset::H2Ground,
        )
        .unwrap();
        let psi0 = ground(2).initial;
        let rho = run_noisy(&c, &psi0, &NoiseParams::noiseless());
        let want = DensityMatrix::pure(&run_ideal(&c, &psi0));
        assert!(rho.matrix().max_diff(want.matrix()) < 1e-10);
    }

    #[test]
    fn amplitude_damping_decays_as_exponential() {
        let n = 200;
        let t1 = NoiseParams::default().t1_a;
        let params = NoiseParams {
            single_gate_ns: t1 * 1e3 / n as f64,
            ..NoiseParams::default()
        };
        let c = Circuit::from_gates(vec![Gate::rot(PauliString::ZI, 0.0); n]);
        let rho = run_noisy(&c, &StateVector::basis(4, 2), &params);
        let pops = rho.populations();
        assert_abs_diff_eq!(pops[2] + pops[3], (-1.0f64).exp(), epsilon = 1e-3);
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn dephasing_decays_coherence_at_tphi() {
        let n = 100;
        let params = NoiseParams {
            t1_a: f64::INFINITY,
            t1_b: f64::INFINITY,
            single_gate_ns: 26.0 * 1e3 / n as f64,
            ..NoiseParams::default()
        };
        let h = 1.0 / 2f64.sqrt();
        let plus = StateVector::new(vec![C64::new(h, 0.0), ZERO, C64::new(h, 0.0), ZERO]).unwrap();
        let c = Circuit::from_gates(vec![Gate::rot(PauliString::ZI, 0.0); n]);
        let rho = run_noisy(&c, &plus, &params);
        assert_abs_diff_eq!(rho.matrix().get(0, 2).re, 0.5 * (-1.0f64).exp(), epsilon = 1e-9);
    }

    #[test]
    fn noisy_output_is_a_state() {
        let c = crate::circuits::trotter_circuit(
            &angle_sequence(&ground(3)).unwrap(),
            Preset::H2Ground,
        )
        .unwrap();
        let rho = run_noisy(&c, &ground(3).initial, &NoiseParams::default());
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-10);
        assert!(rho.eigenvalues().iter().all(|l| *l >= -1e-9));
        assert!(rho.purity() < 1.0);
    }

    #[test]
    fn readout_examples() {
        let perfect = NoiseParams::noiseless();
        let p = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(readout_confusion(&p, &perfect), p);
        let out = readout_confusion(&[1.0, 0.0, 0.0, 0.0], &NoiseParams::default());
        assert_abs_diff_eq!(out[0], 0.99 * 0.97, epsilon = 1e-15);
        assert_abs_diff_eq!(out.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_steps_keep_only_initial_entry() {
        for (p, f0) in [(ground(0), 0.23), (excited(0), 0.50)] {
            let rec = run_digitized_sta(&p, &AngleSequence::empty(p.slots.clone()), true, None).unwrap();
            assert_eq!(rec.entries.len(), 1);
            assert_abs_diff_eq!(rec.entries[0].fidelity, f0, epsilon = 0.01);
        }
    }

    #[test]
    fn repreparation_is_noop_without_noise() {
        let p = ground(4);
        let seq = angle_sequence(&p).unwrap();
        let a = run_digitized_sta(&p, &seq, true, None).unwrap();
        let b = run_digitized_sta(&p, &seq, false, None).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_abs_diff_eq!(x.fidelity, y.fidelity, epsilon = 1e-10);
            assert_abs_diff_eq!(x.energy, y.energy, epsilon = 1e-10);
        }
    }

    #[test]
    fn energy_matches_expectation() {
        let p = ground(2);
        let rec = run_digitized_sta(&p, &angle_sequence(&p).unwrap(), false, None).unwrap();
        let last = rec.last();
        assert_abs_diff_eq!(last.energy, expectation(&p.h_target, &last.state), epsilon = 1e-10);
    }

    #[test]
    fn refined_runs_reach_reference_fidelities() {
        for (p, want) in [(ground(2), 0.99), (excited(3), 0.98)] {
            let seq = angle_sequence(&p).unwrap();
            let refined = refine_for_problem(&p, &seq, &RefineOptions::default()).unwrap();
            let rec = run_digitized_sta(&p, &refined.angles, true, None).unwrap();
            assert!(rec.final_fidelity() >= want, "{}", rec.final_fidelity());
        }
    }

    #[test]
    fn mismatched_sequence_is_rejected() {
        let p = ground(2);
        let seq = angle_sequence(&excited(2)).unwrap();
        assert!(matches!(run_digitized_sta(&p, &seq, true, None), Err(Error::TermMismatch(_))));
        let seq = angle_sequence(&ground(3)).unwrap();
        assert!(run_digitized_sta(&p, &seq, true, None).is_err());
    }

    #[test]
    fn noisy_run_records_every_step() {
        let p = ground(3);
        let seq = angle_sequence(&p).unwrap();
        for rep in [true, false] {
            let rec = run_digitized_sta(&p, &seq, rep, Some(&NoiseParams::default())).unwrap();
            assert_eq!(rec.entries.len(), 4);
            assert!(rec.entries.iter().all(|e| (0.0..=1.0).contains(&e.fidelity)));
            assert!(rec.entries[1..].iter().all(|e| e.purity < 1.0));
        }
    }

    #[test]
    fn csv_layout() {
        let p = ground(1);
        let rec = run_digitized_sta(&p, &angle_sequence(&p).unwrap(), true, None).unwrap();
        let csv = rec.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "m,F,E");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,"));
    }
}
