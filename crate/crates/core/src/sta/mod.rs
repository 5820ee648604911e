// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Shortcut-to-adiabaticity construction.
//!
//! The adiabatic path is `H_ad(s) = H_0 + λ(s)(H - H_0)` with `λ(s) = sin²(πs/2)`
//! and `s = t/T`. The counter-diabatic term is built from eigenprojectors,
//!
//! ```text
//! H_cd = i Σ_{m≠n} P_m (∂_t H_ad) P_n / (ε_n - ε_m),
//! ```
//!
//! skipping pairs closer than the degeneracy cutoff. `H_tot = H_ad + H_cd` is
//! projected onto the allowed gate generators to give the rotation angles
//! `θ_{m;j} = ω_j(s_m) T/M`.

mod refine;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use refine::{refine_angles, RefineOptions, Refined};

use crate::error::{Error, Result};
use crate::qcore::{
    herm_eig, propagator, trace_product, CMatrix, Eigen, PauliString, PauliSum, StateVector, C64,
};

/// `λ(s) = sin²(πs/2)`.
pub fn lambda(s: f64) -> f64 {
    (PI * s / 2.0).sin().powi(2)
}

/// `dλ/ds = (π/2) sin(πs)`.
pub fn dlambda_ds(s: f64) -> f64 {
    PI / 2.0 * (PI * s).sin()
}

/// Where in each of the `M` segments the angles are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// `s = m/M`.
    #[default]
    RightEndpoint,
    /// `s = (m - 1/2)/M`.
    Midpoint,
}

impl Sampling {
    pub fn point(self, m: usize, steps: usize) -> f64 {
        match self {
            Sampling::RightEndpoint => m as f64 / steps as f64,
            Sampling::Midpoint => (m as f64 - 0.5) / steps as f64,
        }
    }
}

/// Default relative degeneracy cutoff: pairs with `|ε_m - ε_n|` below
/// `1e-7 × (ε_max - ε_min)` are skipped in `H_cd`.
pub const DEFAULT_DEGENERACY_REL: f64 = 1e-7;

/// A group of Pauli strings rotated by one shared angle (e.g. `Y_A` and `Y_B`
/// driven together).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot(pub Vec<PauliString>);

impl Slot {
    pub fn single(p: PauliString) -> Self {
        Slot(vec![p])
    }

    pub fn pair(a: PauliString, b: PauliString) -> Self {
        Slot(vec![a, b])
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.0
    }
}

impl std::fmt::Display for Slot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", names.join("+"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StaProblem {
    pub h0: PauliSum,
    pub h_target: PauliSum,
    /// State the drive starts from; an eigenstate of `h0` for a fresh run,
    /// or a previously determined reference state.
    pub initial: StateVector,
    /// Operation time `T` (ħ = 1, inverse energy units of the model).
    pub total_time: f64,
    /// Number of Trotter steps `M`.
    pub steps: usize,
    /// Gate generators in application order.
    pub slots: Vec<Slot>,
    /// Index (ascending) of the target eigenvalue of `h_target`.
    pub track: usize,
    pub sampling: Sampling,
    pub degeneracy_rel: f64,
}

impl StaProblem {
    pub fn new(
        h0: PauliSum,
        h_target: PauliSum,
        initial: StateVector,
        total_time: f64,
        steps: usize,
        slots: Vec<Slot>,
        track: usize,
    ) -> Result<Self> {
        let p = StaProblem {
            h0,
            h_target,
            initial,
            total_time,
            steps,
            slots,
            track,
            sampling: Sampling::default(),
            degeneracy_rel: DEFAULT_DEGENERACY_REL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn with_degeneracy_rel(mut self, rel: f64) -> Self {
        self.degeneracy_rel = rel;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_slots(mut self, slots: Vec<Slot>) -> Self {
        self.slots = slots;
        self
    }

    /// `M = 0` is accepted and means "no evolution".
    pub fn validate(&self) -> Result<()> {
        if !(self.total_time > 0.0) || !self.total_time.is_finite() {
            return Err(Error::InvalidProblem(format!(
                "operation time must be positive, got {}",
                self.total_time
            )));
        }
        if self.slots.is_empty() || self.slots.iter().any(|s| s.0.is_empty()) {
            return Err(Error::InvalidProblem("term list must be non-empty".into()));
        }
        if self.track >= 4 {
            return Err(Error::InvalidProblem(format!("track index {}", self.track)));
        }
        if self.initial.dim() != 4 {
            return Err(Error::Dimension(self.initial.dim()));
        }
        if !(self.degeneracy_rel >= 0.0) {
            return Err(Error::InvalidProblem("degeneracy cutoff must be >= 0".into()));
        }
        Ok(())
    }

    pub fn step_duration(&self) -> f64 {
        self.total_time / self.steps as f64
    }
}

/// `H_0 + λ(s)(H - H_0)`.
pub fn h_ad(p: &StaProblem, s: f64) -> PauliSum {
    let l = lambda(s);
    p.h0.combine(1.0 - l, &p.h_target, l)
}

/// `∂_t H_ad = (dλ/ds / T)(H - H_0)`.
pub fn dh_ad_dt(p: &StaProblem, s: f64) -> CMatrix {
    let rate = dlambda_ds(s) / p.total_time;
    p.h0.combine(-rate, &p.h_target, rate).matrix()
}

/// Absolute degeneracy cutoff `δ = rel × spectral range`.
pub fn degeneracy_cutoff(eig: &Eigen, rel: f64) -> f64 {
    let range = eig.values.last().unwrap_or(&0.0) - eig.values.first().unwrap_or(&0.0);
    rel * range
}

/// `i Σ_{m≠n, |ε_m-ε_n|>δ} |m⟩⟨m| dh |n⟩⟨n| / (ε_n - ε_m)` for the given
/// eigenbasis.
pub fn counter_diabatic(eig: &Eigen, dh: &CMatrix, delta: f64) -> CMatrix {
    let dim = eig.values.len();
    let mut out = CMatrix::zeros(dim);
    for m in 0..dim {
        let dh_vm = dh.apply(&eig.vectors[m]);
        for n in 0..dim {
            let gap = eig.values[n] - eig.values[m];
            if m == n || gap.abs() <= delta {
                continue;
            }
            // ⟨m|dh|n⟩ = conj(⟨n|dh|m⟩) for Hermitian dh.
            let elem = eig.vectors[n].dot(&dh_vm).conj();
            let coeff = C64::new(0.0, 1.0) * elem / gap;
            let outer = outer(&eig.vectors[m], &eig.vectors[n]);
            out = &out + &outer.scale_complex(coeff);
        }
    }
    out
}

fn outer(a: &StateVector, b: &StateVector) -> CMatrix {
    CMatrix::from_inner(a.inner() * b.inner().adjoint())
}

pub fn h_cd(p: &StaProblem, s: f64) -> Result<CMatrix> {
    let eig = herm_eig(&h_ad(p, s).matrix())?;
    let delta = degeneracy_cutoff(&eig, p.degeneracy_rel);
    Ok(counter_diabatic(&eig, &dh_ad_dt(p, s), delta))
}

/// `H_ad(s) + H_cd(s)`.
pub fn h_tot(p: &StaProblem, s: f64) -> Result<CMatrix> {
    Ok(&h_ad(p, s).matrix() + &h_cd(p, s)?)
}

/// Hilbert-Schmidt projection of `m` onto the slot generators.
///
/// `ω(Γ) = Tr(Γ m)/2`. A slot holding several strings gets the mean of their
/// coefficients; a string that appears in `k` slots contributes `ω/k` to each.
pub fn project_onto_terms(m: &CMatrix, slots: &[Slot]) -> Vec<f64> {
    let multiplicity = |p: PauliString| {
        slots
            .iter()
            .filter(|slot| slot.0.contains(&p))
            .count()
            .max(1) as f64
    };
    slots
        .iter()
        .map(|slot| {
            let sum: f64 = slot
                .0
                .iter()
                .map(|p| 0.5 * trace_product(&p.matrix(), m) / multiplicity(*p))
                .sum();
            sum / slot.0.len() as f64
        })
        .collect()
}

/// Frobenius norm of the traceless part of `m` not captured by
/// [`project_onto_terms`].
pub fn projection_residual(m: &CMatrix, slots: &[Slot]) -> f64 {
    let omegas = project_onto_terms(m, slots);
    let mut captured = CMatrix::identity(m.dim()).scale_complex(m.trace() / m.dim() as f64);
    for (slot, w) in slots.iter().zip(&omegas) {
        for p in &slot.0 {
            captured = &captured + &p.matrix().scale(0.5 * w);
        }
    }
    let diff = m - &captured;
    diff.inner().norm()
}

/// Rotation angles `θ_{m;j}`, one row per Trotter step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleSequence {
    pub slots: Vec<Slot>,
    pub theta: Vec<Vec<f64>>,
}

impl AngleSequence {
    pub fn empty(slots: Vec<Slot>) -> Self {
        AngleSequence {
            slots,
            theta: Vec::new(),
        }
    }

    pub fn zeros(slots: Vec<Slot>, steps: usize) -> Self {
        let width = slots.len();
        AngleSequence {
            slots,
            theta: vec![vec![0.0; width]; steps],
        }
    }

    pub fn steps(&self) -> usize {
        self.theta.len()
    }

    pub fn width(&self) -> usize {
        self.slots.len()
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.theta.iter().flatten().copied().collect()
    }

    /// Inverse of [`AngleSequence::flatten`], keeping this sequence's shape.
    pub fn with_flat(&self, flat: &[f64]) -> AngleSequence {
        let width = self.width().max(1);
        AngleSequence {
            slots: self.slots.clone(),
            theta: flat.chunks(width).map(|c| c.to_vec()).collect(),
        }
    }
}

/// `θ_{m;j} = ω_j(s_m) · T/M` with `ω` projected from `H_tot(s_m)`.
pub fn angle_sequence(p: &StaProblem) -> Result<AngleSequence> {
    p.validate()?;
    if p.steps == 0 {
        return Ok(AngleSequence::empty(p.slots.clone()));
    }
    let dt = p.step_duration();
    let theta = (1..=p.steps)
        .map(|m| {
            let s = p.sampling.point(m, p.steps);
            let omegas = project_onto_terms(&h_tot(p, s)?, &p.slots);
            Ok(omegas.into_iter().map(|w| w * dt).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(AngleSequence {
        slots: p.slots.clone(),
        theta,
    })
}

pub const MIN_ORACLE_SUBSTEPS: usize = 100;

/// Time-ordered product of exact propagators of the unprojected `H_tot`,
/// sampled at segment midpoints, applied to `p.initial`.
pub fn continuous_sta_evolve(p: &StaProblem, substeps: usize) -> Result<StateVector> {
    p.validate()?;
    if substeps < MIN_ORACLE_SUBSTEPS {
        return Err(Error::InvalidProblem(format!(
            "continuous evolution needs at least {MIN_ORACLE_SUBSTEPS} substeps, got {substeps}"
        )));
    }
    let dt = p.total_time / substeps as f64;
    let mut psi = p.initial.clone();
    for k in 0..substeps {
        let s = (k as f64 + 0.5) / substeps as f64;
        let u = propagator(&h_tot(p, s)?, dt)?;
        psi = StateVector::new(u.apply(&psi).amplitudes())?;
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{fidelity, pauli_decompose, DensityMatrix};
    use approx::assert_abs_diff_eq;

    fn toy_problem() -> StaProblem {
        // g(Y_A + Y_B) -> g(Z_A + Z_B) + g12 Y_A Y_B with the reference R = 0.05 Å values.
        let (g0, g, g12) = (10.08, -1.055, 0.1557);
        let h0 = PauliSum::from_terms([(PauliString::YI, 2.0 * g), (PauliString::IY, 2.0 * g)]);
        let h = PauliSum::from_terms([
            (PauliString::II, 2.0 * g0),
            (PauliString::ZI, 2.0 * g),
            (PauliString::IZ, 2.0 * g),
            (PauliString::YY, 2.0 * g12),
        ]);
        let psi0 = StateVector::new(vec![
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.0, 0.5),
            C64::new(-0.5, 0.0),
        ])
        .unwrap();
        let slots = vec![
            Slot::single(PauliString::YY),
            Slot::pair(PauliString::YI, PauliString::IY),
            Slot::pair(PauliString::XI, PauliString::IX),
            Slot::pair(PauliString::ZI, PauliString::IZ),
        ];
        StaProblem::new(h0, h, psi0, 1.0, 4, slots, 0).unwrap()
    }

    #[test]
    fn schedule_boundary_conditions() {
        assert_eq!(lambda(0.0), 0.0);
        assert_abs_diff_eq!(lambda(1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambda(0.5), 0.5, epsilon = 1e-15);
        assert_eq!(dlambda_ds(0.0), 0.0);
        assert_abs_diff_eq!(dlambda_ds(1.0), 0.0, epsilon = 1e-15);
        // Central finite difference of λ.
        for s in [0.1, 0.33, 0.7] {
            let h = 1e-6;
            let fd = (lambda(s + h) - lambda(s - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, dlambda_ds(s), epsilon = 1e-8);
        }
    }

    #[test]
    fn h_ad_endpoints_and_midpoint() {
        let p = toy_problem();
        assert!(h_ad(&p, 0.0).max_coeff_diff(&p.h0) < 1e-15);
        assert!(h_ad(&p, 1.0).max_coeff_diff(&p.h_target) < 1e-14);
        let mid = h_ad(&p, 0.5);
        let avg = p.h0.combine(0.5, &p.h_target, 0.5);
        assert!(mid.max_coeff_diff(&avg) < 1e-14);
    }

    #[test]
    fn h_cd_vanishes_at_endpoints() {
        let p = toy_problem();
        assert!(h_cd(&p, 0.0).unwrap().max_abs() < 1e-12);
        assert!(h_cd(&p, 1.0).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn h_tot_endpoints() {
        let p = toy_problem();
        assert!(h_tot(&p, 0.0).unwrap().max_diff(&p.h0.matrix()) < 1e-12);
        assert!(h_tot(&p, 1.0).unwrap().max_diff(&p.h_target.matrix()) < 1e-12);
        for s in [0.1, 0.5, 0.9] {
            assert!(h_tot(&p, s).unwrap().is_hermitian(1e-10));
        }
    }

    #[test]
    fn landau_zener_closed_form() {
        // H_0 = Z_A, H = X_A: the field rotates in the xz plane by
        // φ = atan2(λ, 1-λ) and H_cd = (dφ/dt / 2) Y_A.
        let h0 = PauliSum::from_terms([(PauliString::ZI, 2.0)]);
        let h = PauliSum::from_terms([(PauliString::XI, 2.0)]);
        let t = 1.7;
        let p = StaProblem::new(
            h0,
            h,
            StateVector::basis(4, 2),
            t,
            1,
            vec![Slot::single(PauliString::YI)],
            0,
        )
        .unwrap();
        for s in [0.05, 0.3, 0.5, 0.77] {
            let l = lambda(s);
            let dl_dt = dlambda_ds(s) / t;
            let dphi_dt = dl_dt / ((1.0 - l).powi(2) + l * l);
            let want = PauliSum::from_terms([(PauliString::YI, dphi_dt)]).matrix();
            let got = h_cd(&p, s).unwrap();
            assert!(got.max_diff(&want) < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn h_cd_is_gauge_invariant() {
        let p = toy_problem();
        for s in [0.2, 0.5, 0.8] {
            let eig = herm_eig(&h_ad(&p, s).matrix()).unwrap();
            let dh = dh_ad_dt(&p, s);
            let delta = degeneracy_cutoff(&eig, p.degeneracy_rel);
            let base = counter_diabatic(&eig, &dh, delta);
            let rephased = Eigen {
                values: eig.values.clone(),
                vectors: eig
                    .vectors
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v.with_phase(0.9 + 1.3 * k as f64))
                    .collect(),
            };
            assert!(counter_diabatic(&rephased, &dh, delta).max_diff(&base) < 1e-10);
        }
    }

    #[test]
    fn projection_recovers_spanned_matrix() {
        let slots = vec![
            Slot::single(PauliString::YY),
            Slot::pair(PauliString::ZI, PauliString::IZ),
        ];
        let m = PauliSum::from_terms([
            (PauliString::II, 3.0),
            (PauliString::YY, 0.4),
            (PauliString::ZI, -1.2),
            (PauliString::IZ, -1.2),
        ])
        .matrix();
        let w = project_onto_terms(&m, &slots);
        assert_abs_diff_eq!(w[0], 0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], -1.2, epsilon = 1e-14);
        assert!(projection_residual(&m, &slots) < 1e-13);
    }

    #[test]
    fn projection_discards_orthogonal_terms() {
        let m = PauliString::XX.matrix();
        let slots = vec![Slot::single(PauliString::YY)];
        assert_eq!(project_onto_terms(&m, &slots), vec![0.0]);
        assert_abs_diff_eq!(projection_residual(&m, &slots), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn paired_slot_averages_and_repeated_slot_splits() {
        let m = PauliSum::from_terms([(PauliString::ZI, 1.0), (PauliString::IZ, 3.0)]).matrix();
        let w = project_onto_terms(&m, &[Slot::pair(PauliString::ZI, PauliString::IZ)]);
        assert_abs_diff_eq!(w[0], 2.0, epsilon = 1e-14);

        let m = PauliSum::from_terms([(PauliString::IZ, 1.0), (PauliString::ZX, 0.5)]).matrix();
        let slots = vec![
            Slot::single(PauliString::IZ),
            Slot::single(PauliString::ZX),
            Slot::single(PauliString::IZ),
        ];
        let w = project_onto_terms(&m, &slots);
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(w[2], 0.5, epsilon = 1e-14);
        assert!(projection_residual(&m, &slots) < 1e-13);
    }

    #[test]
    fn projection_of_h2_total_hamiltonian() {
        let p = toy_problem();
        let ht = h_tot(&p, 0.5).unwrap();
        let w = project_onto_terms(&ht, &p.slots);
        let full = pauli_decompose(&ht).unwrap();
        assert_abs_diff_eq!(w[0], full.coeff(PauliString::YY), epsilon = 1e-12);
        let mean = |a, b| 0.5 * (full.coeff(a) + full.coeff(b));
        assert_abs_diff_eq!(w[1], mean(PauliString::YI, PauliString::IY), epsilon = 1e-12);
        assert_abs_diff_eq!(w[2], mean(PauliString::XI, PauliString::IX), epsilon = 1e-12);
        assert_abs_diff_eq!(w[3], mean(PauliString::ZI, PauliString::IZ), epsilon = 1e-12);
        // The two-body part of the counter-diabatic term is not representable.
        let dropped: f64 = full
            .iter()
            .filter(|(p, _)| ![PauliString::II, PauliString::YY].contains(p) && p.weight() == 2)
            .map(|(_, w)| (w / 2.0).powi(2) * 4.0)
            .sum::<f64>()
            .sqrt();
        assert!(dropped > 0.0);
        assert_abs_diff_eq!(projection_residual(&ht, &p.slots), dropped, epsilon = 1e-10);
    }

    #[test]
    fn single_step_uses_target_coefficients() {
        let p = toy_problem().with_steps(1);
        let seq = angle_sequence(&p).unwrap();
        assert_eq!(seq.steps(), 1);
        let t = p.total_time;
        assert_abs_diff_eq!(seq.theta[0][0], 2.0 * 0.1557 * t, epsilon = 1e-12);
        assert_abs_diff_eq!(seq.theta[0][1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(seq.theta[0][2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(seq.theta[0][3], 2.0 * -1.055 * t, epsilon = 1e-12);
    }

    #[test]
    fn angles_scale_with_step_length() {
        let p = toy_problem().with_steps(2);
        let a2 = angle_sequence(&p).unwrap();
        let a4 = angle_sequence(&p.clone().with_steps(4)).unwrap();
        // s = 1/2 is row 0 of M=2 and row 1 of M=4.
        for j in 0..4 {
            assert_abs_diff_eq!(a2.theta[0][j], 2.0 * a4.theta[1][j], epsilon = 1e-12);
            assert_abs_diff_eq!(a2.theta[1][j], 2.0 * a4.theta[3][j], epsilon = 1e-12);
        }
        assert!(a4.theta.iter().all(|row| row[0].abs() > 0.0));
    }

    #[test]
    fn midpoint_sampling_shifts_evaluation_points() {
        assert_eq!(Sampling::RightEndpoint.point(1, 4), 0.25);
        assert_eq!(Sampling::Midpoint.point(1, 4), 0.125);
    }

    #[test]
    fn zero_steps_gives_empty_sequence() {
        let seq = angle_sequence(&toy_problem().with_steps(0)).unwrap();
        assert_eq!(seq.steps(), 0);
        assert_eq!(seq.width(), 4);
    }

    #[test]
    fn flatten_round_trip() {
        let seq = angle_sequence(&toy_problem()).unwrap();
        assert_eq!(seq.with_flat(&seq.flatten()), seq);
    }

    #[test]
    fn invalid_problems() {
        let p = toy_problem();
        let mut bad = p.clone();
        bad.total_time = 0.0;
        assert!(bad.validate().is_err());
        assert!(p.clone().with_slots(vec![]).validate().is_err());
        let mut bad = p.clone();
        bad.track = 4;
        assert!(bad.validate().is_err());
        assert!(continuous_sta_evolve(&p, 10).is_err());
    }

    #[test]
    fn continuous_evolution_reaches_ground_state() {
        let p = toy_problem();
        let target = herm_eig(&p.h_target.matrix()).unwrap().vectors[0].clone();
        let psi = continuous_sta_evolve(&p, 2000).unwrap();
        assert!(fidelity(&psi, &target) >= 1.0 - 1e-4);
    }

    #[test]
    fn continuous_evolution_is_trivial_without_drive() {
        let p = toy_problem();
        let mut same = p.clone();
        same.h_target = p.h0.clone();
        let psi = continuous_sta_evolve(&same, 200).unwrap();
        assert_abs_diff_eq!(fidelity(&psi, &p.initial), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn continuous_evolution_converges_at_second_order() {
        let p = toy_problem();
        let reference = continuous_sta_evolve(&p, 6400).unwrap();
        let err = |n| {
            let psi = continuous_sta_evolve(&p, n).unwrap();
            1.0 - fidelity(&psi, &reference)
        };
        // Infidelity is quadratic in the state error, so a second-order
        // integrator gives infidelity ~ n^-4; require at least n^-2.
        let (e1, e2) = (err(100), err(200));
        assert!(e2 < e1 / 4.0, "{e1:e} -> {e2:e}");
    }

    #[test]
    fn h_cd_stable_over_degeneracy_cutoffs() {
        // Degenerate spectrum: g Z_B -> g Z_B + g12 Z_A X_B.
        let h0 = PauliSum::from_terms([(PauliString::IZ, 0.2)]);
        let h = PauliSum::from_terms([(PauliString::IZ, 0.2), (PauliString::ZX, 0.9)]);
        let base = StaProblem::new(
            h0,
            h,
            StateVector::basis(4, 1),
            1.0,
            1,
            vec![Slot::single(PauliString::ZX)],
            0,
        )
        .unwrap();
        let a = h_cd(&base.clone().with_degeneracy_rel(1e-8), 0.4).unwrap();
        let b = h_cd(&base.clone().with_degeneracy_rel(1e-6), 0.4).unwrap();
        assert!(a.max_diff(&b) < 1e-12);
        assert!(a.max_abs().is_finite());
        // Intra-pair terms are excluded, so H_cd commutes with Z_A.
        let za = PauliString::ZI.matrix();
        assert!((&(&za * &a) - &(&a * &za)).max_abs() < 1e-12);
        let rho = DensityMatrix::pure(&continuous_sta_evolve(&base, 400).unwrap());
        assert!(rho.purity() > 1.0 - 1e-12);
    }
}
