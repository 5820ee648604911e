// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! The experiments: reference runs, the H₂ one-step landscape, the BHZ
//! band sweep and the step-count convergence scan.
//!
//! Sweep points run on a rayon pool; results come back in grid order and
//! are written by the caller.

use std::fs::File;
use std::path::Path;

use digista_core::circuits::{trotter_circuit, Preset};
use digista_core::models::{
    bhz_hamiltonian, bhz_initial, bhz_scaled_reference, h2_hamiltonian, h2_initial_excited,
    h2_initial_ground, h2_scaled_reference, load_h2_table, BhzParams, Branch, H2CoefficientTable,
    Wavevector,
};
use digista_core::qcore::{herm_eig, PauliSum, StateVector};
use digista_core::sim::{final_state, refine_for_problem, run_digitized_sta, RunRecord, TargetSpace};
use digista_core::sta::{angle_sequence, AngleSequence, StaProblem};
use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::CliError;

pub type Result<T> = std::result::Result<T, CliError>;

pub fn load_table(cfg: &Config) -> Result<H2CoefficientTable> {
    let path = &cfg.general.h2_table;
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(load_h2_table(f)?)
}

pub fn load_bhz(cfg: &Config) -> Result<BhzParams> {
    let path = &cfg.general.bhz_params;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let p: BhzParams =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    p.validate()?;
    Ok(p)
}

fn pool(cfg: &Config) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.general.workers)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

/// One digitized drive: raw angles, optional refinement, then the step-wise
/// run.
#[derive(Clone, Debug, Serialize)]
pub struct DrivenRun {
    pub label: String,
    pub preset: Preset,
    pub steps: usize,
    pub total_time: f64,
    pub refined: bool,
    pub noise: bool,
    /// Ideal final fidelity with the unrefined angles.
    pub fidelity_unrefined: f64,
    pub final_fidelity: f64,
    pub final_energy: f64,
    pub target_energy: f64,
    pub refine_evaluations: usize,
    pub angles: AngleSequence,
    pub record: RunRecord,
}

impl DrivenRun {
    pub fn final_state(&self) -> &StateVector {
        &self.record.last().state
    }
}

fn drive(cfg: &Config, label: String, p: &StaProblem, preset: Preset, seed_offset: u64) -> Result<DrivenRun> {
    let raw = angle_sequence(p)?;
    let target = TargetSpace::of(p)?;
    let fidelity_unrefined = target.fidelity(&final_state(p, &raw)?);
    let (angles, evaluations) = if cfg.general.refine {
        let r = refine_for_problem(p, &raw, &cfg.refine_options(seed_offset))?;
        (r.angles, r.evaluations)
    } else {
        (raw, 0)
    };
    let noise = cfg.general.noise.then_some(&cfg.noise);
    let record = run_digitized_sta(p, &angles, cfg.general.repreparation, noise)?;
    let last = record.last();
    Ok(DrivenRun {
        label,
        preset,
        steps: p.steps,
        total_time: p.total_time,
        refined: cfg.general.refine,
        noise: cfg.general.noise,
        fidelity_unrefined,
        final_fidelity: last.fidelity,
        final_energy: last.energy,
        target_energy: record.target_energy,
        refine_evaluations: evaluations,
        angles,
        record,
    })
}

fn problem(
    cfg: &Config,
    h0: PauliSum,
    h: PauliSum,
    psi0: StateVector,
    total_time: f64,
    steps: usize,
    preset: Preset,
    track: usize,
) -> Result<StaProblem> {
    Ok(StaProblem::new(h0, h, psi0, total_time, steps, preset.slots(), track)?
        .with_sampling(cfg.general.sampling))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum H2Level {
    Ground,
    Excited,
}

impl H2Level {
    pub fn experiment(self) -> &'static str {
        match self {
            H2Level::Ground => "h2-ground-ref",
            H2Level::Excited => "h2-excited-ref",
        }
    }

    fn preset(self) -> Preset {
        match self {
            H2Level::Ground => Preset::H2Ground,
            H2Level::Excited => Preset::H2Excited,
        }
    }

    fn track(self) -> usize {
        match self {
            H2Level::Ground => 0,
            H2Level::Excited => 1,
        }
    }
}

fn h2_problem(
    cfg: &Config,
    table: &H2CoefficientTable,
    level: H2Level,
    r: f64,
    total_time: f64,
    steps: usize,
) -> Result<StaProblem> {
    let row = table.get(r)?;
    let (h0, psi0) = match level {
        H2Level::Ground => h2_initial_ground(&row)?,
        H2Level::Excited => h2_initial_excited(&row)?,
    };
    problem(cfg, h0, h2_hamiltonian(&row), psi0, total_time, steps, level.preset(), level.track())
}

/// Multi-step drives at `h2_reference.r`, one per entry of `h2_reference.steps`.
pub fn h2_reference(cfg: &Config, level: H2Level) -> Result<Vec<DrivenRun>> {
    let table = load_table(cfg)?;
    let c = &cfg.h2_reference;
    pool(cfg)?.install(|| {
        c.steps
            .par_iter()
            .enumerate()
            .map(|(i, &m)| {
                let p = h2_problem(cfg, &table, level, c.r, c.total_time, m)?;
                let run = drive(cfg, format!("{}_M{m}", level.experiment()), &p, level.preset(), i as u64)?;
                info!("{} M={m}: F={:.6}", level.experiment(), run.final_fidelity);
                Ok(run)
            })
            .collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LandscapePoint {
    pub r: f64,
    /// Energies of the produced states.
    pub eps0: f64,
    pub eps1: f64,
    pub f0: f64,
    pub f1: f64,
    /// Ground-state one-step angles `(θ_YY, θ_Z)`.
    pub theta1: f64,
    pub theta2: f64,
    pub excited_theta1: f64,
    pub excited_theta2: f64,
    pub f0_unrefined: f64,
    pub f1_unrefined: f64,
    /// Exact spectrum of `H(R)`.
    pub exact: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Landscape {
    pub r0: f64,
    pub references: Vec<DrivenRun>,
    pub points: Vec<LandscapePoint>,
}

/// One-step drives from the `r0` reference states to every grid distance.
pub fn h2_landscape(cfg: &Config) -> Result<Landscape> {
    let table = load_table(cfg)?;
    let c = &cfg.h2_landscape;
    let reference_row = table.get(c.r0)?;
    if reference_row.g12 == 0.0 {
        return Err(digista_core::Error::ZeroCoupling.into());
    }
    let grid: Vec<f64> = c.grid().into_iter().filter(|r| table.contains(*r)).collect();
    if grid.is_empty() {
        return Err(CliError::Config("landscape grid has no rows in the coefficient table".into()));
    }

    let references = [H2Level::Ground, H2Level::Excited]
        .into_iter()
        .enumerate()
        .map(|(i, level)| {
            let p = h2_problem(cfg, &table, level, c.r0, c.reference_time, c.reference_steps)?;
            drive(cfg, format!("{}_reference", level.experiment()), &p, level.preset(), i as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    info!(
        "landscape references at R0={}: F0={:.6} F1={:.6}",
        c.r0, references[0].final_fidelity, references[1].final_fidelity
    );

    let points = pool(cfg)?.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(i, &r)| {
                let h0 = h2_scaled_reference(&table, r, c.r0)?;
                let h = h2_hamiltonian(&table.get(r)?);
                let exact = herm_eig(&h.matrix())?.values;
                let mut runs = Vec::with_capacity(2);
                for (level, reference) in [H2Level::Ground, H2Level::Excited].iter().zip(&references) {
                    let p = problem(
                        cfg,
                        h0.clone(),
                        h.clone(),
                        reference.final_state().clone(),
                        c.total_time,
                        1,
                        Preset::H2OneStep,
                        level.track(),
                    )?;
                    let seed = 100 + 2 * i as u64 + level.track() as u64;
                    runs.push(drive(cfg, format!("landscape_R{r}"), &p, Preset::H2OneStep, seed)?);
                }
                let (g, e) = (&runs[0], &runs[1]);
                Ok(LandscapePoint {
                    r,
                    eps0: g.final_energy,
                    eps1: e.final_energy,
                    f0: g.final_fidelity,
                    f1: e.final_fidelity,
                    theta1: g.angles.theta[0][0],
                    theta2: g.angles.theta[0][1],
                    excited_theta1: e.angles.theta[0][0],
                    excited_theta2: e.angles.theta[0][1],
                    f0_unrefined: g.fidelity_unrefined,
                    f1_unrefined: e.fidelity_unrefined,
                    exact,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Landscape {
        r0: c.r0,
        references,
        points,
    })
}

fn bhz_problem(
    cfg: &Config,
    params: &BhzParams,
    kx0: f64,
    branch: Branch,
) -> Result<StaProblem> {
    let c = &cfg.bhz;
    let (h0, psi0) = bhz_initial(kx0, params, branch)?;
    let h = bhz_hamiltonian(&Wavevector::on_linecut(kx0), params);
    problem(cfg, h0, h, psi0, c.reference_time, c.reference_steps, Preset::Bhz, branch.bhz_level())
}

/// Reference runs at `±kx0`, ordered `(+ground, +excited, -ground, -excited)`.
pub fn bhz_reference(cfg: &Config) -> Result<Vec<DrivenRun>> {
    let params = load_bhz(cfg)?;
    let kx0 = cfg.bhz.kx0;
    let cases: Vec<(f64, Branch)> = [kx0, -kx0]
        .into_iter()
        .flat_map(|k| [(k, Branch::Ground), (k, Branch::Excited)])
        .collect();
    pool(cfg)?.install(|| {
        cases
            .par_iter()
            .enumerate()
            .map(|(i, &(k, branch))| {
                let p = bhz_problem(cfg, &params, k, branch)?;
                let label = format!("bhz-ref_kx{k}_{}", branch_name(branch));
                let run = drive(cfg, label, &p, Preset::Bhz, i as u64)?;
                info!("{}: F={:.6}", run.label, run.final_fidelity);
                Ok(run)
            })
            .collect()
    })
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Ground => "ground",
        Branch::Excited => "excited",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BandSource {
    Sta,
    /// Exact diagonalization at the Dirac point, where `H_0` vanishes.
    Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct BandPoint {
    pub kx_a: f64,
    pub eps_valence: f64,
    pub eps_conduction: f64,
    pub f0: f64,
    pub f1: f64,
    pub source: BandSource,
    pub f0_unrefined: f64,
    pub f1_unrefined: f64,
    pub exact: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bands {
    pub references: Vec<DrivenRun>,
    pub points: Vec<BandPoint>,
}

/// One-step sweep along the `k_y = 0` linecut from the `±kx0` references.
pub fn bhz_bands(cfg: &Config) -> Result<Bands> {
    let params = load_bhz(cfg)?;
    let references = bhz_reference(cfg)?;
    let c = &cfg.bhz;
    let grid = c.grid();
    let points = pool(cfg)?.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(i, &kx)| {
                let h = bhz_hamiltonian(&Wavevector::on_linecut(kx), &params);
                let exact = herm_eig(&h.matrix())?.values;
                if kx == 0.0 {
                    return Ok(BandPoint {
                        kx_a: kx,
                        eps_valence: exact[0],
                        eps_conduction: exact[2],
                        f0: 1.0,
                        f1: 1.0,
                        source: BandSource::Exact,
                        f0_unrefined: 1.0,
                        f1_unrefined: 1.0,
                        exact,
                    });
                }
                let (kx0, refs) = if kx < 0.0 {
                    (-c.kx0, &references[2..4])
                } else {
                    (c.kx0, &references[0..2])
                };
                let h0 = bhz_scaled_reference(kx, kx0, &params)?;
                let mut runs = Vec::with_capacity(2);
                for (branch, reference) in [Branch::Ground, Branch::Excited].into_iter().zip(refs) {
                    let p = problem(
                        cfg,
                        h0.clone(),
                        h.clone(),
                        reference.final_state().clone(),
                        c.total_time,
                        1,
                        Preset::BhzOneStep,
                        branch.bhz_level(),
                    )?;
                    let seed = 1000 + 2 * i as u64 + (branch == Branch::Excited) as u64;
                    runs.push(drive(cfg, format!("bands_kx{kx}"), &p, Preset::BhzOneStep, seed)?);
                }
                Ok(BandPoint {
                    kx_a: kx,
                    eps_valence: runs[0].final_energy,
                    eps_conduction: runs[1].final_energy,
                    f0: runs[0].final_fidelity,
                    f1: runs[1].final_fidelity,
                    source: BandSource::Sta,
                    f0_unrefined: runs[0].fidelity_unrefined,
                    f1_unrefined: runs[1].fidelity_unrefined,
                    exact,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Bands { references, points })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceCurve {
    pub preset: Preset,
    pub total_time: f64,
    pub refined: bool,
    pub threshold: f64,
    /// `(M, F_M)`.
    pub points: Vec<(usize, f64)>,
    /// Smallest `M` with `F_M ≥ threshold`.
    pub m_star: Option<usize>,
}

impl ConvergenceCurve {
    pub fn fidelity_at(&self, m: usize) -> Option<f64> {
        self.points.iter().find(|(k, _)| *k == m).map(|(_, f)| *f)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Convergence {
    pub r: f64,
    pub restricted: ConvergenceCurve,
    /// Same scan with all 15 generators and `sta_convergence.full_time`.
    pub full: Option<ConvergenceCurve>,
}

/// Direct multi-step drives at `sta_convergence.r` for `M = 1..=steps_max`.
pub fn sta_convergence(cfg: &Config) -> Result<Convergence> {
    let table = load_table(cfg)?;
    let c = &cfg.sta_convergence;
    let preset: Preset = c
        .preset
        .parse()
        .map_err(|_| CliError::Config(format!("unknown preset {:?}", c.preset)))?;
    let row = table.get(c.r)?;
    let (h0, psi0) = h2_initial_ground(&row)?;
    let h = h2_hamiltonian(&row);
    let pool = pool(cfg)?;

    let scan = |preset: Preset, total_time: f64, refine: bool| -> Result<ConvergenceCurve> {
        let mut local = cfg.clone();
        local.general.refine = refine;
        local.general.noise = false;
        let points = pool.install(|| {
            (1..=c.steps_max)
                .into_par_iter()
                .map(|m| {
                    let p = problem(&local, h0.clone(), h.clone(), psi0.clone(), total_time, m, preset, 0)?;
                    let run = drive(&local, format!("convergence_M{m}"), &p, preset, m as u64)?;
                    Ok((m, run.final_fidelity))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let m_star = points.iter().find(|(_, f)| *f >= c.threshold).map(|(m, _)| *m);
        info!("convergence {preset} T={total_time}: M*={m_star:?}");
        Ok(ConvergenceCurve {
            preset,
            total_time,
            refined: refine,
            threshold: c.threshold,
            points,
            m_star,
        })
    };

    let restricted = scan(preset, c.total_time, c.refine)?;
    let full = if c.full_time > 0.0 {
        Some(scan(Preset::Full, c.full_time, c.refine)?)
    } else {
        None
    };
    Ok(Convergence {
        r: c.r,
        restricted,
        full,
    })
}

/// Gate-level text dump of a run's circuit.
pub fn circuit_text(run: &DrivenRun) -> Result<String> {
    Ok(trotter_circuit(&run.angles, run.preset)?.to_string())
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}
