// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV, JSON, circuit and SVG writers. Everything lands under one output
//! directory; paths of the written files are returned for logging.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;
use crate::experiments::{circuit_text, ensure_dir, Bands, Convergence, ConvergenceCurve, DrivenRun, Landscape, Result};
use crate::plot::{render_csv, PlotKind};

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing {}: {e}", path.display())))?;
    write_text(path, &(text + "\n"))
}

fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

fn plot(csv: &Path, kind: PlotKind) -> Result<PathBuf> {
    let svg = csv.with_extension("svg");
    let text = fs::read_to_string(csv).map_err(|e| CliError::io(csv, e))?;
    write_text(&svg, &render_csv(&text, kind)?)?;
    Ok(svg)
}

#[derive(Serialize)]
struct RunSummary<'a> {
    label: &'a str,
    steps: usize,
    total_time: f64,
    refined: bool,
    noise: bool,
    final_fidelity: f64,
    fidelity_unrefined: f64,
    final_energy: f64,
    target_energy: f64,
}

impl<'a> From<&'a DrivenRun> for RunSummary<'a> {
    fn from(r: &'a DrivenRun) -> Self {
        RunSummary {
            label: &r.label,
            steps: r.steps,
            total_time: r.total_time,
            refined: r.refined,
            noise: r.noise,
            final_fidelity: r.final_fidelity,
            fidelity_unrefined: r.fidelity_unrefined,
            final_energy: r.final_energy,
            target_energy: r.target_energy,
        }
    }
}

/// Per run: `<label>.csv` (`m,F,E`), `<label>.json`, `<label>.circuit.txt`
/// and `<label>.svg`; plus `<experiment>_summary.json`.
pub fn write_runs(out: &Path, experiment: &str, runs: &[DrivenRun]) -> Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let mut written = Vec::new();
    for run in runs {
        let csv = out.join(format!("{}.csv", run.label));
        write_text(&csv, &run.record.to_csv())?;
        let json = out.join(format!("{}.json", run.label));
        write_json(&json, run)?;
        let circuit = out.join(format!("{}.circuit.txt", run.label));
        write_text(&circuit, &circuit_text(run)?)?;
        written.push(plot(&csv, PlotKind::FidelityVsStep)?);
        written.extend([csv, json, circuit]);
    }
    let summary = out.join(format!("{experiment}_summary.json"));
    let rows: Vec<RunSummary> = runs.iter().map(RunSummary::from).collect();
    write_json(&summary, &rows)?;
    written.push(summary);
    Ok(written)
}

/// `h2-landscape.csv` (`R,eps0,eps1,F0,F1,theta1,theta2`), JSON with the
/// reference runs and extra columns, and an energy plot.
pub fn write_landscape(out: &Path, l: &Landscape) -> Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let csv = out.join("h2-landscape.csv");
    let rows: Vec<_> = l
        .points
        .iter()
        .map(|p| (p.r, p.eps0, p.eps1, p.f0, p.f1, p.theta1, p.theta2))
        .collect();
    write_csv(&csv, &["R", "eps0", "eps1", "F0", "F1", "theta1", "theta2"], &rows)?;
    let json = out.join("h2-landscape.json");
    write_json(&json, l)?;
    let mut written = write_runs(out, "h2-landscape_references", &l.references)?;
    written.push(plot(&csv, PlotKind::EnergyVsR)?);
    written.extend([csv, json]);
    Ok(written)
}

/// `bhz-bands.csv` (`kx_a,eps_valence,eps_conduction,F0,F1,source`), JSON and
/// a band plot.
pub fn write_bands(out: &Path, b: &Bands) -> Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let csv = out.join("bhz-bands.csv");
    let rows: Vec<_> = b
        .points
        .iter()
        .map(|p| (p.kx_a, p.eps_valence, p.eps_conduction, p.f0, p.f1, p.source))
        .collect();
    write_csv(
        &csv,
        &["kx_a", "eps_valence", "eps_conduction", "F0", "F1", "source"],
        &rows,
    )?;
    let json = out.join("bhz-bands.json");
    write_json(&json, b)?;
    let mut written = write_runs(out, "bhz-ref", &b.references)?;
    written.push(plot(&csv, PlotKind::Bands)?);
    written.extend([csv, json]);
    Ok(written)
}

fn write_curve(path: &Path, c: &ConvergenceCurve) -> Result<PathBuf> {
    write_csv(path, &["M", "F_final"], &c.points)?;
    plot(path, PlotKind::FidelityVsStep)
}

/// `sta-convergence.csv` (`M,F_final`), the all-generator companion curve
/// and a JSON summary with `M*`.
pub fn write_convergence(out: &Path, c: &Convergence) -> Result<Vec<PathBuf>> {
    ensure_dir(out)?;
    let csv = out.join("sta-convergence.csv");
    let mut written = vec![write_curve(&csv, &c.restricted)?, csv];
    if let Some(full) = &c.full {
        let csv = out.join("sta-convergence_full.csv");
        written.push(write_curve(&csv, full)?);
        written.push(csv);
    }
    let json = out.join("sta-convergence.json");
    write_json(&json, c)?;
    written.push(json);
    Ok(written)
}

/// Human-readable `M*` line.
pub fn describe_curve(c: &ConvergenceCurve) -> String {
    match c.m_star {
        Some(m) => format!(
            "{} T={}: F >= {} first reached at M* = {m}",
            c.preset, c.total_time, c.threshold
        ),
        None => {
            let best = c.points.iter().map(|(_, f)| *f).fold(0.0, f64::max);
            format!(
                "{} T={}: F >= {} not reached for M <= {} (best F = {best:.6})",
                c.preset,
                c.total_time,
                c.threshold,
                c.points.len()
            )
        }
    }
}
