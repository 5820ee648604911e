// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimal deterministic SVG line plots of the experiment CSVs.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    FidelityVsStep,
    EnergyVsR,
    Bands,
}

impl PlotKind {
    /// Accepted x-column names and series columns.
    fn columns(self) -> (&'static [&'static str], &'static [&'static [&'static str]]) {
        match self {
            PlotKind::FidelityVsStep => (&["m", "M"], &[&["F", "F_final"]]),
            PlotKind::EnergyVsR => (&["R"], &[&["eps0"], &["eps1"]]),
            PlotKind::Bands => (&["kx_a"], &[&["eps_valence"], &["eps_conduction"]]),
        }
    }

    fn labels(self) -> (&'static str, &'static str, &'static str) {
        match self {
            PlotKind::FidelityVsStep => ("Fidelity", "step", "F"),
            PlotKind::EnergyVsR => ("Energies", "R (angstrom)", "energy (hartree)"),
            PlotKind::Bands => ("Bands", "kx a", "energy (eV)"),
        }
    }
}

impl FromStr for PlotKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "fidelity-vs-step" => Ok(PlotKind::FidelityVsStep),
            "energy-vs-R" | "energy-vs-r" => Ok(PlotKind::EnergyVsR),
            "bands" => Ok(PlotKind::Bands),
            _ => Err(CliError::Config(format!("unknown plot kind {s:?}"))),
        }
    }
}

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

fn read_series(text: &str, kind: PlotKind) -> Result<Vec<Series>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Config(format!("plot input: {e}")))?
        .clone();
    let find = |names: &[&str]| headers.iter().position(|h| names.contains(&h.trim()));
    let (x_names, series_names) = kind.columns();
    let missing = |names: &[&str]| CliError::Config(format!("plot input lacks column {}", names.join("|")));
    let x_col = find(x_names).ok_or_else(|| missing(x_names))?;
    let cols = series_names
        .iter()
        .map(|names| find(names).ok_or_else(|| missing(names)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut series: Vec<Series> = cols
        .iter()
        .map(|&c| Series {
            name: headers[c].to_string(),
            points: Vec::new(),
        })
        .collect();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(format!("plot input: {e}")))?;
        let num = |c: usize| -> Result<f64, CliError> {
            record
                .get(c)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| CliError::Config(format!("plot input row {}: bad number", line + 2)))
        };
        let x = num(x_col)?;
        for (s, &c) in series.iter_mut().zip(&cols) {
            s.points.push((x, num(c)?));
        }
    }
    Ok(series)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = 0.5 * lo.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

/// SVG for the CSV `text`; identical input gives identical bytes.
pub fn render_csv(text: &str, kind: PlotKind) -> Result<String, CliError> {
    let series = read_series(text, kind)?;
    let (x_lo, x_hi) = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;
    let (title, x_label, y_label) = kind.labels();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        LEFT + plot_w / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x_lo + t * (x_hi - x_lo), y_lo + t * (y_hi - y_lo));
        let (px, py) = (sx(xv), sy(yv));
        let base = TOP + plot_h;
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{base}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            base + 5.0,
            base + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        for p in &pts {
            let (x, y) = p.split_once(',').expect("formatted pair");
            let _ = writeln!(svg, r#"<circle cx="{x}" cy="{y}" r="2" fill="{color}"/>"#);
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            s.name
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}
