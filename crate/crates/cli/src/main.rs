// Copyright 2026 The digista Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use digista::experiments::{self, H2Level};
use digista::output::{self, describe_curve};
use digista::plot::{render_csv, PlotKind};
use digista::{CliError, Config};

#[derive(Parser)]
#[command(name = "digista", version, about = "Digitized shortcut-to-adiabaticity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Enable the device noise model.
    #[arg(long)]
    noise: bool,
    /// Polish angles with the simplex refiner.
    #[arg(long, conflicts_with = "no_refine")]
    refine: bool,
    #[arg(long)]
    no_refine: bool,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Override a config entry, e.g. `--set bhz.grid_points=64`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn config(&self) -> Result<Config, CliError> {
        let mut overrides = Vec::new();
        if let Some(out) = &self.out {
            overrides.push(format!("general.out={:?}", out.to_string_lossy()));
        }
        if self.noise {
            overrides.push("general.noise=true".into());
        }
        if self.refine {
            overrides.push("general.refine=true".into());
        }
        if self.no_refine {
            overrides.push("general.refine=false".into());
        }
        if let Some(w) = self.workers {
            overrides.push(format!("general.workers={w}"));
        }
        if let Some(s) = self.seed {
            overrides.push(format!("general.seed={s}"));
        }
        overrides.extend(self.set.iter().cloned());
        Config::load(self.config.as_deref(), &overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Multi-step drive to the H2 ground state.
    H2GroundRef(Common),
    /// Multi-step drive to the first excited H2 state.
    H2ExcitedRef(Common),
    /// One-step drives over the internuclear distance grid.
    H2Landscape(Common),
    /// BHZ reference drives at both reference wavevectors.
    BhzRef(Common),
    /// BHZ valence and conduction bands along the linecut.
    BhzBands(Common),
    /// Final fidelity against the number of Trotter steps.
    StaConvergence(Common),
    /// Render an experiment CSV as SVG.
    Plot {
        csv: PathBuf,
        /// fidelity-vs-step, energy-vs-R or bands.
        #[arg(long)]
        kind: String,
        /// Output file (default: the CSV path with an .svg extension).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::H2GroundRef(c) => reference(&c.config()?, H2Level::Ground),
        Command::H2ExcitedRef(c) => reference(&c.config()?, H2Level::Excited),
        Command::H2Landscape(c) => {
            let cfg = c.config()?;
            let l = experiments::h2_landscape(&cfg)?;
            for p in &l.points {
                println!("R={:.2} F0={:.6} F1={:.6} eps0={:.6} eps1={:.6}", p.r, p.f0, p.f1, p.eps0, p.eps1);
            }
            output::write_landscape(&cfg.general.out, &l)
        }
        Command::BhzRef(c) => {
            let cfg = c.config()?;
            let runs = experiments::bhz_reference(&cfg)?;
            print_runs(&runs);
            output::write_runs(&cfg.general.out, "bhz-ref", &runs)
        }
        Command::BhzBands(c) => {
            let cfg = c.config()?;
            let b = experiments::bhz_bands(&cfg)?;
            print_runs(&b.references);
            let worst = |f: fn(&experiments::BandPoint) -> f64| b.points.iter().map(f).fold(1.0, f64::min);
            println!("band sweep: min F0={:.6} min F1={:.6}", worst(|p| p.f0), worst(|p| p.f1));
            output::write_bands(&cfg.general.out, &b)
        }
        Command::StaConvergence(c) => {
            let cfg = c.config()?;
            let conv = experiments::sta_convergence(&cfg)?;
            for curve in std::iter::once(&conv.restricted).chain(conv.full.as_ref()) {
                println!("{}", describe_curve(curve));
                for (m, f) in &curve.points {
                    println!("  M={m:3} F={f:.6}");
                }
            }
            output::write_convergence(&cfg.general.out, &conv)
        }
        Command::Plot { csv, kind, out } => {
            let kind: PlotKind = kind.parse()?;
            let text = fs::read_to_string(&csv).map_err(|e| CliError::io(&csv, e))?;
            let svg = render_csv(&text, kind)?;
            let out = out.unwrap_or_else(|| csv.with_extension("svg"));
            fs::write(&out, svg).map_err(|e| CliError::io(&out, e))?;
            Ok(vec![out])
        }
    }
}

fn reference(cfg: &Config, level: H2Level) -> Result<Vec<PathBuf>, CliError> {
    let runs = experiments::h2_reference(cfg, level)?;
    print_runs(&runs);
    output::write_runs(&cfg.general.out, level.experiment(), &runs)
}

fn print_runs(runs: &[experiments::DrivenRun]) {
    for r in runs {
        println!(
            "{}: F={:.6} (unrefined {:.6}) E={:.6} target={:.6}",
            r.label, r.final_fidelity, r.fidelity_unrefined, r.final_energy, r.target_energy
        );
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(files) => {
            for f in files {
                log::info!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
