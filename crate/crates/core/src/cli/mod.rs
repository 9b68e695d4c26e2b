//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical or assertion failure.

mod input;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::error::Error;
use crate::sm_curves::{build_fs_table, DEFAULT_POINTS, MIN_POINTS};
use crate::spin_core::{build_hamiltonian, ground_state, SpinLength};
use crate::split_model::equivalence_check;
use crate::witnesses::{
    build_report, depth_bound_fisher, depth_bound_state_independent, mode_sep_threshold,
    sm_depth_bound_worst_split, MAX_ENUMERATED_MODES,
};

pub use input::{parse_input, InputFile, InputRecord, ModeRecord, ParsedRecord};
pub use output::csv_real;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const MAX_TWO_S: u32 = 100_000;
const MAX_TABLE_MODES: usize = 10_000;
const MAX_DEPTH_PARTICLES: u64 = 1_000_000;
const GRID_MAX_PARTICLES: u64 = 2_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::Assertion(_) | Error::DegenerateInput(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spin-witness",
    version,
    about = "Entanglement, mode-inseparability and steering witnesses from spin moments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every criterion for each record of a JSON input file
    Witness(WitnessArgs),
    /// Tabulate the minimal-variance curve F_S as CSV
    FsCurve(FsCurveArgs),
    /// Emit threshold tables for mode inseparability or entanglement depth
    Bounds(BoundsArgs),
    /// Split a squeezed ground state into modes and check the witness identities
    SplitCheck(SplitCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    /// JSON file with a top-level "records" array
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FsCurveArgs {
    /// Twice the spin length, 2S
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_TWO_S as i64))]
    spin: u32,
    /// Number of samples in the table
    #[arg(long, default_value_t = DEFAULT_POINTS as u64,
          value_parser = clap::value_parser!(u64).range(MIN_POINTS as u64..=1_000_000))]
    points: u64,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("table").required(true).args(["modes", "depth"]))]
struct BoundsArgs {
    /// Mode count M: rows M,k,threshold for k = 2..M
    #[arg(long)]
    modes: Option<usize>,
    /// Particle number N: rows p,fisher,tight for p = 1..pmax
    #[arg(long, requires = "pmax")]
    depth: Option<u64>,
    /// Largest block size p to tabulate
    #[arg(long, requires = "depth")]
    pmax: Option<u64>,
    /// Add the polarisation-dependent bound on a fixed x grid
    #[arg(long, requires = "depth")]
    polarization_grid: bool,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SplitCheckArgs {
    /// Twice the spin length of the parent, 2S = N
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=MAX_TWO_S as i64))]
    spin: u32,
    /// Coupling λ of the parent Hamiltonian λS_x + S_z²
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Number of modes M for a symmetric split
    #[arg(long, default_value_t = 2)]
    modes: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            e.print().ok();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("spin-witness: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Witness(a) => cmd_witness(&a),
        Command::FsCurve(a) => cmd_fs_curve(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::SplitCheck(a) => cmd_split_check(&a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
        }
    }
}

fn cmd_witness(a: &WitnessArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", a.input.display())))?;
    let records = parse_input(&text)?;
    let reports: Vec<_> = records
        .par_iter()
        .map(|r| build_report(&r.collective, r.modes.as_ref(), r.mode_count))
        .collect();

    let rendered = match a.format {
        Format::Json => {
            let body: Vec<_> = records
                .iter()
                .zip(&reports)
                .map(|(rec, rep)| output::report_json(&rec.raw, rep))
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "records": body }))
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => records
            .iter()
            .zip(&reports)
            .enumerate()
            .map(|(i, (rec, rep))| output::report_text(i + 1, rec.label.as_deref(), rep))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(a.out.as_deref(), &rendered)
}

fn cmd_fs_curve(a: &FsCurveArgs) -> Result<(), CliError> {
    let spin = SpinLength::new(a.spin)?;
    let table =
        build_fs_table(spin, a.points as usize).map_err(|e| CliError::Numerical(e.to_string()))?;
    let rows: Vec<Vec<String>> = table
        .samples()
        .iter()
        .map(|s| vec![csv_real(s.lambda), csv_real(s.x), csv_real(s.f)])
        .collect();
    emit(a.out.as_deref(), &output::csv(&["lambda", "x", "f"], &rows))
}

/// Polarisations of the optional grid: `1e-3` followed by `0.025, 0.05, …, 1`.
pub fn polarization_grid() -> Vec<f64> {
    std::iter::once(1e-3)
        .chain((1..=40).map(|i| i as f64 * 0.025))
        .collect()
}

fn cmd_bounds(a: &BoundsArgs) -> Result<(), CliError> {
    if let Some(m) = a.modes {
        if !(2..=MAX_TABLE_MODES).contains(&m) {
            return Err(CliError::Input(format!(
                "--modes must lie in [2, {MAX_TABLE_MODES}], got {m}"
            )));
        }
        let rows = (2..=m)
            .map(|k| {
                Ok(vec![
                    m.to_string(),
                    k.to_string(),
                    csv_real(mode_sep_threshold(m, k)?),
                ])
            })
            .collect::<Result<Vec<_>, Error>>()?;
        return emit(
            a.out.as_deref(),
            &output::csv(&["M", "k", "threshold"], &rows),
        );
    }

    let (n, pmax) = (a.depth.unwrap_or(0), a.pmax.unwrap_or(0));
    if !(1..=MAX_DEPTH_PARTICLES).contains(&n) || pmax < 1 || pmax > n {
        return Err(CliError::Input(format!(
            "need 1 ≤ --pmax ≤ --depth ≤ {MAX_DEPTH_PARTICLES}, got depth {n}, pmax {pmax}"
        )));
    }
    if a.polarization_grid && n > GRID_MAX_PARTICLES {
        return Err(CliError::Input(format!(
            "--polarization-grid supports --depth up to {GRID_MAX_PARTICLES}"
        )));
    }
    let base = |p: u64| -> Result<[String; 3], Error> {
        Ok([
            p.to_string(),
            csv_real(depth_bound_fisher(p)?),
            csv_real(depth_bound_state_independent(n, p)?),
        ])
    };
    if !a.polarization_grid {
        let rows = (1..=pmax)
            .map(|p| base(p).map(|r| r.to_vec()))
            .collect::<Result<Vec<_>, Error>>()?;
        return emit(
            a.out.as_deref(),
            &output::csv(&["p", "fisher", "tight"], &rows),
        );
    }

    let grid = polarization_grid();
    let cells: Vec<(u64, f64)> = (1..=pmax)
        .flat_map(|p| grid.iter().map(move |&x| (p, x)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(p, x)| -> Result<Vec<String>, Error> {
            let mean_sx = x * n as f64 / 2.0;
            let var = sm_depth_bound_worst_split(n, p, mean_sx)?;
            let xi2 = n as f64 * var / (mean_sx * mean_sx);
            let mut row = base(p)?.to_vec();
            row.push(csv_real(x));
            row.push(csv_real(xi2));
            Ok(row)
        })
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    emit(
        a.out.as_deref(),
        &output::csv(&["p", "fisher", "tight", "x", "sm_bound"], &rows),
    )
}

fn cmd_split_check(a: &SplitCheckArgs) -> Result<(), CliError> {
    if !a.lambda.is_finite() {
        return Err(CliError::Input("--lambda must be finite".into()));
    }
    if !(2..=MAX_ENUMERATED_MODES).contains(&a.modes) {
        return Err(CliError::Input(format!(
            "--modes must lie in [2, {MAX_ENUMERATED_MODES}], got {}",
            a.modes
        )));
    }
    let spin = SpinLength::new(a.spin)?;
    let (_, parent) = ground_state(&build_hamiltonian(a.lambda, spin)?)?;
    let report = equivalence_check(&parent, a.modes).map_err(|e| match e {
        Error::DegenerateInput(_) => {
            CliError::Numerical(format!("unpolarized parent at lambda = {}: {e}", a.lambda))
        }
        other => other.into(),
    })?;
    let rendered = match a.format {
        Format::Text => output::equivalence_text(&report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&output::equivalence_json(&report))
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    emit(None, &rendered)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Numerical(
            "equivalence assertions failed beyond tolerance".into(),
        ))
    }
}
