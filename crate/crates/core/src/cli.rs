//! Command-line front end.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 usage or domain error,
//! 3 reference mismatch in `table3`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::molecules::{self, MoleculeRecord};
use crate::oracle::{self, Equation, MassMode, OracleConfig, TermMode};
use crate::potential::EnergyOrigin;
use crate::reference::ENERGY_CELLS;
use crate::spectrum::special::{SpecialCase, SpecialCaseId};
use crate::spectrum::{self, bound_state_count, energy_s_wave, Diatomic, QuantumState, SpectrumError};
use crate::units::{AMU_TO_EV_PER_C2, HBAR_C, WAVENUMBER_TO_EV};
use crate::wavefunction::RadialWavefunction;

pub const ENV_MOLECULE_PATH: &str = "MORSE_MOLECULE_PATH";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{mismatches} reference cell(s) outside one unit of the printed digit")]
    Golden { output: String, mismatches: usize },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Golden { .. } => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

/// Spectrum errors from bad parameters are usage errors; the rest are numeric.
fn spectrum_error(e: SpectrumError) -> CliError {
    match e {
        SpectrumError::Potential(_) | SpectrumError::Unit(_) | SpectrumError::Molecule(_) | SpectrumError::DeltaOutOfRange(_) => {
            usage(e)
        }
        SpectrumError::NoRealSolution { .. } | SpectrumError::Threshold { .. } => numeric(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum V3Choice {
    /// `V3 = 0`, the convention of the tabulated spectra.
    Zero,
    /// `V3 = q^2 D_e`.
    Well,
}

impl V3Choice {
    fn origin(self) -> EnergyOrigin {
        match self {
            V3Choice::Zero => EnergyOrigin::SeparatedAtoms,
            V3Choice::Well => EnergyOrigin::Bracket,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Pekeris,
}

impl From<ModeArg> for TermMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => TermMode::Exact,
            ModeArg::Pekeris => TermMode::Pekeris,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MassArg {
    Constant,
    Pdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationArg {
    Radial,
    Reduced,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Molecule file (blank-line separated blocks of key = value).
    #[arg(long, global = true, env = ENV_MOLECULE_PATH)]
    pub molecule_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Significant digits for printed numbers.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=17))]
    pub digits: u32,
    /// Constant term of the potential.
    #[arg(long, global = true, value_enum, default_value_t = V3Choice::Zero)]
    pub v3: V3Choice,
    /// Add the derived potential and mass constants to the header.
    #[arg(long, global = true)]
    pub show_constants: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long, default_value = "H2")]
    pub molecule: String,
    /// Potential deformation q.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub q: f64,
    /// Mass deformation delta in [0, 1).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Energies E_nl (eV). Columns: molecule, n, l, E_eV, minus_E, eps, xi, bound, variant.
    Spectrum {
        #[command(flatten)]
        system: SystemArgs,
        /// Vibrational quantum numbers: list `0,5,7` or range `0-7`.
        #[arg(long, default_value = "0")]
        n: String,
        /// Angular momenta, same syntax as `--n`.
        #[arg(long, default_value = "0")]
        l: String,
    },
    /// Reference table reproduction (always V3 = 0, q = 1, delta = 0).
    /// Columns: molecule, n, l, minus_E, printed, reference, deviation_units, status.
    Table3,
    /// s-wave bound-state counts and final-level energies.
    /// Columns: molecule, n, E_eV, eps, bound, kind (level or n_max).
    Nmax {
        /// Comma-separated molecules (default: the four built-ins).
        #[arg(long)]
        molecule: Option<String>,
        /// Also list the full s-wave ladder.
        #[arg(long)]
        full: bool,
    },
    /// Normalized radial function on a uniform grid. Columns: r_A, u, psi.
    Wavefunction {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Closed form against the finite-difference oracle.
    /// Columns: n, l, closed_form_eV, oracle_eV, abs_dev, rel_dev, error_estimate, flagged.
    OracleCompare {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// States to compare (default: every bound closed-form state).
        #[arg(long)]
        n: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Pekeris)]
        centrifugal: ModeArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Pekeris)]
        inverse_r: ModeArg,
        /// Mass model (default: pdm when delta > 0).
        #[arg(long, value_enum)]
        mass: Option<MassArg>,
        /// Discretized equation (default: reduced for pdm, radial otherwise).
        #[arg(long, value_enum)]
        equation: Option<EquationArg>,
        /// Base grid intervals.
        #[arg(long, default_value_t = 4000)]
        grid: usize,
        /// Richardson extrapolation from the doubled grid.
        #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
        richardson: bool,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
    },
    /// Closed-form spectra of the special parameterizations.
    /// Columns: n, E_re_eV, E_im_eV, exponent_re, exponent_im, real, bound.
    SpecialCase {
        #[arg(long = "case")]
        case: SpecialCaseId,
        /// E0 = hbar^2 / (2 mu r_e^2) in eV; taken from --molecule when absent.
        #[arg(long)]
        e0: Option<f64>,
        #[arg(long)]
        molecule: Option<String>,
        /// Strength D (eV).
        #[arg(long)]
        d: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long)]
        d_hat: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value = "0-4")]
        n: String,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qmorse", version, about = "Rovibrational spectra in the q-deformed Morse potential")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
    Missing,
}

/// Tabular output with a parameter header.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub parameters: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

/// `x` with `digits` significant digits; scientific outside `[1e-4, 1e15)`.
pub fn format_sig(x: f64, digits: u32) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let d = digits.max(1) as usize;
    let sci = format!("{:.*e}", d - 1, x);
    let exp: i32 = sci.split_once('e').map_or(0, |(_, e)| e.parse().unwrap_or(0));
    if (-4..15).contains(&exp) {
        let decimals = (d as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

impl Report {
    fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.push((key.to_string(), value.into()));
    }

    fn header(&self) -> Vec<(String, Value)> {
        let mut h = vec![("command".to_string(), Value::from(self.command.clone()))];
        h.extend(self.parameters.iter().cloned());
        h.push(("amu_eV".into(), json!(AMU_TO_EV_PER_C2)));
        h.push(("wavenumber_eV".into(), json!(WAVENUMBER_TO_EV)));
        h.push(("hbar_c_eV_A".into(), json!(HBAR_C)));
        h
    }

    fn text_cell(c: &Cell, digits: u32) -> String {
        match c {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_sig(*v, digits),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn header_value(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }

    pub fn render(&self, format: Format, digits: u32) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                for (k, v) in self.header() {
                    let _ = writeln!(out, "# {k}={}", Self::header_value(&v));
                }
                for n in &self.notes {
                    let _ = writeln!(out, "# note: {n}");
                }
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| {
                            let s = Self::text_cell(c, digits);
                            if s.contains(',') || s.contains('"') {
                                format!("\"{}\"", s.replace('"', "\"\""))
                            } else {
                                s
                            }
                        })
                        .collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            Format::Json => {
                let mut header = Map::new();
                for (k, v) in self.header() {
                    header.insert(k, v);
                }
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut m = Map::new();
                        for (col, c) in self.columns.iter().zip(row) {
                            let v = match c {
                                Cell::Int(v) => json!(v),
                                Cell::Num(v) => format_sig(*v, digits)
                                    .parse::<f64>()
                                    .ok()
                                    .and_then(serde_json::Number::from_f64)
                                    .map_or(Value::Null, Value::Number),
                                Cell::Text(s) => json!(s),
                                Cell::Bool(b) => json!(b),
                                Cell::Missing => Value::Null,
                            };
                            m.insert(col.clone(), v);
                        }
                        Value::Object(m)
                    })
                    .collect();
                let doc = json!({ "header": header, "columns": self.columns, "rows": rows, "notes": self.notes });
                out = serde_json::to_string_pretty(&doc).expect("json");
                out.push('\n');
            }
            Format::Text => {
                for (k, v) in self.header() {
                    let _ = writeln!(out, "# {k}: {}", Self::header_value(&v));
                }
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|c| Self::text_cell(c, digits)).collect())
                    .collect();
                let widths: Vec<usize> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                    .collect();
                let line = |items: &[String]| {
                    items
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let _ = writeln!(out, "{}", line(&self.columns));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r));
                }
                for n in &self.notes {
                    let _ = writeln!(out, "{n}");
                }
            }
        }
        out
    }
}

/// Parses `0,5,7`, `0-7` or combinations like `0-3,10`.
pub fn parse_list(s: &str) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once('-') {
            let a: u32 = a.trim().parse().map_err(|_| usage(format!("bad range {part:?}")))?;
            let b: u32 = b.trim().parse().map_err(|_| usage(format!("bad range {part:?}")))?;
            if b < a {
                return Err(usage(format!("empty range {part:?}")));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| usage(format!("bad integer {part:?}")))?);
        }
    }
    if out.is_empty() {
        return Err(usage("empty quantum-number list"));
    }
    Ok(out)
}

fn load_file(common: &Common) -> Result<Vec<MoleculeRecord>, CliError> {
    let Some(path) = &common.molecule_file else {
        return Ok(Vec::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    molecules::load_molecules(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn resolve(common: &Common, name: &str) -> Result<MoleculeRecord, CliError> {
    let file = load_file(common)?;
    if let Ok(m) = molecules::find(&file, name) {
        return Ok(m);
    }
    molecules::builtin(name).map_err(|e| {
        if file.is_empty() {
            usage(e)
        } else {
            let names: Vec<&str> = file.iter().map(|m| m.name.as_str()).collect();
            usage(format!("{e}; molecule file provides {}", names.join(", ")))
        }
    })
}

fn system(common: &Common, args: &SystemArgs, origin: EnergyOrigin) -> Result<(MoleculeRecord, Diatomic<f64>), CliError> {
    let rec = resolve(common, &args.molecule)?;
    let sys = Diatomic::from_molecule(&rec, args.q, args.delta, origin).map_err(spectrum_error)?;
    Ok((rec, sys))
}

fn echo_system(report: &mut Report, common: &Common, rec: &MoleculeRecord, sys: &Diatomic<f64>, l: Option<u32>) {
    let p = sys.potential();
    report.param("molecule", rec.name.clone());
    report.param("source", rec.source.clone());
    report.param("D0_cm1", rec.d0_cm1.to_string());
    report.param("a_invA", rec.a_inv_a.to_string());
    report.param("r0_A", rec.r0_a.to_string());
    report.param("mu_amu", rec.mu_amu.to_string());
    report.param("q", p.q());
    report.param("delta", sys.delta());
    report.param("v3", if p.origin() == EnergyOrigin::SeparatedAtoms { "zero" } else { "well" });
    if common.show_constants {
        let c = sys.pekeris();
        report.param("De_eV", p.de());
        report.param("V1_eV", p.v1());
        report.param("V2_eV", p.v2());
        report.param("V3_eV", p.v3());
        report.param("alpha", p.alpha());
        report.param("h0_eV_A2", sys.h0());
        report.param("E0_eV", sys.e0());
        for (k, v) in [("a0", c.a0), ("a1", c.a1), ("a2", c.a2), ("b0", c.b0), ("b1", c.b1), ("b2", c.b2)] {
            report.param(k, v);
        }
        if let Some(l) = l {
            let b = sys.beta(l);
            report.param("beta1", b.beta1);
            report.param("beta2", b.beta2);
        }
    }
}

fn run_spectrum(common: &Common, args: &SystemArgs, n: &str, l: &str) -> Result<Report, CliError> {
    let ns = parse_list(n)?;
    let ls = parse_list(l)?;
    let (rec, sys) = system(common, args, common.v3.origin())?;
    let mut report = Report::new(
        "spectrum",
        &["molecule", "n", "l", "E_eV", "minus_E", "eps", "xi", "bound", "variant"],
    );
    echo_system(&mut report, common, &rec, &sys, (ls.len() == 1).then(|| ls[0]));
    report.param("n", n.to_string());
    report.param("l", l.to_string());
    for &ni in &ns {
        for &li in &ls {
            let r = spectrum::energy(&sys, QuantumState::new(ni, li)).map_err(spectrum_error)?;
            report.rows.push(vec![
                Cell::Text(rec.name.clone()),
                Cell::Int(ni.into()),
                Cell::Int(li.into()),
                Cell::Num(r.energy),
                Cell::Num(-r.energy),
                Cell::Num(r.eps),
                r.xi.map_or(Cell::Missing, Cell::Num),
                Cell::Bool(r.bound),
                Cell::Text(r.variant.as_str().to_string()),
            ]);
        }
    }
    Ok(report)
}

fn run_table3(common: &Common) -> Result<(Report, usize), CliError> {
    let mut report = Report::new(
        "table3",
        &["molecule", "n", "l", "minus_E", "printed", "reference", "deviation_units", "status"],
    );
    report.param("q", 1.0);
    report.param("delta", 0.0);
    report.param("v3", "zero");
    let mut mismatches = 0;
    for cell in ENERGY_CELLS {
        let rec = resolve(common, cell.molecule)?;
        let sys = Diatomic::from_molecule(&rec, 1.0, 0.0, EnergyOrigin::SeparatedAtoms).map_err(spectrum_error)?;
        let e = spectrum::energy_constant_mass(&sys, QuantumState::new(cell.n, cell.l)).map_err(spectrum_error)?;
        let minus_e = -e.energy;
        let ok = cell.matches(minus_e);
        if !ok {
            mismatches += 1;
        }
        report.rows.push(vec![
            Cell::Text(cell.molecule.to_string()),
            Cell::Int(cell.n.into()),
            Cell::Int(cell.l.into()),
            Cell::Num(minus_e),
            Cell::Text(format!("{:.*}", cell.decimals() as usize, minus_e)),
            Cell::Text(cell.printed.to_string()),
            Cell::Int(cell.deviation_in_units(minus_e)),
            Cell::Text(if ok { "ok" } else { "MISMATCH" }.to_string()),
        ]);
    }
    report.notes.push(format!("{}/{} cells matched", ENERGY_CELLS.len() - mismatches, ENERGY_CELLS.len()));
    Ok((report, mismatches))
}

fn run_nmax(common: &Common, molecules: Option<&str>, full: bool) -> Result<Report, CliError> {
    let names: Vec<String> = match molecules {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => molecules::builtin_names().iter().map(|s| s.to_string()).collect(),
    };
    let mut report = Report::new("nmax", &["molecule", "n", "E_eV", "eps", "bound", "kind"]);
    report.param("v3", if common.v3 == V3Choice::Zero { "zero" } else { "well" });
    report.param("molecules", names.join(","));
    for name in &names {
        let rec = resolve(common, name)?;
        let sys = Diatomic::from_molecule(&rec, 1.0, 0.0, common.v3.origin()).map_err(spectrum_error)?;
        let count = bound_state_count(&sys);
        if full {
            for n in 0..count.count {
                let r = energy_s_wave(&sys, n);
                report.rows.push(vec![
                    Cell::Text(rec.name.clone()),
                    Cell::Int(n.into()),
                    Cell::Num(r.energy),
                    Cell::Num(r.eps),
                    Cell::Bool(r.bound),
                    Cell::Text("level".into()),
                ]);
            }
        }
        let last = energy_s_wave(&sys, count.n_max());
        report.rows.push(vec![
            Cell::Text(rec.name.clone()),
            Cell::Int(count.n_max().into()),
            Cell::Num(last.energy),
            Cell::Num(last.eps),
            Cell::Bool(last.bound),
            Cell::Text("n_max".into()),
        ]);
        report.notes.push(format!(
            "{}: {} bound states (ceiling {:.4}), last bound n = {}",
            rec.name,
            count.count,
            count.ceiling,
            count.last_bound.map_or("none".to_string(), |n| n.to_string())
        ));
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_wavefunction(
    common: &Common,
    args: &SystemArgs,
    n: u32,
    l: u32,
    r_min: Option<f64>,
    r_max: Option<f64>,
    points: usize,
) -> Result<Report, CliError> {
    let (rec, sys) = system(common, args, common.v3.origin())?;
    let wf = RadialWavefunction::new(&sys, QuantumState::new(n, l)).map_err(|e| match e {
        crate::wavefunction::WavefunctionError::Spectrum(s) => spectrum_error(s),
        other => numeric(other),
    })?;
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let p = sys.potential();
    let lo = r_min.unwrap_or((p.re() - 3.0 / p.a()).max(wf.r_lower()) + 1e-6);
    let hi = r_max.unwrap_or(p.re() + 12.0 / p.a());
    if !(lo > 0.0 && hi > lo) {
        return Err(usage(format!("bad radial range [{lo}, {hi}]")));
    }
    let mut report = Report::new("wavefunction", &["r_A", "u", "psi"]);
    echo_system(&mut report, common, &rec, &sys, Some(l));
    report.param("n", n);
    report.param("l", l);
    report.param("eps", wf.eps);
    if let Some(xi) = wf.xi {
        report.param("xi", xi);
    }
    report.param("ln_norm", wf.ln_norm());
    for i in 0..points {
        let r = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        report.rows.push(vec![Cell::Num(r), Cell::Num(wf.u(r)), Cell::Num(wf.psi(r))]);
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_oracle_compare(
    common: &Common,
    args: &SystemArgs,
    l: u32,
    n: Option<&str>,
    centrifugal: ModeArg,
    inverse_r: ModeArg,
    mass: Option<MassArg>,
    equation: Option<EquationArg>,
    grid: usize,
    richardson: bool,
    r_min: Option<f64>,
    r_max: Option<f64>,
) -> Result<Report, CliError> {
    let (rec, sys) = system(common, args, common.v3.origin())?;
    let mass = mass.unwrap_or(if sys.delta() > 0.0 { MassArg::Pdm } else { MassArg::Constant });
    let equation = equation.unwrap_or(if mass == MassArg::Pdm {
        EquationArg::Reduced
    } else {
        EquationArg::Radial
    });
    let states: Vec<u32> = match n {
        Some(list) => parse_list(list)?,
        None => (0..)
            .take_while(|&k| spectrum::energy(&sys, QuantumState::new(k, l)).is_ok_and(|r| r.bound))
            .collect(),
    };
    let closed: Vec<_> = states
        .iter()
        .map(|&k| spectrum::energy(&sys, QuantumState::new(k, l)).map_err(spectrum_error))
        .collect::<Result<_, _>>()?;
    let cfg = OracleConfig {
        r_min,
        r_max,
        grid_points: grid,
        centrifugal_mode: centrifugal.into(),
        inverse_r_mode: inverse_r.into(),
        mass_mode: if mass == MassArg::Pdm { MassMode::Pdm } else { MassMode::Constant },
        equation: if equation == EquationArg::Reduced { Equation::Reduced } else { Equation::Radial },
        richardson,
        max_levels: Some(states.iter().max().map_or(1, |&m| m as usize + 1)),
        ..OracleConfig::default()
    };
    let spec = oracle::solve(&sys, l, &cfg).map_err(|e| match e {
        oracle::OracleError::Config(_) | oracle::OracleError::MassPole { .. } => usage(e),
        other => numeric(other),
    })?;
    let cmp = oracle::compare(&closed, &spec);
    let mut report = Report::new(
        "oracle-compare",
        &["n", "l", "closed_form_eV", "oracle_eV", "abs_dev", "rel_dev", "error_estimate", "flagged"],
    );
    echo_system(&mut report, common, &rec, &sys, Some(l));
    report.param("l", l);
    report.param("centrifugal", format!("{centrifugal:?}").to_lowercase());
    report.param("inverse_r", format!("{inverse_r:?}").to_lowercase());
    report.param("mass", format!("{mass:?}").to_lowercase());
    report.param("equation", format!("{equation:?}").to_lowercase());
    report.param("grid", grid);
    report.param("richardson", richardson);
    report.param("r_min_A", spec.grid.r_min);
    report.param("r_max_A", spec.grid.r_max);
    report.param("threshold_eV", spec.threshold);
    for row in &cmp.rows {
        report.rows.push(vec![
            Cell::Int(row.n.into()),
            Cell::Int(row.l.into()),
            Cell::Num(row.closed_form),
            Cell::Num(row.oracle),
            Cell::Num(row.abs_dev),
            Cell::Num(row.rel_dev),
            row.error_estimate.map_or(Cell::Missing, Cell::Num),
            Cell::Bool(row.flagged),
        ]);
    }
    report.notes.push(format!(
        "matched {}/{} (oracle levels {}), max |dev| {} eV, flagged {}",
        cmp.matched,
        cmp.closed_form_levels,
        cmp.oracle_levels,
        format_sig(cmp.max_abs_dev, 3),
        cmp.flagged
    ));
    if !cmp.unmatched.is_empty() {
        let list: Vec<String> = cmp.unmatched.iter().map(|k| k.to_string()).collect();
        report.notes.push(format!("no oracle level for n = {}", list.join(", ")));
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_special_case(
    common: &Common,
    case: SpecialCaseId,
    e0: Option<f64>,
    molecule: Option<&str>,
    d: f64,
    alpha: Option<f64>,
    q: Option<f64>,
    d_hat: Option<f64>,
    omega: Option<f64>,
    n: &str,
) -> Result<Report, CliError> {
    let ns = parse_list(n)?;
    let e0 = match (e0, molecule) {
        (Some(e0), _) => e0,
        (None, Some(name)) => {
            let rec = resolve(common, name)?;
            Diatomic::from_molecule(&rec, 1.0, 0.0, EnergyOrigin::SeparatedAtoms)
                .map_err(spectrum_error)?
                .e0()
        }
        (None, None) => return Err(usage("special-case needs --e0 or --molecule")),
    };
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("case {} needs --{name}", case.as_str())));
    let sc = match case {
        SpecialCaseId::GeneralizedVibrational => SpecialCase::GeneralizedVibrational {
            e0,
            d,
            alpha: need(alpha, "alpha")?,
            q: need(q, "q")?,
        },
        SpecialCaseId::NonPt => SpecialCase::NonPt {
            e0,
            d,
            d_hat: need(d_hat, "d-hat")?,
        },
        SpecialCaseId::PtType1 => SpecialCase::PtType1 {
            e0,
            d,
            d_hat: need(d_hat, "d-hat")?,
        },
        SpecialCaseId::PtType2 => SpecialCase::PtType2 {
            e0,
            d,
            omega: need(omega, "omega")?,
            alpha: alpha.unwrap_or(1.0),
        },
    };
    sc.validate().map_err(usage)?;
    let mut report = Report::new(
        "special-case",
        &["n", "E_re_eV", "E_im_eV", "exponent_re", "exponent_im", "real", "bound"],
    );
    report.param("case", case.as_str());
    report.param("E0_eV", e0);
    report.param("D_eV", d);
    for (k, v) in [("alpha", alpha), ("q", q), ("d_hat", d_hat), ("omega", omega)] {
        if let Some(v) = v {
            report.param(k, v);
        }
    }
    for &k in &ns {
        let r = sc.spectrum(k).map_err(usage)?;
        report.rows.push(vec![
            Cell::Int(k.into()),
            Cell::Num(r.energy_re),
            Cell::Num(r.energy_im),
            Cell::Num(r.exponent_re),
            Cell::Num(r.exponent_im),
            Cell::Bool(r.real),
            Cell::Bool(r.bound),
        ]);
    }
    if let Some(b) = sc.n_max_bound() {
        report.notes.push(format!("bound while n <= {}", format_sig(b, 6)));
    }
    Ok(report)
}

/// Runs a parsed command and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let c = &cli.common;
    let report = match &cli.command {
        Command::Spectrum { system, n, l } => run_spectrum(c, system, n, l)?,
        Command::Table3 => {
            let (report, mismatches) = run_table3(c)?;
            if mismatches > 0 {
                return Err(CliError::Golden {
                    output: report.render(c.format, c.digits),
                    mismatches,
                });
            }
            report
        }
        Command::Nmax { molecule, full } => run_nmax(c, molecule.as_deref(), *full)?,
        Command::Wavefunction {
            system,
            n,
            l,
            r_min,
            r_max,
            points,
        } => run_wavefunction(c, system, *n, *l, *r_min, *r_max, *points)?,
        Command::OracleCompare {
            system,
            l,
            n,
            centrifugal,
            inverse_r,
            mass,
            equation,
            grid,
            richardson,
            r_min,
            r_max,
        } => run_oracle_compare(
            c,
            system,
            *l,
            n.as_deref(),
            *centrifugal,
            *inverse_r,
            *mass,
            *equation,
            *grid,
            *richardson,
            *r_min,
            *r_max,
        )?,
        Command::SpecialCase {
            case,
            e0,
            molecule,
            d,
            alpha,
            q,
            d_hat,
            omega,
            n,
        } => run_special_case(c, *case, *e0, molecule.as_deref(), *d, *alpha, *q, *d_hat, *omega, n)?,
    };
    Ok(report.render(c.format, c.digits))
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|text| emit(&cli.common, &text));
    match result {
        Ok(()) => 0,
        Err(CliError::Golden { output, mismatches }) => {
            let _ = emit(&cli.common, &output);
            eprintln!("error: {mismatches} reference cell(s) outside one unit of the printed digit");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
