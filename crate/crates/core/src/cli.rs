//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for invalid arguments, 1 when a numerical
//! method fails or a check does not pass.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::format::{fmt_f64, to_json, CsvTable};
use crate::planewave;
use crate::radial_oracle;
use crate::roots;
use crate::specfun;
use crate::spectra::{self, CavitySpec, Convention, EigenMode, Geometry, SpectrumReport, ENERGY_UNITS};
use crate::wavefn;

/// Environment variable overriding the cap on `l`.
pub const LMAX_ENV: &str = "CAVITYSPEC_LMAX";

#[derive(Debug, Parser)]
#[command(name = "cavityspec", version, about = "Spectra of a particle in a hard-walled spherical cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    I,
    #[value(name = "ii-conv")]
    IiConv,
    #[value(name = "ii-paper")]
    IiPaper,
    All,
}

impl ConventionArg {
    fn selected(self) -> Vec<Convention> {
        match self {
            ConventionArg::I => vec![Convention::CavityI],
            ConventionArg::IiConv => vec![Convention::CavityIIConventional],
            ConventionArg::IiPaper => vec![Convention::CavityIIPaper],
            ConventionArg::All => Convention::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive zeros of j_l and beta = x / pi.
    Zeros {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Dimensionless energies for one or all conventions.
    Spectrum {
        #[arg(long = "R")]
        outer: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        lmax: usize,
        #[arg(long, value_enum, default_value = "all")]
        convention: ConventionArg,
        /// Particle mass in kg; adds energies in joules with R read as metres.
        #[arg(long)]
        mass: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Shell wavenumbers approaching the bare-sphere Bessel zero as eps shrinks.
    SweepEps {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long = "R")]
        outer: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        eps_list: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Finite-difference spectrum.
    Oracle(OracleArgs),
    /// Analytic and finite-difference kR side by side.
    Compare(OracleArgs),
    /// Sampled chi_l(r), R_l(r) and |chi|^2 of one mode.
    Wavefunction {
        #[arg(long = "R")]
        outer: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check the partial-wave expansion of exp(i kr cos theta).
    PlanewaveCheck {
        #[arg(long, default_value_t = 10.0)]
        kr_max: f64,
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[arg(long = "L", default_value_t = 40)]
        order: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Emit (kr, minimal L) instead of the max-error verdict.
        #[arg(long)]
        profile: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long = "R")]
    outer: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, default_value_t = 2000)]
    points: usize,
    /// Extrapolate from grids with N and 2N + 1 interior points.
    #[arg(long)]
    richardson: bool,
    #[command(flatten)]
    output: Output,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { status: if e.is_numeric() { 1 } else { 2 }, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { status: 2, message: message.into() }
}

/// Parse `argv` (including the program name), run the command and return
/// the exit status. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(cap) = std::env::var_os(LMAX_ENV) {
        match cap.to_str().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(cap) => specfun::set_l_max(cap),
            None => {
                eprintln!("error: {LMAX_ENV} must be a non-negative integer, got {cap:?}");
                return 2;
            }
        }
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.status
        }
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    let io_failure = |e: std::io::Error| Failure { status: 1, message: format!("cannot write output: {e}") };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(io_failure),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io_failure),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    to_json(value).map_err(|e| Failure { status: 1, message: format!("serialization failed: {e}") })
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be a positive number, got {v}")))
    }
}

fn at_least_one(name: &str, v: usize) -> Result<(), Failure> {
    if v >= 1 {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be at least 1")))
    }
}

#[derive(Serialize)]
struct ZeroRecord {
    n: usize,
    l: usize,
    x: f64,
    beta: f64,
}

#[derive(Serialize)]
struct ModeRecord {
    convention: Convention,
    #[serde(flatten)]
    mode: EigenMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_joules: Option<f64>,
}

#[derive(Serialize)]
struct ModesDocument<'a> {
    geometry: Geometry,
    units: &'a str,
    modes: Vec<ModeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<SpectrumReport>,
}

fn modes_output(format: Format, doc: &ModesDocument) -> Result<String, Failure> {
    match format {
        Format::Json => json(doc),
        Format::Csv => {
            let with_joules = doc.modes.iter().any(|m| m.energy_joules.is_some());
            let mut header = vec!["convention", "n", "l", "kR", "energy", "provenance"];
            if with_joules {
                header.push("energy_joules");
            }
            let mut table = CsvTable::new(&header);
            for rec in &doc.modes {
                let m = &rec.mode;
                let provenance = serde_json::to_value(m.provenance)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default();
                let mut cells = vec![
                    rec.convention.as_str().to_string(),
                    m.n.to_string(),
                    m.l.to_string(),
                    fmt_f64(m.k_r),
                    fmt_f64(m.energy),
                    provenance,
                ];
                if with_joules {
                    cells.push(rec.energy_joules.map(fmt_f64).unwrap_or_default());
                }
                table.row(&cells);
            }
            Ok(table.finish())
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Zeros { l, count, output } => {
            at_least_one("count", count)?;
            let records: Vec<ZeroRecord> = (1..=count)
                .map(|n| roots::bessel_zero(n, l).map(|z| ZeroRecord { n, l, x: z.x, beta: z.beta }))
                .collect::<Result<_, _>>()?;
            let text = match output.format {
                Format::Json => json(&records)?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["n", "l", "x", "beta"]);
                    for r in &records {
                        t.row(&[r.n.to_string(), r.l.to_string(), fmt_f64(r.x), fmt_f64(r.beta)]);
                    }
                    t.finish()
                }
            };
            emit(&output, &text)
        }

        Command::Spectrum { outer, eps, nmax, lmax, convention, mass, output } => {
            positive("R", outer)?;
            at_least_one("nmax", nmax)?;
            if let Some(m) = mass {
                positive("mass", m)?;
            }
            let geometry = Geometry::new(outer, eps)?;
            if eps != 0.0 && matches!(convention, ConventionArg::IiConv | ConventionArg::IiPaper) {
                return Err(invalid("--eps applies to Cavity-(i) only; Cavity-(ii) has no core"));
            }
            let mut modes = Vec::new();
            for conv in convention.selected() {
                let core = if conv == Convention::CavityI { eps } else { 0.0 };
                let spec = CavitySpec::new(outer, core, conv)?;
                for mode in spectra::modes(&spec, nmax, lmax)? {
                    let energy_joules = mass.map(|m| spectra::energy_joules(mode.energy, m, outer)).transpose()?;
                    modes.push(ModeRecord { convention: conv, mode, energy_joules });
                }
            }
            let comparison = if convention == ConventionArg::All {
                Some(spectra::equality_check(nmax, lmax, outer, eps)?)
            } else {
                None
            };
            let doc = ModesDocument { geometry, units: ENERGY_UNITS, modes, comparison };
            emit(&output, &modes_output(output.format, &doc)?)
        }

        Command::SweepEps { n, l, outer, eps_list, output } => {
            positive("R", outer)?;
            at_least_one("n", n)?;
            let points = spectra::eps_convergence_sweep(n, l, outer, &eps_list)?;
            let text = match output.format {
                Format::Json => json(&points)?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["eps", "kR", "abs_error", "rel_error"]);
                    for p in &points {
                        t.row(&[fmt_f64(p.eps), fmt_f64(p.k_r), fmt_f64(p.abs_error), fmt_f64(p.rel_error)]);
                    }
                    t.finish()
                }
            };
            emit(&output, &text)
        }

        Command::Oracle(args) => {
            let spec = oracle_spec(&args)?;
            let modes = radial_oracle::oracle_spectrum(&spec, args.l, args.count, args.points, args.richardson)?
                .into_iter()
                .map(|mode| ModeRecord { convention: Convention::CavityI, mode, energy_joules: None })
                .collect();
            let doc = ModesDocument {
                geometry: Geometry::new(args.outer, args.eps)?,
                units: ENERGY_UNITS,
                modes,
                comparison: None,
            };
            emit(&args.output, &modes_output(args.output.format, &doc)?)
        }

        Command::Compare(args) => {
            let spec = oracle_spec(&args)?;
            let rows = radial_oracle::compare(&spec, args.l, args.count, args.points, args.richardson)?;
            let text = match args.output.format {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["n", "l", "kR_analytic", "kR_oracle", "rel_error"]);
                    for r in &rows {
                        t.row(&[
                            r.n.to_string(),
                            r.l.to_string(),
                            fmt_f64(r.k_r_analytic),
                            fmt_f64(r.k_r_oracle),
                            fmt_f64(r.rel_error),
                        ]);
                    }
                    t.finish()
                }
            };
            emit(&args.output, &text)
        }

        Command::Wavefunction { outer, eps, l, n, samples, output } => {
            positive("R", outer)?;
            at_least_one("n", n)?;
            if samples < 2 {
                return Err(invalid("--samples must be at least 2"));
            }
            let spec = CavitySpec::new(outer, eps, Convention::CavityI)?;
            let mode = spectra::mode(&spec, n, l)?;
            let chi = wavefn::build_mode_chi(&spec, &mode)?;
            let rows = wavefn::sample(&chi, samples);
            let text = match output.format {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["r", "chi", "R_l", "density"]);
                    for s in &rows {
                        t.row(&[fmt_f64(s.r), fmt_f64(s.chi), fmt_f64(s.radial), fmt_f64(s.density)]);
                    }
                    t.finish()
                }
            };
            emit(&output, &text)
        }

        Command::PlanewaveCheck { kr_max, grid, order, tol, profile, output } => {
            if !(kr_max >= 0.0) || !kr_max.is_finite() {
                return Err(invalid(format!("--kr-max must be non-negative, got {kr_max}")));
            }
            positive("tol", tol)?;
            if grid < 2 {
                return Err(invalid("--grid must be at least 2"));
            }
            if profile {
                let mut t = CsvTable::new(&["kr", "L"]);
                let mut rows = Vec::with_capacity(grid);
                for i in 0..grid {
                    let kr = kr_max * i as f64 / (grid - 1) as f64;
                    let l = planewave::truncation_profile(kr, tol)?;
                    t.row(&[fmt_f64(kr), l.to_string()]);
                    rows.push(serde_json::json!({"kr": kr, "L": l}));
                }
                let text = match output.format {
                    Format::Csv => t.finish(),
                    Format::Json => json(&rows)?,
                };
                return emit(&output, &text);
            }
            let max_error = planewave::max_identity_error(kr_max, grid, order)?;
            let pass = max_error <= tol;
            let text = match output.format {
                Format::Json => json(&serde_json::json!({
                    "kr_max": kr_max,
                    "grid": grid,
                    "L": order,
                    "tol": tol,
                    "max_error": max_error,
                    "verdict": if pass { "PASS" } else { "FAIL" },
                }))?,
                Format::Csv => {
                    let mut t = CsvTable::new(&["kr_max", "grid", "L", "tol", "max_error", "verdict"]);
                    t.row(&[
                        fmt_f64(kr_max),
                        grid.to_string(),
                        order.to_string(),
                        fmt_f64(tol),
                        fmt_f64(max_error),
                        (if pass { "PASS" } else { "FAIL" }).to_string(),
                    ]);
                    t.finish()
                }
            };
            emit(&output, &text)?;
            if pass {
                Ok(())
            } else {
                Err(Failure { status: 1, message: format!("max error {max_error:e} exceeds tolerance {tol:e}") })
            }
        }
    }
}

fn oracle_spec(args: &OracleArgs) -> Result<CavitySpec, Failure> {
    positive("R", args.outer)?;
    at_least_one("count", args.count)?;
    specfun::Order::new(args.l)?;
    Ok(CavitySpec::new(args.outer, args.eps, Convention::CavityI)?)
}
