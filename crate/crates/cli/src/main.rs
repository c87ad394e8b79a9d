use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gup_magnetism::table::Table;

mod commands;
mod params;

const UNITS: &str = "All inputs are dimensionless: hbar = m = k_B = 1 and q/(2mc) = 1, \
so the cyclotron frequency equals the field B. Keys: omega0 (trap), B (field), \
T (temperature), V (volume), z (fugacity), beta (GUP parameter).";

#[derive(Parser)]
#[command(name = "gupmag", version, about = "Landau levels and magnetism with a minimal length", long_about = UNITS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and first-order levels with degeneracy classes
    Spectrum(SpectrumArgs),
    /// Sample a radial momentum-space eigenfunction
    Wavefn(WavefnArgs),
    /// Check the analytic spectrum and eigenfunctions against a finite-difference solve
    Verify(VerifyArgs),
    /// Thermodynamics at one parameter point
    Thermo(ThermoArgs),
    /// Thermodynamics along one parameter axis
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
pub struct Common {
    /// Parameter file with `key = value` lines
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a parameter (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit the provenance line (timestamp, version)
    #[arg(long, global = true)]
    no_meta: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct AxisArgs {
    /// Swept variable: B, T, beta or omega0
    #[arg(long)]
    var: Option<String>,
    /// LO:HI:N or LO:HI:N:log
    #[arg(long)]
    range: Option<String>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    axis: AxisArgs,
    /// Largest n_d + n_g
    #[arg(long, default_value_t = 6)]
    max_n: u32,
    /// Relative tolerance for grouping equal energies
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
pub struct WavefnArgs {
    #[command(flatten)]
    common: Common,
    /// Radial quantum number
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Magnetic quantum number
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    l: i32,
    #[arg(long, default_value_t = 200)]
    points: usize,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Finite-difference grid size
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    /// Largest |l| checked
    #[arg(long, default_value_t = 2)]
    l_max: u32,
    /// Eigenvalues compared per l
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Debug: shift every analytic energy by this amount before checking
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    perturb_energy: f64,
}

#[derive(Args)]
pub struct ThermoArgs {
    #[command(flatten)]
    common: Common,
    /// Add the critical fields B1, B2 against the beta = 0 baseline
    #[arg(long)]
    baseline_beta0: bool,
    /// Skip the direct level sum
    #[arg(long)]
    skip_direct: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    axis: AxisArgs,
    /// Run the sweep once per beta and merge the tables
    #[arg(long, value_delimiter = ',')]
    betas: Vec<f64>,
    #[arg(long)]
    baseline_beta0: bool,
    #[arg(long)]
    skip_direct: bool,
    /// Worker threads (default: all cores); output does not depend on it
    #[arg(long)]
    workers: Option<usize>,
}

/// A failure to be reported as one `error code=... message=...` line.
#[derive(Debug)]
pub struct CliError {
    pub exit: u8,
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        Self {
            exit: 2,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn failed(code: &str, message: impl Into<String>) -> Self {
        Self {
            exit: 1,
            code: code.into(),
            message: message.into(),
        }
    }
}

impl From<gup_magnetism::Error> for CliError {
    fn from(e: gup_magnetism::Error) -> Self {
        Self {
            exit: if e.is_numerical() { 3 } else { 2 },
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

pub fn emit(table: &mut Table, common: &Common, command: &str) -> Result<(), CliError> {
    if !common.no_meta {
        let generated = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.meta = vec![
            ("tool".into(), "gupmag".into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), command.into()),
            ("generated".into(), generated.to_string()),
        ];
    }
    let text = match common.format {
        Format::Csv => table.to_csv(!common.no_meta)?,
        Format::Json => table.to_json(!common.no_meta)?,
    };
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage("OUTPUT_FAILED", format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::usage("OUTPUT_FAILED", e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Wavefn(a) => commands::wavefn(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Thermo(a) => commands::thermo(&a),
        Command::Sweep(a) => commands::sweep(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error code={} message={:?}", e.code, e.message);
            ExitCode::from(e.exit)
        }
    }
}
