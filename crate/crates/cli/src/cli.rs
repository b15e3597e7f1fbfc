//! Command-line front end. Reports go to `out`, diagnostics to `err`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use frobenius_core::catalog::{builtin, EntryKind, NAMES};
use frobenius_core::rational::parse_rational;
use frobenius_core::Rational;

use crate::manifest::{parse_manifold, serialize_manifold, InputError, Manifold};
use crate::report::{exit_code, SuiteReport};
use crate::suites::{legendre, run_suite, Suite, SuiteFlags};

#[derive(Debug, Parser)]
#[command(
    name = "frobcheck",
    version,
    about = "Verify F-manifold and Frobenius manifold data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites on a manifold file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Legendre-type transform along a flat field; optionally write the result.
    Legendre {
        file: PathBuf,
        /// Where to write the transformed manifold file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Idempotent frame at a point and diagonal-metric checks.
    Canonical {
        file: PathBuf,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Polynomial basis of the Poisson kernel subalgebra.
    Kernel {
        file: PathBuf,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Built-in example manifolds.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// List built-in entries.
    List,
    /// Print a built-in entry as a manifold file.
    Dump { name: String },
}

#[derive(Debug, Clone, Args)]
pub struct FlagArgs {
    /// Random quadruples or fields per sampled check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest Euler power in the Witt and power-bracket checks.
    #[arg(long, default_value_t = 4)]
    pub nmax: u32,
    /// Comma-separated point for pointwise numeric checks.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub point: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-5)]
    pub step: f64,
    /// Total-degree bound of the kernel ansatz.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Comma-separated constant coefficients of the Legendre field.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_parser = rational_arg)]
    pub field: Option<Vec<Rational>>,
    /// Degree cap for a nonlinear Legendre change.
    #[arg(long)]
    pub cap: Option<i32>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

impl From<FlagArgs> for SuiteFlags {
    fn from(a: FlagArgs) -> Self {
        Self {
            samples: a.samples,
            seed: a.seed,
            nmax: a.nmax,
            point: a.point,
            tol: a.tol,
            step: a.step,
            degree: a.degree,
            field: a.field,
            cap: a.cap,
        }
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Option<Manifold> {
    match parse_manifold(path) {
        Ok(m) => Some(m),
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            None
        }
    }
}

fn emit(reports: &[SuiteReport], out: &mut dyn Write) -> i32 {
    for r in reports {
        if r.write_lines(out).is_err() {
            return 2;
        }
    }
    exit_code(reports)
}

fn input_error(err: &mut dyn Write, e: &InputError) -> i32 {
    let _ = writeln!(err, "error: {e}");
    2
}

/// Parses `args` (including the program name) and runs the command;
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Check { file, suite, flags } => {
            let Some(m) = load(&file, err) else { return 2 };
            emit(&run_suite(&m, suite, &flags.into()), out)
        }
        Command::Canonical { file, flags } => {
            let Some(m) = load(&file, err) else { return 2 };
            emit(&run_suite(&m, Suite::Canonical, &flags.into()), out)
        }
        Command::Kernel { file, flags } => {
            let Some(m) = load(&file, err) else { return 2 };
            emit(&run_suite(&m, Suite::Kernel, &flags.into()), out)
        }
        Command::Legendre {
            file,
            out: path,
            flags,
        } => {
            let Some(m) = load(&file, err) else { return 2 };
            let (report, data) = legendre(&m, &flags.into());
            let code = emit(std::slice::from_ref(&report), out);
            if let (Some(path), Some(data)) = (path, data) {
                let name = m.name.as_ref().map(|n| format!("{n}_legendre"));
                let text = serialize_manifold(&Manifold::new(name, data));
                if let Err(e) = std::fs::write(&path, text) {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return 2;
                }
            }
            code
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            for name in NAMES {
                let kind = match builtin(name).map(|e| e.kind) {
                    Ok(EntryKind::Frobenius) => "frobenius",
                    Ok(EntryKind::FManifold) => "f-manifold",
                    Ok(EntryKind::NegativeControl) => "negative-control",
                    Err(_) => "unavailable",
                };
                let _ = writeln!(out, "{name}\t{kind}");
            }
            0
        }
        Command::Catalog {
            action: CatalogAction::Dump { name },
        } => match builtin(&name) {
            Ok(entry) => {
                let m = Manifold::new(Some(entry.name), entry.data);
                let _ = write!(out, "{}", serialize_manifold(&m));
                0
            }
            Err(e) => input_error(err, &InputError::at("name", e.to_string())),
        },
    }
}
