//! `opscale gen|scale|bench|basis`.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 for usage or
//! input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bench::{emit_table, run_bench, scale_with_method, BenchConfig, Method, TableFormat};
use crate::dft::{dft_matrix, index_grid, IndexScheme};
use crate::error::Error;
use crate::io::{render_basis, MatrixFile, MatrixKind, SignalFile};
use crate::operators::OperatorSet;
use crate::pei::{pei_d_squared, pei_dft, pei_u_squared, PeiCache};
use crate::scaling::{ScalingCache, ScalingSpec};
use crate::signals::TestFunction;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "opscale", version, about = "Unitary discrete scaling matrices and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one of the operator matrices.
    Gen {
        #[arg(long, value_parser = parse_from_str::<MatrixKind>)]
        kind: MatrixKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "centered", value_parser = parse_from_str::<IndexScheme>)]
        scheme: IndexScheme,
        /// Scaling factor; required for `--kind scaling` only.
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scale a signal file.
    Scale {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value = "operator", value_parser = parse_from_str::<Method>)]
        method: Method,
        #[arg(long, default_value = "centered", value_parser = parse_from_str::<IndexScheme>)]
        scheme: IndexScheme,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the NMSE sweep.
    Bench {
        /// chirp, trapezoid or all.
        #[arg(long, default_value = "all")]
        function: String,
        #[arg(long, value_delimiter = ',', default_value = "operator", value_parser = parse_from_str::<Method>)]
        methods: Vec<Method>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 2.0, 3.0])]
        m: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [128usize, 256, 512])]
        n: Vec<usize>,
        /// Restrict to one scheme; both by default.
        #[arg(long, value_parser = parse_from_str::<IndexScheme>)]
        scheme: Option<IndexScheme>,
        #[arg(long, default_value = "csv", value_parser = parse_from_str::<TableFormat>)]
        format: TableFormat,
        /// Compare against f(u/M) instead of M^(-1/2)·f(u/M).
        #[arg(long)]
        no_amplitude_factor: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the CDDHF basis H_{p,M}.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidParameter(_) | Error::Dimension(_) => EXIT_USAGE,
            Error::NotHermitian { .. } | Error::NotUnitary { .. } | Error::NoConvergence { .. } => EXIT_COMPUTE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let written = match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| Failure { code: EXIT_COMPUTE, message: format!("write failed: {e}") })
}

fn positive_n(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    Ok(())
}

fn cmd_gen(kind: MatrixKind, n: usize, scheme: IndexScheme, m: Option<f64>, out: Option<&Path>) -> Result<(), Failure> {
    positive_n(n)?;
    match (kind, m) {
        (MatrixKind::Scaling, None) => return Err(Failure::usage("--m is required for --kind scaling")),
        (MatrixKind::Scaling, Some(_)) | (_, None) => {}
        (_, Some(_)) => return Err(Failure::usage("--m only applies to --kind scaling")),
    }
    let matrix = match kind {
        MatrixKind::Dft => dft_matrix(n, scheme)?,
        MatrixKind::U | MatrixKind::D | MatrixKind::Generator => {
            let ops = OperatorSet::build(n, scheme)?;
            if ops.asymmetric_grid {
                log::warn!("odd-length centered grid: index set is not symmetric about zero");
            }
            match kind {
                MatrixKind::U => ops.u,
                MatrixKind::D => ops.d,
                _ => ops.generator,
            }
        }
        MatrixKind::Scaling => {
            let spec = ScalingSpec::new(m.expect("checked above"), n, scheme)?;
            ScalingCache::global().matrix(&spec)?.as_ref().clone()
        }
        MatrixKind::U2Pei => pei_u_squared(n)?,
        MatrixKind::D2Pei => pei_d_squared(&pei_u_squared(n)?, &pei_dft(n)?)?,
    };
    let labels = if kind.uses_zero_based_labels() {
        (0..n).map(|i| i as f64).collect()
    } else {
        scheme.indices(n)
    };
    let file = MatrixFile { kind, scheme, m_factor: m, labels, matrix };
    emit(out, &file.render())
}

fn cmd_scale(input: &Path, m: f64, method: Method, scheme: IndexScheme, out: Option<&Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", input.display())))?;
    let signal = SignalFile::parse(&text)?;
    let grid = index_grid(signal.indices.len(), scheme)?;
    signal.check_grid(&grid)?;
    let scaled = scale_with_method(method, &signal.values, &grid, m)?;
    emit(out, &SignalFile::from_grid(&grid, scaled)?.render())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    function: &str,
    methods: Vec<Method>,
    m_factors: Vec<f64>,
    n_values: Vec<usize>,
    scheme: Option<IndexScheme>,
    format: TableFormat,
    amplitude_factor: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let functions = match function.trim().to_ascii_lowercase().as_str() {
        "all" => TestFunction::ALL.to_vec(),
        other => vec![other.parse::<TestFunction>()?],
    };
    let config = BenchConfig {
        functions,
        methods,
        m_factors,
        n_values,
        schemes: scheme.map_or_else(|| IndexScheme::ALL.to_vec(), |s| vec![s]),
        amplitude_factor,
    };
    let table = run_bench(&config)?;
    for failed in table.failures() {
        log::error!("cell {:?} failed: {:?}", failed.key, failed.outcome);
    }
    emit(out, &emit_table(&table, format))
}

fn cmd_basis(n: usize, m: f64, out: Option<&Path>) -> Result<(), Failure> {
    positive_n(n)?;
    let basis = PeiCache::global().basis(n, m)?;
    if !basis.near_degenerate.is_empty() {
        log::warn!("near-degenerate eigenvalues at positions {:?}", basis.near_degenerate);
    }
    emit(out, &render_basis(&basis))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen { kind, n, scheme, m, out } => cmd_gen(kind, n, scheme, m, out.as_deref()),
        Command::Scale { input, m, method, scheme, out } => cmd_scale(&input, m, method, scheme, out.as_deref()),
        Command::Bench { function, methods, m, n, scheme, format, no_amplitude_factor, out } => {
            cmd_bench(&function, methods, m, n, scheme, format, !no_amplitude_factor, out.as_deref())
        }
        Command::Basis { n, m, out } => cmd_basis(n, m, out.as_deref()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("opscale: {}", f.message);
            f.code
        }
    }
}
