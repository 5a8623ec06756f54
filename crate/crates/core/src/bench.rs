//! NMSE harness: sweeps (function × method × M × N × scheme) cells and
//! renders the results as CSV or markdown tables.
//!
//! Errors are `100·‖ref − out‖² / ‖ref‖²`, with the reference being
//! samples of `M^{−1/2}·f(u/M)` (the amplitude factor can be switched off).
//! Three methods are available: the scaling matrix, CDDHF re-synthesis and
//! periodic band-limited (Dirichlet) interpolation on the same grid.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::dft::{index_grid, IndexScheme, SampleGrid};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::io::format_real;
use crate::linalg::{Complex64, ComplexVector};
use crate::pei::PeiCache;
use crate::scaling::{ScalingCache, ScalingSpec};
use crate::signals::TestFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Operator,
    Cddhf,
    Interp,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Operator, Method::Cddhf, Method::Interp];

    pub fn name(self) -> &'static str {
        match self {
            Method::Operator => "operator",
            Method::Cddhf => "cddhf",
            Method::Interp => "interp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "operator" => Ok(Method::Operator),
            "cddhf" | "pei" => Ok(Method::Cddhf),
            "interp" | "dirichlet" => Ok(Method::Interp),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

/// `100·‖reference − candidate‖² / ‖reference‖²`.
pub fn nmse_percent(reference: &ComplexVector, candidate: &ComplexVector) -> Result<f64> {
    if reference.len() != candidate.len() {
        return Err(Error::Dimension(format!(
            "reference has {} samples, candidate {}",
            reference.len(),
            candidate.len()
        )));
    }
    let energy = reference.norm_sqr();
    if energy == 0.0 {
        return Err(Error::InvalidParameter("reference has zero energy".into()));
    }
    let err: f64 = reference.iter().zip(candidate.iter()).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(100.0 * err / energy)
}

/// `(1/N)·Σ_k exp(j2π·k·x/N)` over the scheme's frequency labels `k`:
/// the periodic band-limited interpolator consistent with that scheme's DFT.
/// Equals 1 at `x = 0` and vanishes at every other integer offset mod N.
pub fn dirichlet(scheme: IndexScheme, n_samples: usize, x: f64) -> Complex64 {
    let n_f = n_samples as f64;
    let first = scheme.first_index(n_samples);
    let denominator = (PI * x / n_f).sin();
    if denominator.abs() < 1e-12 {
        // x is a multiple of N: every term equals exp(j2π·first·x/N)
        return Complex64::from_polar(1.0, 2.0 * PI * first * x / n_f);
    }
    let phase = PI * x * (2.0 * first + n_f - 1.0) / n_f;
    Complex64::from_polar((PI * x).sin() / (n_f * denominator), phase)
}

/// Interpolate, scale by `M`, and resample on the same grid:
/// `out[k] = M^{−1/2}·Σ_n signal[n]·dirichlet(idx_k/M − idx_n)`.
pub fn interp_scale(signal: &ComplexVector, grid: &SampleGrid, m_factor: f64) -> Result<ComplexVector> {
    if !(m_factor.is_finite() && m_factor > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling factor must be positive and finite, got {m_factor}"
        )));
    }
    let n = grid.n_samples();
    if signal.len() != n {
        return Err(Error::Dimension(format!("signal has {} samples, grid {}", signal.len(), n)));
    }
    let gain = m_factor.powf(-0.5);
    let labels = grid.indices();
    let out = labels
        .iter()
        .map(|&target| {
            let x0 = target / m_factor;
            let acc: Complex64 = labels
                .iter()
                .zip(signal.iter())
                .map(|(&source, s)| s * dirichlet(grid.scheme(), n, x0 - source))
                .sum();
            acc * gain
        })
        .collect();
    ComplexVector::new(out)
}

/// One cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellKey {
    pub function: TestFunction,
    pub method: Method,
    pub m_factor: f64,
    pub n_samples: usize,
    pub scheme: IndexScheme,
}

impl CellKey {
    fn sort_key(&self) -> (TestFunction, Method, u64, usize, IndexScheme) {
        // positive finite factors order like their bit patterns
        (self.function, self.method, self.m_factor.to_bits(), self.n_samples, self.scheme)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseRecord {
    pub key: CellKey,
    /// Percentage NMSE, or the message of the error that stopped the cell.
    pub outcome: std::result::Result<f64, String>,
}

impl MseRecord {
    pub fn nmse_percent(&self) -> Option<f64> {
        self.outcome.as_ref().ok().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub functions: Vec<TestFunction>,
    pub methods: Vec<Method>,
    pub m_factors: Vec<f64>,
    pub n_values: Vec<usize>,
    pub schemes: Vec<IndexScheme>,
    /// Include `M^{−1/2}` in the reference.
    pub amplitude_factor: bool,
}

impl Default for BenchConfig {
    /// Both test functions, the operator method, M ∈ {0.5, 2, 3},
    /// N ∈ {128, 256, 512}, both schemes.
    fn default() -> Self {
        BenchConfig {
            functions: TestFunction::ALL.to_vec(),
            methods: vec![Method::Operator],
            m_factors: vec![0.5, 2.0, 3.0],
            n_values: vec![128, 256, 512],
            schemes: IndexScheme::ALL.to_vec(),
            amplitude_factor: true,
        }
    }
}

impl BenchConfig {
    fn validate(&self) -> Result<()> {
        if let Some(m) = self.m_factors.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::InvalidParameter(format!("scaling factor must be positive, got {m}")));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidParameter("number of samples must be >= 1".into()));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<CellKey> {
        let mut cells = Vec::new();
        for &function in &self.functions {
            for &method in &self.methods {
                for &m_factor in &self.m_factors {
                    for &n_samples in &self.n_values {
                        for &scheme in &self.schemes {
                            cells.push(CellKey { function, method, m_factor, n_samples, scheme });
                        }
                    }
                }
            }
        }
        cells.sort_by_key(|c| c.sort_key());
        cells.dedup_by_key(|c| c.sort_key());
        cells
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchMetadata {
    pub config: BenchConfig,
    pub normalization: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    /// Sorted by (function, method, M, N, scheme).
    pub records: Vec<MseRecord>,
    pub metadata: BenchMetadata,
}

impl BenchTable {
    pub fn lookup(
        &self,
        function: TestFunction,
        method: Method,
        m_factor: f64,
        n_samples: usize,
        scheme: IndexScheme,
    ) -> Option<f64> {
        self.records
            .iter()
            .find(|r| {
                let k = &r.key;
                k.function == function
                    && k.method == method
                    && k.m_factor == m_factor
                    && k.n_samples == n_samples
                    && k.scheme == scheme
            })
            .and_then(MseRecord::nmse_percent)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MseRecord> {
        self.records.iter().filter(|r| r.outcome.is_err())
    }
}

/// Scaled output of `method` for the samples of `function` on `grid`.
pub fn scale_with_method(
    method: Method,
    samples: &ComplexVector,
    grid: &SampleGrid,
    m_factor: f64,
) -> Result<ComplexVector> {
    match method {
        Method::Operator => {
            let spec = ScalingSpec::new(m_factor, grid.n_samples(), grid.scheme())?;
            ScalingCache::global().scale(samples, &spec)
        }
        Method::Cddhf => PeiCache::global().scale(samples, m_factor),
        Method::Interp => interp_scale(samples, grid, m_factor),
    }
}

fn evaluate_cell(cell: &CellKey, amplitude_factor: bool) -> Result<f64> {
    let grid = index_grid(cell.n_samples, cell.scheme)?;
    let samples = cell.function.sample(&grid);
    let reference = cell.function.scaled_reference_with(&grid, cell.m_factor, amplitude_factor)?;
    let output = scale_with_method(cell.method, &samples, &grid, cell.m_factor)?;
    nmse_percent(&reference, &output)
}

/// Builds the expensive shared state (generator spectra, CDDHF bases) one
/// key at a time so that parallel cells only hit warm caches.
fn warm_caches(cells: &[CellKey]) {
    let mut spectra: Vec<(usize, IndexScheme)> = Vec::new();
    let mut bases: Vec<(usize, u64)> = Vec::new();
    for c in cells {
        match c.method {
            Method::Operator => spectra.push((c.n_samples, c.scheme)),
            Method::Cddhf => {
                bases.push((c.n_samples, 1f64.to_bits()));
                bases.push((c.n_samples, c.m_factor.to_bits()));
            }
            Method::Interp => {}
        }
    }
    spectra.sort();
    spectra.dedup();
    bases.sort();
    bases.dedup();
    for (n, scheme) in spectra {
        if let Err(e) = ScalingCache::global().spectrum(n, scheme) {
            log::warn!("generator spectrum N={n} {scheme} failed: {e}");
        }
    }
    for (n, bits) in bases {
        if let Err(e) = PeiCache::global().basis(n, f64::from_bits(bits)) {
            log::warn!("CDDHF basis N={n} M={} failed: {e}", f64::from_bits(bits));
        }
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchTable> {
    run_bench_with(Execution::default(), config)
}

/// Evaluates every cell; a failing cell is recorded and the sweep goes on.
pub fn run_bench_with(exec: Execution, config: &BenchConfig) -> Result<BenchTable> {
    config.validate()?;
    let cells = config.cells();
    warm_caches(&cells);
    let amplitude = config.amplitude_factor;
    let records = exec::map_ordered(exec, &cells, |cell| MseRecord {
        key: *cell,
        outcome: evaluate_cell(cell, amplitude).map_err(|e| e.to_string()),
    });
    Ok(BenchTable {
        records,
        metadata: BenchMetadata {
            config: config.clone(),
            normalization: "100*|ref-out|^2/|ref|^2",
            version: env!("CARGO_PKG_VERSION"),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(Error::InvalidParameter(format!("unknown table format '{other}'"))),
        }
    }
}

const COLUMNS: [&str; 6] = ["function", "method", "M", "N", "scheme", "nmse_percent"];

fn cells_of(record: &MseRecord) -> [String; 6] {
    let k = &record.key;
    let value = match &record.outcome {
        Ok(v) => format_real(*v),
        Err(msg) => format!("error: {}", msg.replace([',', '|', '\n'], ";")),
    };
    [
        k.function.name().to_string(),
        k.method.name().to_string(),
        format!("{}", k.m_factor),
        k.n_samples.to_string(),
        k.scheme.name().to_string(),
        value,
    ]
}

pub fn emit_table(table: &BenchTable, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for r in &table.records {
                out.push_str(&cells_of(r).join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
            for r in &table.records {
                let _ = writeln!(out, "| {} |", cells_of(r).join(" | "));
            }
        }
    }
    out
}
