//! Text file formats for signals, matrices and CDDHF bases.
//!
//! Reals are written with 17 significant digits so that a parse returns
//! the exact double. Index labels use the shortest exact decimal (`-0.5`,
//! `3`).
//!
//! Signal file:
//! ```text
//! index,re,im
//! -1.5,1.0000000000000000e0,0.0000000000000000e0
//! ```
//!
//! Matrix file (row-major, N² data rows):
//! ```text
//! # opscale matrix kind=scaling n=4 scheme=centered m=2
//! row,col,re,im
//! ```
//!
//! Basis file (one column per `H_{p,M}`):
//! ```text
//! # opscale basis n=4 m=1
//! # eigenvalues=<λ_0>;<λ_1>;...
//! index,h0,h1,h2,h3
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::dft::{IndexScheme, SampleGrid};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, ComplexVector};
use crate::pei::CddhfBasis;

/// 17 significant digits, scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_label(x: f64) -> String {
    format!("{x}")
}

fn parse_real(field: &str, line: usize, what: &str) -> Result<f64> {
    let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("{what} '{}' is not a number", field.trim()),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse { line, message: format!("{what} is not finite") });
    }
    Ok(value)
}

fn split_fields(line: &str, expected: usize, line_no: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {expected} fields, found {}", fields.len()),
        });
    }
    Ok(fields)
}

/// Non-empty lines with 1-based line numbers.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub indices: Vec<f64>,
    pub values: ComplexVector,
}

impl SignalFile {
    pub fn from_grid(grid: &SampleGrid, values: ComplexVector) -> Result<Self> {
        if values.len() != grid.n_samples() {
            return Err(Error::Dimension(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n_samples()
            )));
        }
        Ok(SignalFile { indices: grid.indices().to_vec(), values })
    }

    pub fn render(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (idx, z) in self.indices.iter().zip(self.values.iter()) {
            out.push_str(&format!("{},{},{}\n", format_label(*idx), format_real(z.re), format_real(z.im)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (line_no, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty signal file".into() })?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_ascii_lowercase()).collect();
        if columns != ["index", "re", "im"] {
            return Err(Error::Parse { line: line_no, message: format!("expected header 'index,re,im', found '{header}'") });
        }
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (line_no, line) in lines {
            let f = split_fields(line, 3, line_no)?;
            indices.push(parse_real(f[0], line_no, "index")?);
            values.push(Complex64::new(parse_real(f[1], line_no, "re")?, parse_real(f[2], line_no, "im")?));
        }
        if values.is_empty() {
            return Err(Error::Parse { line: line_no, message: "signal file has no samples".into() });
        }
        Ok(SignalFile { indices, values: ComplexVector::new(values)? })
    }

    /// Checks that the labels are exactly those of `grid`.
    pub fn check_grid(&self, grid: &SampleGrid) -> Result<()> {
        if self.indices.len() != grid.n_samples() || self.indices.iter().zip(grid.indices()).any(|(a, b)| a != b) {
            return Err(Error::InvalidParameter(format!(
                "signal indices do not match the {}-point {} grid",
                self.indices.len(),
                grid.scheme()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Dft,
    U,
    D,
    Generator,
    Scaling,
    U2Pei,
    D2Pei,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 7] = [
        MatrixKind::Dft,
        MatrixKind::U,
        MatrixKind::D,
        MatrixKind::Generator,
        MatrixKind::Scaling,
        MatrixKind::U2Pei,
        MatrixKind::D2Pei,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Dft => "dft",
            MatrixKind::U => "u",
            MatrixKind::D => "d",
            MatrixKind::Generator => "generator",
            MatrixKind::Scaling => "scaling",
            MatrixKind::U2Pei => "u2_pei",
            MatrixKind::D2Pei => "d2_pei",
        }
    }

    /// Pei matrices are labelled 0..N−1 rather than by the scheme's labels.
    pub fn uses_zero_based_labels(self) -> bool {
        matches!(self, MatrixKind::U2Pei | MatrixKind::D2Pei)
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown matrix kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub scheme: IndexScheme,
    pub m_factor: Option<f64>,
    /// Row/column labels in storage order.
    pub labels: Vec<f64>,
    pub matrix: ComplexMatrix,
}

fn parse_header_pairs(line: &str, prefix: &str, line_no: usize) -> Result<HashMap<String, String>> {
    let rest = line.strip_prefix(prefix).ok_or_else(|| Error::Parse {
        line: line_no,
        message: format!("expected header starting with '{prefix}'"),
    })?;
    rest.split_whitespace()
        .map(|pair| {
            pair.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse { line: line_no, message: format!("malformed header field '{pair}'") })
        })
        .collect()
}

fn required<'a>(pairs: &'a HashMap<String, String>, key: &str, line: usize) -> Result<&'a str> {
    pairs
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Parse { line, message: format!("header lacks '{key}'") })
}

impl MatrixFile {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn render(&self) -> String {
        let n = self.n();
        let mut out = format!("# opscale matrix kind={} n={} scheme={}", self.kind, n, self.scheme);
        if let Some(m) = self.m_factor {
            out.push_str(&format!(" m={m}"));
        }
        out.push_str("\nrow,col,re,im\n");
        for i in 0..n {
            for j in 0..n {
                let z = self.matrix[(i, j)];
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    format_label(self.labels[i]),
                    format_label(self.labels[j]),
                    format_real(z.re),
                    format_real(z.im)
                ));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (line_no, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty matrix file".into() })?;
        let pairs = parse_header_pairs(header, "# opscale matrix", line_no)?;
        let kind: MatrixKind = required(&pairs, "kind", line_no)?.parse()?;
        let n: usize = required(&pairs, "n", line_no)?
            .parse()
            .map_err(|_| Error::Parse { line: line_no, message: "n is not a positive integer".into() })?;
        let scheme: IndexScheme = required(&pairs, "scheme", line_no)?.parse()?;
        let m_factor = pairs.get("m").map(|m| parse_real(m, line_no, "m")).transpose()?;

        let (line_no, columns) = lines.next().ok_or(Error::Parse { line: line_no + 1, message: "missing column header".into() })?;
        if columns.trim() != "row,col,re,im" {
            return Err(Error::Parse { line: line_no, message: format!("expected 'row,col,re,im', found '{columns}'") });
        }
        let mut labels = Vec::with_capacity(n);
        let mut data = Vec::with_capacity(n * n);
        let mut last_line = line_no;
        for (count, (line_no, line)) in lines.enumerate() {
            last_line = line_no;
            if count >= n * n {
                return Err(Error::Parse { line: line_no, message: format!("more than {} data rows", n * n) });
            }
            let f = split_fields(line, 4, line_no)?;
            let row = parse_real(f[0], line_no, "row")?;
            let col = parse_real(f[1], line_no, "col")?;
            let (i, j) = (count / n, count % n);
            if i == 0 {
                labels.push(col);
            }
            if col != labels[j] || row != labels[i] {
                return Err(Error::Parse { line: line_no, message: "labels are not in row-major order".into() });
            }
            data.push(Complex64::new(parse_real(f[2], line_no, "re")?, parse_real(f[3], line_no, "im")?));
        }
        if data.len() != n * n {
            return Err(Error::Parse {
                line: last_line,
                message: format!("expected {} data rows, found {}", n * n, data.len()),
            });
        }
        let matrix = ComplexMatrix::from_row_major(n, n, data)?;
        Ok(MatrixFile { kind, scheme, m_factor, labels, matrix })
    }
}

pub fn render_basis(basis: &CddhfBasis) -> String {
    let n = basis.n_samples;
    let eigenvalues: Vec<String> = basis.eigenvalues.iter().map(|&l| format_real(l)).collect();
    let mut out = format!("# opscale basis n={n} m={}\n# eigenvalues={}\nindex", basis.m_factor, eigenvalues.join(";"));
    for p in 0..n {
        out.push_str(&format!(",h{p}"));
    }
    out.push('\n');
    for i in 0..n {
        out.push_str(&i.to_string());
        for v in &basis.vectors {
            out.push(',');
            out.push_str(&format_real(v[i].re));
        }
        out.push('\n');
    }
    out
}

/// Parsed basis file: eigenvalues and real columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFile {
    pub m_factor: f64,
    pub eigenvalues: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
}

pub fn parse_basis(text: &str) -> Result<BasisFile> {
    let mut lines = numbered_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty basis file".into() })?;
    let pairs = parse_header_pairs(header, "# opscale basis", line_no)?;
    let n: usize = required(&pairs, "n", line_no)?
        .parse()
        .map_err(|_| Error::Parse { line: line_no, message: "n is not a positive integer".into() })?;
    let m_factor = parse_real(required(&pairs, "m", line_no)?, line_no, "m")?;

    let (line_no, eig_line) = lines.next().ok_or(Error::Parse { line: line_no + 1, message: "missing eigenvalues".into() })?;
    let listed = eig_line
        .strip_prefix("# eigenvalues=")
        .ok_or(Error::Parse { line: line_no, message: "expected '# eigenvalues='".into() })?;
    let eigenvalues = listed
        .split(';')
        .map(|v| parse_real(v, line_no, "eigenvalue"))
        .collect::<Result<Vec<_>>>()?;

    let (line_no, _) = lines.next().ok_or(Error::Parse { line: line_no + 1, message: "missing column header".into() })?;
    let mut columns = vec![Vec::with_capacity(n); n];
    let mut rows = 0;
    for (line_no, line) in lines {
        let f = split_fields(line, n + 1, line_no)?;
        for (p, field) in f[1..].iter().enumerate() {
            columns[p].push(parse_real(field, line_no, "entry")?);
        }
        rows += 1;
    }
    if rows != n || eigenvalues.len() != n {
        return Err(Error::Parse { line: line_no, message: format!("expected {n} rows and eigenvalues") });
    }
    Ok(BasisFile { m_factor, eigenvalues, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::index_grid;

    #[test]
    fn real_format_roundtrips_exactly() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 2.0f64.sqrt()] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_label(-0.5), "-0.5");
        assert_eq!(format_label(3.0), "3");
    }

    #[test]
    fn signal_roundtrip() {
        let grid = index_grid(6, IndexScheme::Centered).unwrap();
        let values = ComplexVector::new((0..6).map(|k| Complex64::new(k as f64 / 7.0, -0.1)).collect()).unwrap();
        let file = SignalFile::from_grid(&grid, values).unwrap();
        let text = file.render();
        assert!(text.starts_with("index,re,im\n-2.5,"));
        let back = SignalFile::parse(&text).unwrap();
        assert_eq!(back, file);
        back.check_grid(&grid).unwrap();
        assert!(back.check_grid(&index_grid(6, IndexScheme::Ordinary).unwrap()).is_err());
    }

    #[test]
    fn signal_parse_errors_carry_line_numbers() {
        assert!(matches!(SignalFile::parse("idx,re,im\n0,1,0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(SignalFile::parse("index,re,im\n0,1,0\n1,x,0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(SignalFile::parse("index,re,im\n0,1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(SignalFile::parse("").is_err());
    }

    #[test]
    fn matrix_roundtrip_is_bit_exact() {
        let n = 3;
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new((i as f64 + 0.1).ln(), (j as f64).exp() / 3.0));
        let file = MatrixFile {
            kind: MatrixKind::Scaling,
            scheme: IndexScheme::Centered,
            m_factor: Some(2.5),
            labels: IndexScheme::Centered.indices(n),
            matrix,
        };
        let text = file.render();
        assert_eq!(text.lines().count(), 2 + n * n);
        let back = MatrixFile::parse(&text).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn matrix_parse_rejects_truncation() {
        let file = MatrixFile {
            kind: MatrixKind::U,
            scheme: IndexScheme::Ordinary,
            m_factor: None,
            labels: IndexScheme::Ordinary.indices(2),
            matrix: ComplexMatrix::identity(2),
        };
        let text = file.render();
        let truncated: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(MatrixFile::parse(&truncated).is_err());
        assert!(MatrixFile::parse("# opscale matrix kind=q n=2 scheme=centered\n").is_err());
    }
}
