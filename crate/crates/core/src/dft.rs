//! Index sets, sample grids and the unitary DFT matrix.
//!
//! Signals of length `N` are labelled either by integers (ordinary) or by
//! unit-spaced half integers (centered). The centered set is symmetric
//! about zero for even `N`; for odd `N` it is shifted down by one half and
//! loses that symmetry. Samples sit at `u = n·h` with `h = 1/√N`, so the
//! grid spans roughly `[−√N/2, √N/2]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexScheme {
    Centered,
    Ordinary,
}

impl IndexScheme {
    pub const ALL: [IndexScheme; 2] = [IndexScheme::Centered, IndexScheme::Ordinary];

    pub fn name(self) -> &'static str {
        match self {
            IndexScheme::Centered => "centered",
            IndexScheme::Ordinary => "ordinary",
        }
    }

    /// Smallest index of the scheme for length `n`.
    pub fn first_index(self, n: usize) -> f64 {
        let n_f = n as f64;
        let base = if n.is_multiple_of(2) { -n_f / 2.0 } else { -(n_f - 1.0) / 2.0 };
        match (self, n.is_multiple_of(2)) {
            (IndexScheme::Ordinary, _) => base,
            (IndexScheme::Centered, true) => base + 0.5,
            (IndexScheme::Centered, false) => base - 0.5,
        }
    }

    /// Ascending index labels for length `n`.
    pub fn indices(self, n: usize) -> Vec<f64> {
        let first = self.first_index(n);
        (0..n).map(|k| first + k as f64).collect()
    }

    /// True when the index set is closed under negation.
    pub fn is_symmetric(self, n: usize) -> bool {
        match self {
            IndexScheme::Centered => n.is_multiple_of(2),
            IndexScheme::Ordinary => n % 2 == 1,
        }
    }
}

impl fmt::Display for IndexScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "centered" | "centred" => Ok(IndexScheme::Centered),
            "ordinary" => Ok(IndexScheme::Ordinary),
            other => Err(Error::InvalidParameter(format!("unknown index scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    n_samples: usize,
    scheme: IndexScheme,
    indices: Vec<f64>,
    spacing: f64,
    coordinates: Vec<f64>,
}

impl SampleGrid {
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn scheme(&self) -> IndexScheme {
        self.scheme
    }

    pub fn indices(&self) -> &[f64] {
        &self.indices
    }

    /// h = 1/√N.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.coordinates
    }

    /// Position of `index` in the grid, if it is one of the labels.
    pub fn position_of(&self, index: f64) -> Option<usize> {
        let k = index - self.indices[0];
        if k.fract() != 0.0 || k < 0.0 {
            return None;
        }
        let k = k as usize;
        (k < self.n_samples).then_some(k)
    }

    /// Odd-length centered grids lose negation symmetry; symmetry-based
    /// invariants do not apply to them.
    pub fn is_asymmetric_centered(&self) -> bool {
        self.scheme == IndexScheme::Centered && self.n_samples % 2 == 1
    }
}

pub fn index_grid(n_samples: usize, scheme: IndexScheme) -> Result<SampleGrid> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("number of samples must be >= 1".into()));
    }
    let indices = scheme.indices(n_samples);
    let spacing = 1.0 / (n_samples as f64).sqrt();
    let coordinates = indices.iter().map(|&n| n * spacing).collect();
    Ok(SampleGrid { n_samples, scheme, indices, spacing, coordinates })
}

/// Unitary DFT with `F[m][n] = exp(−j2π·m·n/N)/√N` over the scheme's labels.
pub fn dft_matrix(n_samples: usize, scheme: IndexScheme) -> Result<ComplexMatrix> {
    let grid = index_grid(n_samples, scheme)?;
    Ok(dft_from_indices(grid.indices()))
}

pub(crate) fn dft_from_indices(indices: &[f64]) -> ComplexMatrix {
    let n = indices.len();
    let n_f = n as f64;
    let norm = 1.0 / n_f.sqrt();
    ComplexMatrix::from_fn(n, n, |i, j| {
        // reduce m·n mod N before scaling so large labels keep full precision
        let product = (indices[i] * indices[j]).rem_euclid(n_f);
        Complex64::from_polar(norm, -2.0 * PI * product / n_f)
    })
}
