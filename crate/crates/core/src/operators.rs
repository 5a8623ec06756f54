//! Coordinate-multiplication and differentiation matrices.
//!
//! The half-step central difference
//! `D̃_h f(u) = (f(u + h/2) − f(u − h/2)) / (i2π·h)` equals `sinc(h𝒟)·𝒟`.
//! Its Fourier dual is `Ũ_h = sinc(h𝒰)·𝒰`, which multiplies a signal by
//! `sin(πhu)/(πh)` instead of by `u`. Sampling that multiplier at
//! `u = n·h`, `h = 1/√N` gives the diagonal coordinate matrix
//! `U[n][n] = (√N/π)·sin(πn/N)`. The differentiation matrix then follows
//! from duality, `D = F⁻¹·U·F`, so `U = F·D·F⁻¹` holds exactly. The
//! scaling generator is the symmetrised product `(U·D + D·U)/2`.
//!
//! The naive choice `U = diag(n·h)` and the one-sided forward difference
//! are kept only as contrast fixtures for tests.

use std::f64::consts::PI;

use crate::dft::{dft_matrix, index_grid, IndexScheme, SampleGrid};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix};

/// `F`, `U`, `D` and the generator for one (N, scheme).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSet {
    pub n_samples: usize,
    pub scheme: IndexScheme,
    pub f: ComplexMatrix,
    pub u: ComplexMatrix,
    pub d: ComplexMatrix,
    pub generator: ComplexMatrix,
    /// Set for odd-length centered grids, where symmetry invariants lapse.
    pub asymmetric_grid: bool,
}

impl OperatorSet {
    pub fn build(n_samples: usize, scheme: IndexScheme) -> Result<Self> {
        let grid = index_grid(n_samples, scheme)?;
        let f = dft_matrix(n_samples, scheme)?;
        let u = coord_matrix(&grid);
        let d = diff_matrix(&f, &u)?;
        let generator = scaling_generator(&u, &d)?;
        Ok(OperatorSet {
            n_samples,
            scheme,
            f,
            u,
            d,
            generator,
            asymmetric_grid: grid.is_asymmetric_centered(),
        })
    }

    /// max |U − F·D·F⁻¹|.
    pub fn duality_residual(&self) -> f64 {
        let fdf = self
            .f
            .matmul(&self.d)
            .and_then(|fd| fd.matmul(&self.f.adjoint()))
            .expect("square operands");
        self.u.max_abs_diff(&fdf)
    }
}

/// Diagonal of the coordinate matrix: `(√N/π)·sin(πn/N)` for each label `n`.
pub fn coord_diagonal(grid: &SampleGrid) -> Vec<f64> {
    let n_f = grid.n_samples() as f64;
    let amplitude = n_f.sqrt() / PI;
    grid.indices().iter().map(|&n| amplitude * (PI * n / n_f).sin()).collect()
}

pub fn coord_matrix(grid: &SampleGrid) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&coord_diagonal(grid))
}

/// `diag(n·h)`, the uncorrected coordinate matrix.
pub fn naive_coord_matrix(grid: &SampleGrid) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(grid.coordinates())
}

/// `D = F⁻¹·U·F` with `F⁻¹ = F†`.
pub fn diff_matrix(f: &ComplexMatrix, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !f.is_square() || !u.is_square() || f.rows() != u.rows() {
        return Err(Error::Dimension(format!(
            "DFT {}x{} and coordinate {}x{} are not conformable",
            f.rows(),
            f.cols(),
            u.rows(),
            u.cols()
        )));
    }
    let residual = f.unitarity_residual();
    if residual >= 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    if !u.is_diagonal() || u.diagonal().iter().any(|z| z.im != 0.0) {
        return Err(Error::InvalidParameter("coordinate matrix must be real diagonal".into()));
    }
    f.adjoint().matmul(u)?.matmul(f)
}

/// `(U·D + D·U)/2`, re-Hermitised as `(G + G†)/2`.
pub fn scaling_generator(u: &ComplexMatrix, d: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !u.is_square() || !d.is_square() || u.rows() != d.rows() {
        return Err(Error::Dimension(format!(
            "generator operands {}x{} and {}x{}",
            u.rows(),
            u.cols(),
            d.rows(),
            d.cols()
        )));
    }
    let g = u.matmul(d)?.add(&d.matmul(u)?)?.scale(Complex64::new(0.5, 0.0));
    g.hermitian_part()
}

/// One-sided difference `(f[n+1] − f[n])/(i2π·h)` on the circulant lattice.
/// Not Hermitian; kept as a contrast fixture.
pub fn forward_difference_matrix(grid: &SampleGrid) -> ComplexMatrix {
    let n = grid.n_samples();
    let scale = Complex64::new(0.0, -1.0 / (2.0 * PI * grid.spacing()));
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            -scale
        } else if j == (i + 1) % n {
            scale
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
