use num_complex::Complex64;

use super::eig::{hermitian_eig_with, HermitianEigenDecomposition, DEFAULT_TOL};
use super::matrix::{matmul_with, ComplexMatrix};
use crate::error::Result;
use crate::exec::Execution;

/// exp(−i·θ·G) for Hermitian `G`, evaluated spectrally.
pub fn unitary_function_of_hermitian(g: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let exec = Execution::default();
    let eig = hermitian_eig_with(exec, g, DEFAULT_TOL)?;
    Ok(unitary_from_decomposition(exec, &eig, theta))
}

/// V·diag(exp(−i·θ·λ_k))·V† from an existing decomposition.
pub fn unitary_from_decomposition(exec: Execution, eig: &HermitianEigenDecomposition, theta: f64) -> ComplexMatrix {
    let v = &eig.eigenvectors;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -theta * lambda))
        .collect();
    let weighted = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * phases[j]);
    matmul_with(exec, &weighted, &v.adjoint()).expect("square factors")
}
