//! Dense complex linear algebra: products, Hermitian eigendecomposition and
//! unitary functions of Hermitian generators.

mod eig;
mod func;
mod matrix;

pub use eig::{check_hermitian, hermitian_eig, hermitian_eig_with, HermitianEigenDecomposition, DEFAULT_TOL, MAX_SWEEPS};
pub use func::{unitary_from_decomposition, unitary_function_of_hermitian};
pub use matrix::{matmul_with, ComplexMatrix, ComplexVector};

pub use num_complex::Complex64;
