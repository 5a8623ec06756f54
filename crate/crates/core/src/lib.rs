//! Unitary discrete scaling of finite signals.
//!
//! A scaling matrix `M_M = exp(−i2π·ln M·(U·D + D·U)/2)` is built from a
//! sinc-corrected coordinate matrix `U` and its DFT dual `D = F⁻¹·U·F`.
//! Alongside it live a CDDHF-basis comparison method, a Dirichlet
//! interpolation baseline, analytic test signals and an NMSE harness.

pub mod bench;
pub mod cli;
pub mod dft;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
mod memo;
pub mod operators;
pub mod pei;
pub mod scaling;
pub mod signals;

pub use dft::{dft_matrix, index_grid, IndexScheme, SampleGrid};
pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{Complex64, ComplexMatrix, ComplexVector};
pub use operators::OperatorSet;

