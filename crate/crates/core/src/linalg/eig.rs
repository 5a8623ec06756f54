//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each sweep visits every off-diagonal pair once, in round-robin order:
//! a sweep is split into rounds of disjoint pairs, so the rotations of one
//! round commute and can be applied together. A round is applied as
//! `A ← (A·J)†·J`, which for Hermitian `A` equals `J†·A·J` and only ever
//! touches whole rows, which is what the row-parallel executor wants.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};

/// Hard cap on full sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal threshold used by the library's own callers.
pub const DEFAULT_TOL: f64 = 1e-14;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
    pub sweeps: usize,
}

impl HermitianEigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V·diag(λ)·V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let scaled = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * self.eigenvalues[j]);
        scaled.matmul(&v.adjoint()).expect("square factors")
    }
}

#[derive(Debug, Clone, Copy)]
struct Rotation {
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    // -s·e^{-iφ} and c·e^{-iφ}, where e^{iφ} is the phase of a_pq
    qp: Complex64,
    qq: Complex64,
}

impl Rotation {
    /// Rotation annihilating a_pq, or `None` when it is already zero.
    fn annihilating(a: &ComplexMatrix, p: usize, q: usize) -> Option<Rotation> {
        let b = a[(p, q)];
        let mag = b.norm();
        if mag == 0.0 {
            return None;
        }
        let phase = b / mag;
        let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        let conj_phase = phase.conj();
        Some(Rotation { p, q, c, s, qp: conj_phase * (-s), qq: conj_phase * c })
    }

    #[inline]
    fn apply_right(&self, row: &mut [Complex64]) {
        let x = row[self.p];
        let y = row[self.q];
        row[self.p] = x * self.c + y * self.qp;
        row[self.q] = x * self.s + y * self.qq;
    }
}

/// Round-robin schedule of disjoint pairs covering every pair once.
fn round_robin(n: usize) -> Vec<Vec<(usize, usize)>> {
    let m = if n.is_multiple_of(2) { n } else { n + 1 };
    let mut ring: Vec<usize> = (0..m).collect();
    let mut rounds = Vec::with_capacity(m.saturating_sub(1));
    for _ in 0..m.saturating_sub(1) {
        let mut pairs = Vec::with_capacity(m / 2);
        for i in 0..m / 2 {
            let (a, b) = (ring[i], ring[m - 1 - i]);
            if a < n && b < n {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        rounds.push(pairs);
        ring[1..].rotate_right(1);
    }
    rounds
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for (j, z) in a.row(i).iter().enumerate() {
            if i != j {
                acc += z.norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn conjugate_transpose_in_place(a: &mut ComplexMatrix) {
    let n = a.rows();
    for i in 0..n {
        a[(i, i)] = a[(i, i)].conj();
        for j in i + 1..n {
            let upper = a[(i, j)];
            a[(i, j)] = a[(j, i)].conj();
            a[(j, i)] = upper.conj();
        }
    }
}

/// Checks that `a` is square and Hermitian to within `1e-10·(1 + max|a|)`.
pub fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let residual = a.hermiticity_residual();
    if residual >= 1e-10 * (1.0 + a.max_abs()) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

pub fn hermitian_eig(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigenDecomposition> {
    hermitian_eig_with(Execution::default(), a, tol)
}

pub fn hermitian_eig_with(exec: Execution, a: &ComplexMatrix, tol: f64) -> Result<HermitianEigenDecomposition> {
    check_hermitian(a)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = a.rows();
    let mut work = a.hermitian_part()?;
    let mut vectors = ComplexMatrix::identity(n);
    let target = tol * work.frobenius_norm();
    let schedule = round_robin(n);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&work);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for pairs in &schedule {
            let rotations: Vec<Rotation> = pairs
                .iter()
                .filter_map(|&(p, q)| Rotation::annihilating(&work, p, q))
                .collect();
            if rotations.is_empty() {
                continue;
            }
            let apply = |_: usize, row: &mut [Complex64]| {
                for r in &rotations {
                    r.apply_right(row);
                }
            };
            exec::for_each_row(exec, work.as_mut_slice(), n, apply);
            conjugate_transpose_in_place(&mut work);
            exec::for_each_row(exec, work.as_mut_slice(), n, apply);
            exec::for_each_row(exec, vectors.as_mut_slice(), n, apply);
            for r in &rotations {
                work[(r.p, r.q)] = Complex64::new(0.0, 0.0);
                work[(r.q, r.p)] = Complex64::new(0.0, 0.0);
                work[(r.p, r.p)].im = 0.0;
                work[(r.q, r.q)].im = 0.0;
            }
        }
        sweeps += 1;
    }

    let raw: Vec<f64> = (0..n).map(|i| work[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep Jacobi output order
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let eigenvalues = order.iter().map(|&k| raw[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(HermitianEigenDecomposition { eigenvalues, eigenvectors, sweeps })
}
