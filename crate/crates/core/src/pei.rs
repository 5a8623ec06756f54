//! Comparison method: scaling through centered discrete dilated Hermite
//! functions (CDDHFs).
//!
//! `H_{p,M}` are the eigenvectors of `M⁴·D² + U²`, where `U²` is the
//! squared centered index and `D² = F·U²·F⁻¹` its centered-DFT dual. A
//! signal is expanded on `H_{p,1}` and resynthesised on `H_{p,M}` with the
//! same coefficients.
//!
//! Conventions:
//! - order: ascending eigenvalue, position `p` ↔ Hermite order `p`
//! - sign, `M = 1`: largest-magnitude entry positive, lowest index on ties
//! - sign, `M ≠ 1`: `⟨H_{p,M}, H_{p,1}⟩ ≥ 0`
//! - pairing across `M`: by sorted position, degenerate or not

use std::sync::{Arc, OnceLock};

use crate::dft::dft_from_indices;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{hermitian_eig_with, Complex64, ComplexMatrix, ComplexVector, DEFAULT_TOL};
use crate::memo::Memo;

/// Eigenvalue gaps below this are reported as near-degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Imaginary residue of `M⁴D² + U²` tolerated before it is discarded.
const IMAGINARY_RESIDUE: f64 = 1e-10;

/// Relative tolerance for deciding that two entries tie for largest magnitude.
const TIE_TOLERANCE: f64 = 1e-9;

/// Centered labels `m − (N−1)/2` for `m = 0..N−1`.
fn pei_labels(n: usize) -> Vec<f64> {
    let c = (n as f64 - 1.0) / 2.0;
    (0..n).map(|m| m as f64 - c).collect()
}

fn check_size(n_samples: usize) -> Result<()> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("number of samples must be >= 1".into()));
    }
    Ok(())
}

fn check_factor(m_factor: f64) -> Result<()> {
    if !(m_factor.is_finite() && m_factor > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling factor must be positive and finite, got {m_factor}"
        )));
    }
    Ok(())
}

/// Diagonal `(m − (N−1)/2)²`, `m = 0..N−1`.
pub fn pei_u_squared(n_samples: usize) -> Result<ComplexMatrix> {
    check_size(n_samples)?;
    let diag: Vec<f64> = pei_labels(n_samples).iter().map(|x| x * x).collect();
    Ok(ComplexMatrix::from_real_diagonal(&diag))
}

/// Centered DFT over the labels `m − (N−1)/2`.
pub fn pei_dft(n_samples: usize) -> Result<ComplexMatrix> {
    check_size(n_samples)?;
    Ok(dft_from_indices(&pei_labels(n_samples)))
}

/// `D² = F·U²·F⁻¹`.
pub fn pei_d_squared(u2: &ComplexMatrix, f_centered: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !u2.is_square() || !f_centered.is_square() || u2.rows() != f_centered.rows() {
        return Err(Error::Dimension(format!(
            "U² {}x{} and F {}x{} are not conformable",
            u2.rows(),
            u2.cols(),
            f_centered.rows(),
            f_centered.cols()
        )));
    }
    let residual = f_centered.unitarity_residual();
    if residual >= 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    f_centered.matmul(u2)?.matmul(&f_centered.adjoint())?.hermitian_part()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CddhfBasis {
    pub n_samples: usize,
    pub m_factor: f64,
    /// `H_{p,M}`, `p = 0..N−1`.
    pub vectors: Vec<ComplexVector>,
    /// Ascending, paired with `vectors`.
    pub eigenvalues: Vec<f64>,
    /// Positions `p` with `λ_{p+1} − λ_p < DEGENERACY_GAP`.
    pub near_degenerate: Vec<usize>,
}

impl CddhfBasis {
    pub fn gram_residual(&self) -> f64 {
        let v = ComplexMatrix::from_columns(&self.vectors).expect("equal-length columns");
        v.unitarity_residual()
    }

    /// Real-valued copy of column `p`.
    pub fn real_column(&self, p: usize) -> Vec<f64> {
        self.vectors[p].iter().map(|z| z.re).collect()
    }
}

/// The real symmetric operator `M⁴·D² + U²` whose eigenvectors are `H_{p,M}`.
pub fn dilated_hermite_operator(n_samples: usize, m_factor: f64) -> Result<ComplexMatrix> {
    check_size(n_samples)?;
    check_factor(m_factor)?;
    let u2 = pei_u_squared(n_samples)?;
    let d2 = pei_d_squared(&u2, &pei_dft(n_samples)?)?;
    let mut a = d2.scale(Complex64::new(m_factor.powi(4), 0.0)).add(&u2)?;
    let residue = a.as_slice().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue >= IMAGINARY_RESIDUE * (1.0 + a.max_abs()) {
        return Err(Error::InvalidParameter(format!(
            "M⁴D² + U² has imaginary residue {residue:.3e}"
        )));
    }
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            a[(i, j)].im = 0.0;
        }
    }
    Ok(a)
}

fn eigen_basis(exec: Execution, n_samples: usize, m_factor: f64) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let a = dilated_hermite_operator(n_samples, m_factor)?;
    let eig = hermitian_eig_with(exec, &a, DEFAULT_TOL)?;
    let columns = (0..n_samples)
        .map(|p| (0..n_samples).map(|i| eig.eigenvectors[(i, p)].re).collect())
        .collect();
    Ok((columns, eig.eigenvalues))
}

fn fix_sign_by_peak(v: &mut [f64]) {
    let peak = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if peak == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= peak * (1.0 - TIE_TOLERANCE))
        .expect("peak entry exists");
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn fix_sign_by_overlap(v: &mut [f64], reference: &[f64]) {
    let overlap: f64 = v.iter().zip(reference).map(|(a, b)| a * b).sum();
    if overlap < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn assemble(n_samples: usize, m_factor: f64, columns: Vec<Vec<f64>>, eigenvalues: Vec<f64>) -> Result<CddhfBasis> {
    let near_degenerate: Vec<usize> = eigenvalues
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] - w[0] < DEGENERACY_GAP)
        .map(|(p, _)| p)
        .collect();
    if !near_degenerate.is_empty() {
        log::warn!("CDDHF basis N={n_samples} M={m_factor}: near-degenerate eigenvalues at {near_degenerate:?}");
    }
    let vectors = columns
        .iter()
        .map(|c| ComplexVector::from_real(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(CddhfBasis { n_samples, m_factor, vectors, eigenvalues, near_degenerate })
}

/// Builds `H_{p,M}` with the module's ordering and sign conventions.
pub fn cddhf_basis(n_samples: usize, m_factor: f64) -> Result<CddhfBasis> {
    cddhf_basis_with(Execution::default(), n_samples, m_factor)
}

pub fn cddhf_basis_with(exec: Execution, n_samples: usize, m_factor: f64) -> Result<CddhfBasis> {
    check_size(n_samples)?;
    check_factor(m_factor)?;
    let (mut unit, unit_values) = eigen_basis(exec, n_samples, 1.0)?;
    unit.iter_mut().for_each(|v| fix_sign_by_peak(v));
    if m_factor == 1.0 {
        return assemble(n_samples, m_factor, unit, unit_values);
    }
    let (mut dilated, values) = eigen_basis(exec, n_samples, m_factor)?;
    for (v, reference) in dilated.iter_mut().zip(&unit) {
        fix_sign_by_overlap(v, reference);
    }
    assemble(n_samples, m_factor, dilated, values)
}

/// `f_M = Σ_p ⟨f, H_{p,1}⟩·H_{p,M}` given both bases.
pub fn pei_scale_with_bases(signal: &ComplexVector, unit: &CddhfBasis, dilated: &CddhfBasis) -> Result<ComplexVector> {
    let n = unit.n_samples;
    if signal.len() != n || dilated.n_samples != n {
        return Err(Error::Dimension(format!(
            "signal of length {} with bases of size {} and {}",
            signal.len(),
            n,
            dilated.n_samples
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (h1, hm) in unit.vectors.iter().zip(&dilated.vectors) {
        let coefficient = signal.inner(h1)?;
        for (o, h) in out.iter_mut().zip(hm.iter()) {
            *o += coefficient * h;
        }
    }
    ComplexVector::new(out)
}

pub fn pei_scale(signal: &ComplexVector, m_factor: f64) -> Result<ComplexVector> {
    PeiCache::global().scale(signal, m_factor)
}

/// Memo of CDDHF bases per (N, M).
pub struct PeiCache {
    exec: Execution,
    bases: Memo<(usize, u64), CddhfBasis>,
}

impl PeiCache {
    pub fn new(exec: Execution) -> Self {
        Self { exec, bases: Memo::new() }
    }

    pub fn global() -> &'static PeiCache {
        static CACHE: OnceLock<PeiCache> = OnceLock::new();
        CACHE.get_or_init(|| PeiCache::new(Execution::default()))
    }

    pub fn basis(&self, n_samples: usize, m_factor: f64) -> Result<Arc<CddhfBasis>> {
        check_factor(m_factor)?;
        self.bases.get_or_compute(&(n_samples, m_factor.to_bits()), || {
            cddhf_basis_with(self.exec, n_samples, m_factor)
        })
    }

    pub fn scale(&self, signal: &ComplexVector, m_factor: f64) -> Result<ComplexVector> {
        let unit = self.basis(signal.len(), 1.0)?;
        let dilated = self.basis(signal.len(), m_factor)?;
        pei_scale_with_bases(signal, &unit, &dilated)
    }
}

/// Number of sign changes along `v`, ignoring entries below `1e-10·max|v|`.
pub fn sign_changes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let floor = 1e-10 * peak;
    let signs: Vec<bool> = v.iter().filter(|x| x.abs() > floor).map(|&x| x > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}
