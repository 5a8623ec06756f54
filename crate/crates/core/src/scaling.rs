//! The unitary discrete scaling matrix `M_M = exp(−i2π·ln M·G)`, where
//! `G = (U·D + D·U)/2` is the Hermitian generator from [`OperatorSet`].
//!
//! Because `G` is fixed for a given (N, scheme), every `M_M` shares its
//! eigenvectors and only the phases `exp(−i2π·ln M·λ_k)` change. The group
//! law `M_a·M_b = M_{ab}` and `M_M⁻¹ = M_{1/M} = M_M†` follow directly.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use crate::dft::IndexScheme;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{
    hermitian_eig_with, unitary_from_decomposition, ComplexMatrix, ComplexVector, HermitianEigenDecomposition,
    DEFAULT_TOL,
};
use crate::memo::Memo;
use crate::operators::OperatorSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSpec {
    m_factor: f64,
    n_samples: usize,
    scheme: IndexScheme,
}

impl ScalingSpec {
    pub fn new(m_factor: f64, n_samples: usize, scheme: IndexScheme) -> Result<Self> {
        if !(m_factor.is_finite() && m_factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scaling factor must be positive and finite, got {m_factor}"
            )));
        }
        if n_samples == 0 {
            return Err(Error::InvalidParameter("number of samples must be >= 1".into()));
        }
        Ok(Self { m_factor, n_samples, scheme })
    }

    pub fn m_factor(&self) -> f64 {
        self.m_factor
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn scheme(&self) -> IndexScheme {
        self.scheme
    }

    /// Rotation angle `2π·ln M` applied to the generator.
    pub fn angle(&self) -> f64 {
        2.0 * PI * self.m_factor.ln()
    }

    fn check_operators(&self, ops: &OperatorSet) -> Result<()> {
        if ops.n_samples != self.n_samples || ops.scheme != self.scheme {
            return Err(Error::Dimension(format!(
                "operators built for N={} {} but scaling asks for N={} {}",
                ops.n_samples, ops.scheme, self.n_samples, self.scheme
            )));
        }
        Ok(())
    }
}

pub fn scaling_matrix(spec: &ScalingSpec, ops: &OperatorSet) -> Result<ComplexMatrix> {
    spec.check_operators(ops)?;
    let exec = Execution::default();
    let eig = hermitian_eig_with(exec, &ops.generator, DEFAULT_TOL)?;
    Ok(unitary_from_decomposition(exec, &eig, spec.angle()))
}

pub fn scale_signal(signal: &ComplexVector, spec: &ScalingSpec, ops: &OperatorSet) -> Result<ComplexVector> {
    check_length(signal, spec)?;
    scaling_matrix(spec, ops)?.mul_vec(signal)
}

fn check_length(signal: &ComplexVector, spec: &ScalingSpec) -> Result<()> {
    if signal.len() != spec.n_samples {
        return Err(Error::Dimension(format!(
            "signal has {} samples, scaling expects {}",
            signal.len(),
            spec.n_samples
        )));
    }
    Ok(())
}

/// Operators of one (N, scheme) together with the spectrum of their generator.
#[derive(Debug)]
pub struct GeneratorSpectrum {
    pub ops: OperatorSet,
    pub eig: HermitianEigenDecomposition,
}

/// Process-wide memo of generator spectra per (N, scheme) and of scaling
/// matrices per (M, N, scheme). Matrices served from here are bit-identical
/// to those of [`scaling_matrix`].
pub struct ScalingCache {
    exec: Execution,
    spectra: Memo<(usize, IndexScheme), GeneratorSpectrum>,
    matrices: Memo<(u64, usize, IndexScheme), ComplexMatrix>,
}

impl ScalingCache {
    pub fn new(exec: Execution) -> Self {
        Self { exec, spectra: Memo::new(), matrices: Memo::new() }
    }

    pub fn global() -> &'static ScalingCache {
        static CACHE: OnceLock<ScalingCache> = OnceLock::new();
        CACHE.get_or_init(|| ScalingCache::new(Execution::default()))
    }

    pub fn spectrum(&self, n_samples: usize, scheme: IndexScheme) -> Result<Arc<GeneratorSpectrum>> {
        self.spectra.get_or_compute(&(n_samples, scheme), || {
            let ops = OperatorSet::build(n_samples, scheme)?;
            let eig = hermitian_eig_with(self.exec, &ops.generator, DEFAULT_TOL)?;
            log::debug!("generator spectrum N={n_samples} {scheme}: {} sweeps", eig.sweeps);
            Ok(GeneratorSpectrum { ops, eig })
        })
    }

    pub fn matrix(&self, spec: &ScalingSpec) -> Result<Arc<ComplexMatrix>> {
        let key = (spec.m_factor.to_bits(), spec.n_samples, spec.scheme);
        self.matrices.get_or_compute(&key, || {
            let spectrum = self.spectrum(spec.n_samples, spec.scheme)?;
            Ok(unitary_from_decomposition(self.exec, &spectrum.eig, spec.angle()))
        })
    }

    pub fn scale(&self, signal: &ComplexVector, spec: &ScalingSpec) -> Result<ComplexVector> {
        check_length(signal, spec)?;
        self.matrix(spec)?.mul_vec(signal)
    }

    pub fn cached_matrices(&self) -> usize {
        self.matrices.len()
    }

    pub fn clear(&self) {
        self.matrices.clear();
        self.spectra.clear();
    }
}
