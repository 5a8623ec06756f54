//! Analytic test functions, their samples and continuously scaled references.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::dft::SampleGrid;
use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestFunction {
    /// exp(−πu² − jπu²)
    ChirpedPulse,
    /// 1.5·tri(u/2) − 0.5·tri(2u)
    Trapezoid,
}

/// Unit triangle max(0, 1 − |u|), the self-convolution of the unit rect.
pub fn tri(u: f64) -> f64 {
    (1.0 - u.abs()).max(0.0)
}

impl TestFunction {
    pub const ALL: [TestFunction; 2] = [TestFunction::ChirpedPulse, TestFunction::Trapezoid];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::ChirpedPulse => "chirp",
            TestFunction::Trapezoid => "trapezoid",
        }
    }

    pub fn evaluate(self, u: f64) -> Complex64 {
        match self {
            TestFunction::ChirpedPulse => {
                let q = PI * u * u;
                Complex64::from_polar((-q).exp(), -q)
            }
            TestFunction::Trapezoid => Complex64::new(1.5 * tri(u / 2.0) - 0.5 * tri(2.0 * u), 0.0),
        }
    }

    pub fn sample(self, grid: &SampleGrid) -> ComplexVector {
        let data = grid.coordinates().iter().map(|&u| self.evaluate(u)).collect();
        ComplexVector::new(data).expect("closed forms are finite on a non-empty grid")
    }

    /// Samples of `M^{−1/2}·f(u/M)`.
    pub fn scaled_reference(self, grid: &SampleGrid, m_factor: f64) -> Result<ComplexVector> {
        self.scaled_reference_with(grid, m_factor, true)
    }

    /// As [`scaled_reference`](Self::scaled_reference), optionally without
    /// the `M^{−1/2}` amplitude factor.
    pub fn scaled_reference_with(self, grid: &SampleGrid, m_factor: f64, amplitude: bool) -> Result<ComplexVector> {
        if !(m_factor.is_finite() && m_factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scaling factor must be positive and finite, got {m_factor}"
            )));
        }
        let gain = if amplitude { m_factor.powf(-0.5) } else { 1.0 };
        let data = grid
            .coordinates()
            .iter()
            .map(|&u| self.evaluate(u / m_factor) * gain)
            .collect();
        ComplexVector::new(data)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chirp" | "chirped-pulse" | "chirpedpulse" => Ok(TestFunction::ChirpedPulse),
            "trapezoid" | "trap" => Ok(TestFunction::Trapezoid),
            other => Err(Error::InvalidParameter(format!("unknown test function '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dft::{index_grid, IndexScheme};

    #[test]
    fn closed_form_values() {
        assert_eq!(TestFunction::ChirpedPulse.evaluate(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(TestFunction::Trapezoid.evaluate(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(TestFunction::Trapezoid.evaluate(2.0), Complex64::new(0.0, 0.0));
        assert_eq!(TestFunction::Trapezoid.evaluate(-2.5), Complex64::new(0.0, 0.0));
        // flat top between |u| = 0.5 and ramp down to 0 at |u| = 2
        assert!((TestFunction::Trapezoid.evaluate(0.5).re - 1.125).abs() < 1e-15);
        assert!((TestFunction::Trapezoid.evaluate(1.0).re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn chirp_samples() {
        let g = index_grid(16, IndexScheme::Ordinary).unwrap();
        let s = TestFunction::ChirpedPulse.sample(&g);
        assert_eq!(s[g.position_of(0.0).unwrap()], Complex64::new(1.0, 0.0));

        let g = index_grid(4, IndexScheme::Ordinary).unwrap();
        let s = TestFunction::ChirpedPulse.sample(&g);
        let v = s[g.position_of(-2.0).unwrap()];
        let expected = Complex64::new(-(-PI).exp(), 0.0);
        assert!((v - expected).norm() < 1e-16);
    }

    #[test]
    fn trapezoid_real_and_even_on_centered_grid() {
        let g = index_grid(16, IndexScheme::Centered).unwrap();
        let s = TestFunction::Trapezoid.sample(&g);
        for k in 0..16 {
            assert_eq!(s[k].im, 0.0);
            assert_eq!(s[k], s[15 - k]);
        }
    }

    #[test]
    fn reference_with_unit_factor_equals_samples() {
        let g = index_grid(32, IndexScheme::Centered).unwrap();
        for f in TestFunction::ALL {
            assert_eq!(f.scaled_reference(&g, 1.0).unwrap(), f.sample(&g));
        }
    }

    #[test]
    fn trapezoid_reference_at_origin() {
        let g = index_grid(9, IndexScheme::Ordinary).unwrap();
        let r = TestFunction::Trapezoid.scaled_reference(&g, 2.0).unwrap();
        assert!((r[g.position_of(0.0).unwrap()].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(TestFunction::Trapezoid.scaled_reference(&g, 0.0).is_err());
    }

    #[test]
    fn reference_energy_tracks_sample_energy() {
        let g = index_grid(512, IndexScheme::Centered).unwrap();
        for f in TestFunction::ALL {
            let e0 = f.sample(&g).norm_sqr();
            for m in [0.5, 2.0, 3.0] {
                let e = f.scaled_reference(&g, m).unwrap().norm_sqr();
                assert!(((e - e0) / e0).abs() < 0.01, "{f} M={m}");
            }
        }
    }
}
