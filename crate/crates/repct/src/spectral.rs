//! Pointwise spectral quantities of the 2x2 velocity gradient tensor.
//!
//! Everything downstream of this module works in the reduced variables
//! d = tr M (divergence) and Gamma = (lambda2 - lambda1)^2 (squared spectral
//! gap). Gamma is real even when the eigenvalues form a complex pair, and it
//! satisfies Gamma = d^2 - 4 det M = p^2 + q^2 - omega^2 where p, q are the
//! shear components and omega the rotation. Along smooth flows each of p, q,
//! omega is transported proportionally to the density, so beta = Gamma/rho^2
//! is conserved; that single number selects the phase-plane regime.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Velocity gradient tensor at a point, row-major entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientTensor {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

/// Shear components, rotation, and divergence of a gradient tensor:
/// p = m11 - m22, q = m12 + m21, omega = m12 - m21, d = m11 + m22.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub p: f64,
    pub q: f64,
    pub omega: f64,
    pub d: f64,
}

/// Eigenvalue pair ordered so that lambda1 = (d - sqrt(Gamma))/2. For
/// Gamma < 0 the pair is complex conjugate with lambda1 carrying the
/// negative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl GradientTensor {
    /// Entries must be finite.
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        for (name, v) in [("m11", m11), ("m12", m12), ("m21", m21), ("m22", m22)] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "gradient tensor entry {name} must be finite, got {v}"
                )));
            }
        }
        Ok(Self { m11, m12, m21, m22 })
    }

    pub fn identity() -> Self {
        Self { m11: 1.0, m12: 0.0, m21: 0.0, m22: 1.0 }
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn decompose(&self) -> Decomposition {
        Decomposition {
            p: self.m11 - self.m22,
            q: self.m12 + self.m21,
            omega: self.m12 - self.m21,
            d: self.trace(),
        }
    }

    /// Squared spectral gap Gamma = (tr M)^2 - 4 det M.
    pub fn spectral_gap(&self) -> f64 {
        let d = self.trace();
        d * d - 4.0 * self.det()
    }

    /// Eigenvalues from the trace and the spectral gap. The square root of a
    /// negative gap is taken along the imaginary axis directly, so purely
    /// rotational tensors get exact imaginary pairs.
    pub fn eigenvalues(&self) -> SpectralPair {
        let d = self.trace();
        let gamma = self.spectral_gap();
        if gamma >= 0.0 {
            let root = gamma.sqrt();
            SpectralPair {
                lambda1: Complex64::new(0.5 * (d - root), 0.0),
                lambda2: Complex64::new(0.5 * (d + root), 0.0),
            }
        } else {
            let root = (-gamma).sqrt();
            SpectralPair {
                lambda1: Complex64::new(0.5 * d, -0.5 * root),
                lambda2: Complex64::new(0.5 * d, 0.5 * root),
            }
        }
    }
}

/// Initial data for the reduced dynamics together with the model parameters:
/// density rho0 >= 0, divergence d0, squared spectral gap Gamma0, forcing
/// constant k > 0, background density c >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialConfig {
    pub rho0: f64,
    pub d0: f64,
    pub gamma0: f64,
    pub k: f64,
    pub c: f64,
}

impl InitialConfig {
    pub fn new(rho0: f64, d0: f64, gamma0: f64, k: f64, c: f64) -> Result<Self> {
        for (name, v) in [("rho0", rho0), ("d0", d0), ("gamma0", gamma0), ("k", k), ("c", c)] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite, got {v}")));
            }
        }
        if rho0 < 0.0 {
            return Err(Error::InvalidConfig(format!("rho0 must be >= 0, got {rho0}")));
        }
        if k <= 0.0 {
            return Err(Error::InvalidConfig(format!("k must be > 0, got {k}")));
        }
        if c < 0.0 {
            return Err(Error::InvalidConfig(format!("c must be >= 0, got {c}")));
        }
        Ok(Self { rho0, d0, gamma0, k, c })
    }

    /// Convenience constructor for the zero-background model (c = 0).
    pub fn zero_background(rho0: f64, d0: f64, gamma0: f64, k: f64) -> Result<Self> {
        Self::new(rho0, d0, gamma0, k, 0.0)
    }

    /// Initial data carried by a full gradient tensor.
    pub fn from_tensor(m: &GradientTensor, rho0: f64, k: f64, c: f64) -> Result<Self> {
        Self::new(rho0, m.trace(), m.spectral_gap(), k, c)
    }
}

/// Conserved ratio beta = Gamma0 / rho0^2. The vacuum state rho0 = 0 has no
/// finite ratio and is marked explicitly rather than encoded as an infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Real(f64),
    Vacuum,
}

impl Beta {
    /// The finite value, if any.
    pub fn value(&self) -> Option<f64> {
        match self {
            Beta::Real(b) => Some(*b),
            Beta::Vacuum => None,
        }
    }
}

pub fn beta_of(config: &InitialConfig) -> Beta {
    if config.rho0 == 0.0 {
        Beta::Vacuum
    } else {
        Beta::Real(config.gamma0 / (config.rho0 * config.rho0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn identity_tensor_decomposition() {
        let parts = GradientTensor::identity().decompose();
        assert_eq!((parts.p, parts.q, parts.omega, parts.d), (0.0, 0.0, 0.0, 2.0));
    }

    #[test]
    fn rotation_tensor_has_negative_gap_and_imaginary_pair() {
        let j = GradientTensor::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let parts = j.decompose();
        assert_eq!((parts.p, parts.q, parts.omega, parts.d), (0.0, 0.0, -2.0, 0.0));
        assert_eq!(j.spectral_gap(), -4.0);
        let eig = j.eigenvalues();
        assert_eq!(eig.lambda1, Complex64::new(0.0, -1.0));
        assert_eq!(eig.lambda2, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn generic_tensor_decomposition_and_eigenvalues() {
        let m = GradientTensor::new(1.0, 2.0, 3.0, 4.0).unwrap();
        let parts = m.decompose();
        assert_eq!((parts.p, parts.q, parts.omega, parts.d), (-3.0, 5.0, -1.0, 5.0));
        assert_eq!(m.spectral_gap(), 33.0);
        let eig = m.eigenvalues();
        // (5 -+ sqrt(33))/2
        assert!(close(eig.lambda1.re, -0.3722813232690143, 1e-15));
        assert!(close(eig.lambda2.re, 5.372281323269014, 1e-15));
        assert_eq!(eig.lambda1.im, 0.0);
        assert_eq!(eig.lambda2.im, 0.0);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(GradientTensor::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(GradientTensor::new(0.0, f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn beta_of_vacuum_and_generic() {
        let vac = InitialConfig::new(0.0, -1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(beta_of(&vac), Beta::Vacuum);
        assert_eq!(beta_of(&vac).value(), None);

        let cfg = InitialConfig::new(2.0, 0.0, 8.0, 1.0, 0.0).unwrap();
        assert_eq!(beta_of(&cfg), Beta::Real(2.0));
    }

    #[test]
    fn initial_config_validation() {
        assert!(InitialConfig::new(-1.0, 0.0, 0.0, 1.0, 0.0).is_err());
        assert!(InitialConfig::new(1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(InitialConfig::new(1.0, 0.0, 0.0, -1.0, 0.0).is_err());
        assert!(InitialConfig::new(1.0, 0.0, 0.0, 1.0, -0.5).is_err());
        assert!(InitialConfig::new(1.0, f64::NAN, 0.0, 1.0, 0.0).is_err());
    }

    proptest! {
        /// The gap computed from the trace and determinant must agree with
        /// the shear/rotation split p^2 + q^2 - omega^2.
        #[test]
        fn gap_matches_shear_rotation_split(
            m11 in -1e3..1e3f64, m12 in -1e3..1e3f64,
            m21 in -1e3..1e3f64, m22 in -1e3..1e3f64,
        ) {
            let m = GradientTensor::new(m11, m12, m21, m22).unwrap();
            let parts = m.decompose();
            let via_split = parts.p * parts.p + parts.q * parts.q - parts.omega * parts.omega;
            let gamma = m.spectral_gap();
            let scale = gamma.abs()
                .max(parts.p * parts.p + parts.q * parts.q + parts.omega * parts.omega)
                .max(1.0);
            prop_assert!((gamma - via_split).abs() <= 1e-12 * scale);
        }

        /// Eigenvalue sum and product recover the trace and determinant.
        #[test]
        fn eigenvalues_recover_trace_and_det(
            m11 in -1e3..1e3f64, m12 in -1e3..1e3f64,
            m21 in -1e3..1e3f64, m22 in -1e3..1e3f64,
        ) {
            let m = GradientTensor::new(m11, m12, m21, m22).unwrap();
            let eig = m.eigenvalues();
            let sum = eig.lambda1 + eig.lambda2;
            let prod = eig.lambda1 * eig.lambda2;
            let scale = m.trace().abs().max(m.det().abs()).max(m.spectral_gap().abs()).max(1.0);
            prop_assert!((sum.re - m.trace()).abs() <= 1e-12 * scale);
            prop_assert!(sum.im.abs() <= 1e-12 * scale);
            prop_assert!((prod.re - m.det()).abs() <= 1e-12 * scale);
            prop_assert!(prod.im.abs() <= 1e-12 * scale);
            // complex pair exactly when the gap is negative
            prop_assert_eq!(m.spectral_gap() < 0.0, eig.lambda1.im != 0.0);
        }
    }
}
