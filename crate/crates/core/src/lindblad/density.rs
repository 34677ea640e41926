use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// Polarization density matrix; index 0 = ordinary, 1 = extraordinary.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix2(Matrix2<Complex64>);

impl DensityMatrix2 {
    /// Validated construction: Hermitian and unit trace within 1e-12,
    /// eigenvalues ≥ −1e-10.
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let rho = Self(m);
        if rho.hermiticity_defect() > HERMITIAN_TOL {
            return Err(Error::domain(format!(
                "density matrix is not Hermitian (defect {:e})",
                rho.hermiticity_defect()
            )));
        }
        if (rho.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain(format!(
                "density matrix trace is {}, expected 1",
                rho.trace()
            )));
        }
        if rho.min_eigenvalue() < -POSITIVITY_TOL {
            return Err(Error::domain(format!(
                "density matrix has negative eigenvalue {:e}",
                rho.min_eigenvalue()
            )));
        }
        Ok(rho)
    }

    /// No validation; for intermediate integrator states and derivatives.
    pub fn from_matrix_unchecked(m: Matrix2<Complex64>) -> Self {
        Self(m)
    }

    /// Entries (ρ_oo, ρ_oe) on the first row; ρ_ee is fixed by the trace
    /// and ρ_eo by Hermiticity.
    pub fn from_populations(rho_oo: f64, rho_oe: Complex64) -> Result<Self> {
        Self::new(Matrix2::new(
            Complex64::new(rho_oo, 0.0),
            rho_oe,
            rho_oe.conj(),
            Complex64::new(1.0 - rho_oo, 0.0),
        ))
    }

    /// Diagonal polarization, an equal-weight coherent superposition:
    /// all four entries 1/2.
    pub fn diagonal_polarization() -> Self {
        Self(Matrix2::from_element(Complex64::new(0.5, 0.0)))
    }

    pub fn ordinary() -> Self {
        Self(Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ))
    }

    pub fn extraordinary() -> Self {
        Self(Matrix2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ))
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn rho_oo(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn rho_ee(&self) -> f64 {
        self.0[(1, 1)].re
    }

    pub fn rho_oe(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn rho_eo(&self) -> Complex64 {
        self.0[(1, 0)]
    }

    pub fn trace(&self) -> f64 {
        (self.0[(0, 0)] + self.0[(1, 1)]).re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Smaller eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let a = self.0[(0, 0)].re;
        let d = self.0[(1, 1)].re;
        let b = 0.5 * (self.0[(0, 1)] + self.0[(1, 0)].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        mean - radius
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn scale_trace(&mut self) {
        let tr = self.trace();
        self.0 /= Complex64::new(tr, 0.0);
    }
}

impl fmt::Debug for DensityMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMatrix2")
            .field("rho_oo", &self.rho_oo())
            .field("rho_ee", &self.rho_ee())
            .field("rho_oe", &self.rho_oe())
            .finish()
    }
}
