//! Permittivity tensors of a uniaxial medium twisted about the cavity axis.
//!
//! The twisted frame carries the optic axis along `u'_z`; the laboratory
//! frame is reached by a rotation in the x–z plane by the local twist angle
//! θ(y) = θ₀·y/L. To first order in θ the rotated tensor is the unrotated one
//! plus the perturbation δε·θ·Λ₄, where Λ₄ is the real symmetric Gell-Mann
//! generator coupling x and z.

use std::ops::{Add, Mul, Sub};

use nalgebra::Matrix3;

use crate::diagnostics::Warning;
use crate::error::{ensure_finite, Error, Result};

/// Above this |θ₀| the first-order tensor is flagged as unreliable.
pub const LARGE_TWIST_THRESHOLD: f64 = 0.1;

/// Whether a medium must be positive uniaxial (ε_e > ε_o).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    PositiveUniaxial,
    /// Accepts isotropic and negative-uniaxial media. Used for degenerate
    /// limits in tests and parameter sweeps.
    Relaxed,
}

/// Principal relative permittivities of a uniaxial crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialMedium {
    eps_o: f64,
    eps_e: f64,
}

impl UniaxialMedium {
    /// Positive-uniaxial medium; rejects ε_e ≤ ε_o.
    pub fn new(eps_o: f64, eps_e: f64) -> Result<Self> {
        Self::with_strictness(eps_o, eps_e, Strictness::PositiveUniaxial)
    }

    pub fn with_strictness(eps_o: f64, eps_e: f64, strictness: Strictness) -> Result<Self> {
        ensure_finite("eps_o", eps_o)?;
        ensure_finite("eps_e", eps_e)?;
        if eps_o <= 0.0 || eps_e <= 0.0 {
            return Err(Error::domain(format!(
                "permittivities must be positive, got eps_o={eps_o}, eps_e={eps_e}"
            )));
        }
        if strictness == Strictness::PositiveUniaxial && eps_e <= eps_o {
            return Err(Error::domain(format!(
                "medium must be positive uniaxial (eps_e > eps_o), got eps_o={eps_o}, eps_e={eps_e}"
            )));
        }
        Ok(Self { eps_o, eps_e })
    }

    pub fn from_indices(n_o: f64, n_e: f64, strictness: Strictness) -> Result<Self> {
        Self::with_strictness(n_o * n_o, n_e * n_e, strictness)
    }

    /// Quartz, n_o = 1.547 and n_e = 1.556.
    pub fn quartz() -> Self {
        let (n_o, n_e) = crate::constants::QUARTZ_INDICES;
        Self {
            eps_o: n_o * n_o,
            eps_e: n_e * n_e,
        }
    }

    pub fn eps_o(&self) -> f64 {
        self.eps_o
    }

    pub fn eps_e(&self) -> f64 {
        self.eps_e
    }

    pub fn n_o(&self) -> f64 {
        self.eps_o.sqrt()
    }

    pub fn n_e(&self) -> f64 {
        self.eps_e.sqrt()
    }

    /// δε = ε_e − ε_o.
    pub fn delta_eps(&self) -> f64 {
        self.eps_e - self.eps_o
    }

    /// 1/n_o² − 1/n_e², the birefringence factor of the coupling.
    pub fn inverse_eps_difference(&self) -> f64 {
        1.0 / self.eps_o - 1.0 / self.eps_e
    }
}

/// Real 3×3 tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor3(Matrix3<f64>);

impl Tensor3 {
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Self(Matrix3::from_fn(|i, j| rows[i][j]))
    }

    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Self(Matrix3::from_diagonal(&nalgebra::Vector3::new(a, b, c)))
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    /// Λ₄: ones in the xz and zx slots.
    pub fn lambda4() -> Self {
        Self::from_rows([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    }

    /// i·Λ₅, which is real and antisymmetric. Λ₅ itself has entries −i (xz)
    /// and +i (zx).
    pub fn lambda5_times_i() -> Self {
        Self::from_rows([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        let m = &self.0;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Largest |a_ij − a_ji|.
    pub fn asymmetry(&self) -> f64 {
        (self.0 - self.0.transpose()).amax()
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> [f64; 3] {
        let sym = (self.0 + self.0.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: Tensor3) -> Tensor3 {
        Tensor3(self.0 + rhs.0)
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: Tensor3) -> Tensor3 {
        Tensor3(self.0 - rhs.0)
    }
}

impl Mul for Tensor3 {
    type Output = Tensor3;
    fn mul(self, rhs: Tensor3) -> Tensor3 {
        Tensor3(self.0 * rhs.0)
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Tensor3;
    fn mul(self, rhs: f64) -> Tensor3 {
        Tensor3(self.0 * rhs)
    }
}

/// Linear twist along the cavity: θ(y) = θ₀·y/L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistProfile {
    theta_0: f64,
    length: f64,
}

impl TwistProfile {
    /// `length` in cm. Returns a [`Warning::LargeTwist`] when |θ₀| exceeds
    /// [`LARGE_TWIST_THRESHOLD`].
    pub fn new(theta_0: f64, length: f64) -> Result<(Self, Option<Warning>)> {
        ensure_finite("theta_0", theta_0)?;
        ensure_finite("length", length)?;
        if length <= 0.0 {
            return Err(Error::domain(format!(
                "cavity length must be positive, got {length}"
            )));
        }
        let warning = (theta_0.abs() > LARGE_TWIST_THRESHOLD).then(|| {
            Warning::LargeTwist {
                theta_0,
                threshold: LARGE_TWIST_THRESHOLD,
            }
            .emit()
        });
        Ok((Self { theta_0, length }, warning))
    }

    pub fn theta_0(&self) -> f64 {
        self.theta_0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn theta_at(&self, y: f64) -> f64 {
        self.theta_0 * y / self.length
    }
}

/// Rotation in the x–z plane: rows (cosθ, 0, sinθ), (0, 1, 0), (−sinθ, 0, cosθ).
pub fn rotation_matrix(theta: f64) -> Result<Tensor3> {
    ensure_finite("theta", theta)?;
    let (s, c) = theta.sin_cos();
    Ok(Tensor3::from_rows([
        [c, 0.0, s],
        [0.0, 1.0, 0.0],
        [-s, 0.0, c],
    ]))
}

/// ε′ = diag(ε_o, ε_o, ε_e) in the frame co-rotating with the twist.
pub fn permittivity_twisted_frame(medium: &UniaxialMedium) -> Tensor3 {
    Tensor3::diagonal(medium.eps_o, medium.eps_o, medium.eps_e)
}

/// ε = R(θ) ε′ Rᵀ(θ), written out entrywise so the result is exactly
/// symmetric.
pub fn permittivity_lab_exact(medium: &UniaxialMedium, theta: f64) -> Result<Tensor3> {
    ensure_finite("theta", theta)?;
    let (s, c) = theta.sin_cos();
    let (eo, ee) = (medium.eps_o, medium.eps_e);
    let xx = eo * c * c + ee * s * s;
    let zz = eo * s * s + ee * c * c;
    let xz = (ee - eo) * s * c;
    Ok(Tensor3::from_rows([
        [xx, 0.0, xz],
        [0.0, eo, 0.0],
        [xz, 0.0, zz],
    ]))
}

/// ε′ + δε·θ·Λ₄.
pub fn permittivity_lab_first_order(medium: &UniaxialMedium, theta: f64) -> Result<Tensor3> {
    Ok(permittivity_twisted_frame(medium) + perturbation_tensor(medium, theta)?)
}

/// The twist perturbation δε·θ·Λ₄.
pub fn perturbation_tensor(medium: &UniaxialMedium, theta: f64) -> Result<Tensor3> {
    ensure_finite("theta", theta)?;
    Ok(Tensor3::lambda4() * (medium.delta_eps() * theta))
}

/// (1 + iθΛ₅) ε′ (1 − iθΛ₅), the intermediate form of the first-order
/// expansion. Only used to cross-check [`permittivity_lab_first_order`].
pub fn permittivity_generator_expansion(medium: &UniaxialMedium, theta: f64) -> Result<Tensor3> {
    ensure_finite("theta", theta)?;
    let k = Tensor3::lambda5_times_i();
    let left = Tensor3::identity() + k * theta;
    let right = Tensor3::identity() - k * theta;
    Ok(left * permittivity_twisted_frame(medium) * right)
}

/// ‖exact − first-order‖_F / ‖ε′‖_F.
pub fn first_order_relative_error(medium: &UniaxialMedium, theta: f64) -> Result<f64> {
    let diff =
        permittivity_lab_exact(medium, theta)? - permittivity_lab_first_order(medium, theta)?;
    Ok(diff.frobenius_norm() / permittivity_twisted_frame(medium).frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn max_abs_diff(a: &Tensor3, b: &Tensor3) -> f64 {
        (*a - *b).matrix().amax()
    }

    #[test]
    fn medium_validation() {
        assert!(UniaxialMedium::new(2.0, 3.0).is_ok());
        assert!(UniaxialMedium::new(3.0, 2.0).is_err());
        assert!(UniaxialMedium::new(2.0, 2.0).is_err());
        assert!(UniaxialMedium::new(-1.0, 2.0).is_err());
        assert!(UniaxialMedium::new(f64::NAN, 2.0).is_err());
        assert!(UniaxialMedium::with_strictness(2.0, 2.0, Strictness::Relaxed).is_ok());
        assert!(UniaxialMedium::with_strictness(3.0, 2.0, Strictness::Relaxed).is_ok());
        assert!(UniaxialMedium::with_strictness(0.0, 2.0, Strictness::Relaxed).is_err());
    }

    #[test]
    fn rotation_examples() {
        let r0 = rotation_matrix(0.0).unwrap();
        assert_eq!(r0, Tensor3::identity());

        let r = rotation_matrix(FRAC_PI_2).unwrap();
        let expected = Tensor3::from_rows([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]]);
        assert!(max_abs_diff(&r, &expected) < 1e-15);

        let r = rotation_matrix(0.3).unwrap();
        assert_close(r.determinant(), 1.0, 1e-14);
        assert!(max_abs_diff(&(r * r.transpose()), &Tensor3::identity()) < 1e-14);

        assert!(rotation_matrix(f64::INFINITY).is_err());
    }

    #[test]
    fn twisted_frame_examples() {
        let q = permittivity_twisted_frame(&UniaxialMedium::quartz());
        assert_close(q.get(0, 0), 2.393209, 1e-12);
        assert_close(q.get(1, 1), 2.393209, 1e-12);
        assert_close(q.get(2, 2), 2.421136, 1e-12);
        assert_eq!(q.asymmetry(), 0.0);

        let m = UniaxialMedium::new(2.0, 3.0).unwrap();
        assert_eq!(
            permittivity_twisted_frame(&m),
            Tensor3::diagonal(2.0, 2.0, 3.0)
        );

        let vac = UniaxialMedium::with_strictness(1.0, 1.0, Strictness::Relaxed).unwrap();
        assert_eq!(permittivity_twisted_frame(&vac), Tensor3::identity());
    }

    #[test]
    fn lab_exact_examples() {
        let q = UniaxialMedium::quartz();
        let e0 = permittivity_lab_exact(&q, 0.0).unwrap();
        assert_eq!(e0, permittivity_twisted_frame(&q));

        // Direct R ε′ Rᵀ product as the independent route.
        let r = rotation_matrix(FRAC_PI_2).unwrap();
        let product = r * permittivity_twisted_frame(&q) * r.transpose();
        let e = permittivity_lab_exact(&q, FRAC_PI_2).unwrap();
        assert!(max_abs_diff(&e, &product) < 1e-15);
        assert!(max_abs_diff(&e, &Tensor3::diagonal(q.eps_e(), q.eps_o(), q.eps_o())) < 1e-15);

        let e = permittivity_lab_exact(&q, 0.01).unwrap();
        assert_close(e.get(0, 2), q.delta_eps() * 0.009_999_333_346_666_7, 1e-17);
        assert_eq!(e.get(0, 2), e.get(2, 0));
    }

    #[test]
    fn first_order_examples() {
        let q = UniaxialMedium::quartz();
        assert_eq!(
            permittivity_lab_first_order(&q, 0.0).unwrap(),
            permittivity_twisted_frame(&q)
        );

        let err_small = {
            let d = permittivity_lab_exact(&q, 1e-3).unwrap()
                - permittivity_lab_first_order(&q, 1e-3).unwrap();
            d.frobenius_norm()
        };
        let max_eps = q.eps_e();
        assert!(err_small <= 2.0 * max_eps * 1e-6, "{err_small}");

        let err = |t: f64| {
            (permittivity_lab_exact(&q, t).unwrap() - permittivity_lab_first_order(&q, t).unwrap())
                .frobenius_norm()
        };
        let ratio = err(1e-2) / err(1e-3);
        assert!((99.0..=101.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn perturbation_examples() {
        let q = UniaxialMedium::quartz();
        assert_eq!(perturbation_tensor(&q, 0.0).unwrap(), Tensor3::zero());

        let p = perturbation_tensor(&q, 0.05).unwrap();
        assert_close(p.get(0, 2), 1.39635e-3, 1e-15);
        assert_close(p.get(2, 0), 1.39635e-3, 1e-15);
        assert_eq!(p.get(0, 0), 0.0);
        assert_eq!(p.get(1, 1), 0.0);

        let iso = UniaxialMedium::with_strictness(2.5, 2.5, Strictness::Relaxed).unwrap();
        assert_eq!(perturbation_tensor(&iso, 0.7).unwrap(), Tensor3::zero());
    }

    #[test]
    fn generator_expansion_matches_first_order() {
        let q = UniaxialMedium::quartz();
        for &theta in &[1e-4, 1e-3, 1e-2] {
            let a = permittivity_generator_expansion(&q, theta).unwrap();
            let b = permittivity_lab_first_order(&q, theta).unwrap();
            // The remainder is θ² K ε′ Kᵀ, bounded by θ² max(ε).
            assert!(max_abs_diff(&a, &b) <= theta * theta * q.eps_e() * 1.0001);
        }
    }

    #[test]
    fn twist_profile() {
        let (p, w) = TwistProfile::new(0.02, 1e-4).unwrap();
        assert!(w.is_none());
        assert_close(p.theta_at(0.5e-4), 0.01, 1e-15);
        let (_, w) = TwistProfile::new(0.2, 1e-4).unwrap();
        assert!(matches!(w, Some(Warning::LargeTwist { .. })));
        assert!(TwistProfile::new(0.01, 0.0).is_err());
    }
}
