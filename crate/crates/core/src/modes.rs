//! Plane-wave eigenmodes of the unperturbed uniaxial medium.
//!
//! Scaling the field as E′ = ε′^{1/2} E turns the wave equation into the
//! real symmetric eigenproblem
//!
//! ```text
//! ε′^{-1/2} (k² 1 − k kᵀ) ε′^{-1/2} E′ = (ω²/c²) E′
//! ```
//!
//! whose three solutions are the longitudinal (λ = 0), ordinary
//! (λ = k²/ε_o) and extraordinary (λ = k′²/(ε_o ε_e)) modes, with the
//! stretched wavevector k′ = ε′^{1/2} k. Directions are stored as the
//! E-field polarization normalized so that v† ε′ v = 1.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{ensure_finite, Error, Result};
use crate::tensor::{permittivity_twisted_frame, Tensor3, UniaxialMedium};

/// k′_⊥/k′ below this is treated as propagation along the optic axis.
pub const OPTIC_AXIS_TOLERANCE: f64 = 1e-12;

/// Wavevector in cm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector(Vector3<f64>);

impl WaveVector {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self(Vector3::new(kx, ky, kz))
    }

    pub fn components(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    /// k′ = ε′^{1/2} k.
    pub fn stretched(&self, medium: &UniaxialMedium) -> Vector3<f64> {
        Vector3::new(
            medium.n_o() * self.0.x,
            medium.n_o() * self.0.y,
            medium.n_e() * self.0.z,
        )
    }

    /// |k′ × u_z|, the part of k′ perpendicular to the optic axis.
    pub fn stretched_transverse(&self, medium: &UniaxialMedium) -> f64 {
        let kp = self.stretched(medium);
        kp.x.hypot(kp.y)
    }

    fn validate(&self) -> Result<()> {
        for c in self.0.iter() {
            ensure_finite("wavevector component", *c)?;
        }
        if self.magnitude() == 0.0 {
            return Err(Error::domain("wavevector must be nonzero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    Longitudinal,
    Ordinary,
    Extraordinary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    pub label: ModeLabel,
    /// E-field polarization with the 1/√V factor removed.
    pub direction: Vector3<Complex64>,
    /// ω²/c², cm⁻².
    pub eigenvalue: f64,
}

impl EigenMode {
    /// Angular frequency c·√λ in rad/s.
    pub fn frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.eigenvalue.max(0.0).sqrt()
    }
}

/// The three modes, always in the order longitudinal, ordinary,
/// extraordinary.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenModeSet {
    pub modes: [EigenMode; 3],
}

impl EigenModeSet {
    pub fn longitudinal(&self) -> &EigenMode {
        &self.modes[0]
    }

    pub fn ordinary(&self) -> &EigenMode {
        &self.modes[1]
    }

    pub fn extraordinary(&self) -> &EigenMode {
        &self.modes[2]
    }

    pub fn iter(&self) -> impl Iterator<Item = &EigenMode> {
        self.modes.iter()
    }
}

/// Fabry–Pérot cavity of length `length` (cm) along u_y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    length: f64,
    medium: UniaxialMedium,
    mode_number: u32,
}

impl CavityConfig {
    /// Fundamental mode, k = π/L.
    pub fn new(length: f64, medium: UniaxialMedium) -> Result<Self> {
        Self::with_mode_number(length, medium, 1)
    }

    /// Experimental: higher longitudinal orders k = mπ/L. The coupling
    /// constant is only defined for the fundamental mode.
    pub fn with_mode_number(length: f64, medium: UniaxialMedium, mode_number: u32) -> Result<Self> {
        ensure_finite("cavity length", length)?;
        if length <= 0.0 {
            return Err(Error::domain(format!(
                "cavity length must be positive, got {length}"
            )));
        }
        if mode_number == 0 {
            return Err(Error::domain("mode number must be at least 1"));
        }
        Ok(Self {
            length,
            medium,
            mode_number,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn medium(&self) -> &UniaxialMedium {
        &self.medium
    }

    pub fn mode_number(&self) -> u32 {
        self.mode_number
    }

    pub fn wavevector(&self) -> WaveVector {
        WaveVector::new(
            0.0,
            self.mode_number as f64 * std::f64::consts::PI / self.length,
            0.0,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityFrequencies {
    pub omega_o: f64,
    pub omega_e: f64,
    /// ω_o − ω_e.
    pub delta_omega: f64,
}

fn inverse_sqrt_eps(medium: &UniaxialMedium) -> Vector3<f64> {
    Vector3::new(1.0 / medium.n_o(), 1.0 / medium.n_o(), 1.0 / medium.n_e())
}

/// ε′^{-1/2} (k² 1 − k kᵀ) ε′^{-1/2}, built entrywise so it is exactly
/// symmetric.
pub fn mode_matrix(k: &WaveVector, medium: &UniaxialMedium) -> Result<Tensor3> {
    k.validate()?;
    let s = inverse_sqrt_eps(medium);
    let kv = k.components();
    let k2 = kv.norm_squared();
    let m = Matrix3::from_fn(|i, j| {
        let delta = if i == j { k2 } else { 0.0 };
        s[i] * s[j] * (delta - kv[i] * kv[j])
    });
    Ok(Tensor3::from_matrix(m))
}

fn check_off_axis(k: &WaveVector, medium: &UniaxialMedium) -> Result<()> {
    let kp = k.stretched(medium).norm();
    if k.stretched_transverse(medium) <= OPTIC_AXIS_TOLERANCE * kp {
        return Err(Error::OpticAxisDegeneracy);
    }
    Ok(())
}

/// Largest-magnitude component made real and positive.
fn fix_phase(v: Vector3<Complex64>) -> Vector3<Complex64> {
    let mut best = 0;
    for i in 1..3 {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() == 0.0 {
        return v;
    }
    let phase = pivot.conj() / pivot.norm();
    v.map(|c| c * phase)
}

fn to_complex(v: Vector3<f64>) -> Vector3<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Closed-form modes.
///
/// The ordinary direction is ε′^{-1/2}(k′ × u_z)/k′_⊥; normalizing by k′_⊥
/// (rather than k′) is what makes v† ε′ v = 1 away from k ⟂ u_z.
pub fn solve_eigenmodes(k: &WaveVector, medium: &UniaxialMedium) -> Result<EigenModeSet> {
    k.validate()?;
    check_off_axis(k, medium)?;
    let s = inverse_sqrt_eps(medium);
    let kp = k.stretched(medium);
    let kp_norm = kp.norm();
    let kp_perp = k.stretched_transverse(medium);
    let uz = Vector3::z();

    let long = s.component_mul(&kp) / kp_norm;
    let ord_raw = kp.cross(&uz);
    let ord = s.component_mul(&ord_raw) / kp_perp;
    let ext = s.component_mul(&kp.cross(&ord_raw)) / (kp_norm * kp_perp);

    let k2 = k.components().norm_squared();
    Ok(EigenModeSet {
        modes: [
            EigenMode {
                label: ModeLabel::Longitudinal,
                direction: fix_phase(to_complex(long)),
                eigenvalue: 0.0,
            },
            EigenMode {
                label: ModeLabel::Ordinary,
                direction: fix_phase(to_complex(ord)),
                eigenvalue: k2 / medium.eps_o(),
            },
            EigenMode {
                label: ModeLabel::Extraordinary,
                direction: fix_phase(to_complex(ext)),
                eigenvalue: kp_norm * kp_norm / (medium.eps_o() * medium.eps_e()),
            },
        ],
    })
}

/// Numeric route: diagonalize [`mode_matrix`] directly.
///
/// The smallest eigenvalue is the longitudinal mode; of the two transverse
/// modes the ordinary one is the one with no field along the optic axis.
pub fn solve_eigenmodes_numeric(k: &WaveVector, medium: &UniaxialMedium) -> Result<EigenModeSet> {
    k.validate()?;
    check_off_axis(k, medium)?;
    let m = *mode_matrix(k, medium)?.matrix();
    let eig = m.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let s = inverse_sqrt_eps(medium);
    let mode = |idx: usize, label| {
        let scaled: Vector3<f64> = eig.eigenvectors.column(idx).into_owned();
        EigenMode {
            label,
            direction: fix_phase(to_complex(s.component_mul(&scaled))),
            eigenvalue: eig.eigenvalues[idx],
        }
    };

    let (t1, t2) = (order[1], order[2]);
    let z1 = eig.eigenvectors[(2, t1)].abs();
    let z2 = eig.eigenvectors[(2, t2)].abs();
    let (ord_idx, ext_idx) = if z1 <= z2 { (t1, t2) } else { (t2, t1) };

    Ok(EigenModeSet {
        modes: [
            mode(order[0], ModeLabel::Longitudinal),
            mode(ord_idx, ModeLabel::Ordinary),
            mode(ext_idx, ModeLabel::Extraordinary),
        ],
    })
}

/// ‖M v′ − λ v′‖ / (‖M‖ ‖v′‖) with v′ = ε′^{1/2} v.
pub fn eigen_residual(k: &WaveVector, medium: &UniaxialMedium, mode: &EigenMode) -> Result<f64> {
    let m = mode_matrix(k, medium)?
        .matrix()
        .map(|x| Complex64::new(x, 0.0));
    let sqrt_eps = Vector3::new(medium.n_o(), medium.n_o(), medium.n_e());
    let v = mode.direction.zip_map(&sqrt_eps, |c, s| c * s);
    let r = m * v - v * Complex64::new(mode.eigenvalue, 0.0);
    Ok(r.norm() / (m.norm() * v.norm()))
}

/// Angle between two directions modulo a global phase, in radians.
pub fn direction_angle(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> f64 {
    let a = a / Complex64::new(a.norm(), 0.0);
    let b = b / Complex64::new(b.norm(), 0.0);
    let overlap = b.dotc(&a);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let chord = (a - b * phase).norm();
    2.0 * (chord / 2.0).min(1.0).asin()
}

/// Gram matrix v_σ† ε′ v_σ′ of the three modes.
pub fn check_orthonormality(modes: &EigenModeSet, medium: &UniaxialMedium) -> Matrix3<Complex64> {
    let eps = permittivity_twisted_frame(medium)
        .matrix()
        .map(|x| Complex64::new(x, 0.0));
    Matrix3::from_fn(|i, j| {
        let vi = &modes.modes[i].direction;
        let vj = &modes.modes[j].direction;
        vi.dotc(&(eps * vj))
    })
}

/// max |G − 1| over all entries.
pub fn gram_deviation(gram: &Matrix3<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Ordinary and extraordinary cavity frequencies, ω_o = ck/n_o and
/// ω_e = ck′/(n_o n_e) with k′ = n_o k for k ∥ u_y.
pub fn cavity_frequencies(config: &CavityConfig) -> CavityFrequencies {
    let medium = config.medium();
    let (n_o, n_e) = (medium.n_o(), medium.n_e());
    let k = config.wavevector().magnitude();
    let k_stretched = n_o * k;
    let omega_o = SPEED_OF_LIGHT * k / n_o;
    let omega_e = SPEED_OF_LIGHT * k_stretched / (n_o * n_e);
    CavityFrequencies {
        omega_o,
        omega_e,
        delta_omega: omega_o - omega_e,
    }
}
