use std::f64::consts::PI;

use crate::constants::{BOLTZMANN, HBAR};
use crate::diagnostics::Warning;
use crate::error::{ensure_finite, Error, Result};

/// Bath temperature, either absolute or as the dimensionless βΔω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Kelvin(f64),
    BetaDeltaOmega(f64),
}

impl Temperature {
    /// Inverse temperature in s/rad (ħβ in ordinary units); infinite at T = 0.
    pub fn inverse(&self, delta_omega: f64) -> Result<f64> {
        match *self {
            Temperature::Kelvin(t) => {
                ensure_finite("temperature", t)?;
                if t < 0.0 {
                    return Err(Error::domain(format!("temperature must be ≥ 0 K, got {t}")));
                }
                Ok(if t == 0.0 {
                    f64::INFINITY
                } else {
                    HBAR / (BOLTZMANN * t)
                })
            }
            Temperature::BetaDeltaOmega(x) => {
                if x.is_nan() || x <= 0.0 {
                    return Err(Error::domain(format!("βΔω must be positive, got {x}")));
                }
                if delta_omega <= 0.0 {
                    return Err(Error::domain("βΔω requires Δω > 0"));
                }
                Ok(x / delta_omega)
            }
        }
    }
}

/// Bose occupation 1/(e^{βω} − 1) with β in s/rad; zero at β = ∞.
pub fn bose_from_beta(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        0.0
    } else {
        1.0 / (beta * omega).exp_m1()
    }
}

/// n(Δω) = 1/(e^{ħΔω/k_B T} − 1); exactly 0 at T = 0.
pub fn bose_occupation(delta_omega: f64, kelvin: f64) -> Result<f64> {
    ensure_finite("delta_omega", delta_omega)?;
    if delta_omega <= 0.0 {
        return Err(Error::domain(format!(
            "Bose occupation diverges for Δω ≤ 0 (got {delta_omega})"
        )));
    }
    let beta = Temperature::Kelvin(kelvin).inverse(delta_omega)?;
    Ok(bose_from_beta(beta, delta_omega))
}

/// Shape of G(ω)².
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralProfile {
    /// Constant G(ω)² (rad/s) on the support.
    Flat { g2_density: f64 },
    /// G²·(1/π)·κ/((ω − ω_c)² + κ²): single-mode weight G² spread over a
    /// mechanical line of half-width κ.
    Lorentzian {
        weight: f64,
        center: f64,
        width: f64,
    },
}

/// Continuum coupling density G(ω)², zero outside [ω_min, ω_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpectrum {
    profile: SpectralProfile,
    omega_min: f64,
    omega_max: f64,
}

impl CouplingSpectrum {
    pub fn new(profile: SpectralProfile, omega_min: f64, omega_max: f64) -> Result<Self> {
        ensure_finite("omega_min", omega_min)?;
        ensure_finite("omega_max", omega_max)?;
        if omega_min < 0.0 {
            return Err(Error::domain(format!("ω_min must be ≥ 0, got {omega_min}")));
        }
        if omega_max <= omega_min {
            return Err(Error::domain(format!(
                "ω_max ({omega_max}) must exceed ω_min ({omega_min})"
            )));
        }
        match profile {
            SpectralProfile::Flat { g2_density } => {
                ensure_finite("g2_density", g2_density)?;
                if g2_density < 0.0 {
                    return Err(Error::domain("G(ω)² must be non-negative"));
                }
            }
            SpectralProfile::Lorentzian {
                weight,
                center,
                width,
            } => {
                ensure_finite("weight", weight)?;
                ensure_finite("center", center)?;
                ensure_finite("width", width)?;
                if weight < 0.0 {
                    return Err(Error::domain("Lorentzian weight G² must be non-negative"));
                }
                if width <= 0.0 {
                    return Err(Error::domain(format!(
                        "Lorentzian width must be positive, got {width}"
                    )));
                }
            }
        }
        Ok(Self {
            profile,
            omega_min,
            omega_max,
        })
    }

    /// Flat density G²·D with D = 1/ω_max over [ω_min, ω_max].
    pub fn flat_from_single_mode(coupling: f64, omega_min: f64, omega_max: f64) -> Result<Self> {
        Self::new(
            SpectralProfile::Flat {
                g2_density: coupling * coupling / omega_max,
            },
            omega_min,
            omega_max,
        )
    }

    /// Lorentzian around `center` with quality factor Q = center/κ.
    pub fn lorentzian_from_quality(
        coupling: f64,
        center: f64,
        quality: f64,
        omega_min: f64,
        omega_max: f64,
    ) -> Result<Self> {
        if quality.is_nan() || quality <= 0.0 {
            return Err(Error::domain(format!(
                "quality factor must be positive, got {quality}"
            )));
        }
        Self::new(
            SpectralProfile::Lorentzian {
                weight: coupling * coupling,
                center,
                width: center / quality,
            },
            omega_min,
            omega_max,
        )
    }

    pub fn zero(omega_min: f64, omega_max: f64) -> Result<Self> {
        Self::new(
            SpectralProfile::Flat { g2_density: 0.0 },
            omega_min,
            omega_max,
        )
    }

    pub fn profile(&self) -> &SpectralProfile {
        &self.profile
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    /// G(ω)² on the support, zero outside.
    pub fn coupling_density(&self, omega: f64) -> f64 {
        if omega < self.omega_min || omega > self.omega_max {
            return 0.0;
        }
        self.profile_value(omega)
    }

    fn profile_value(&self, omega: f64) -> f64 {
        match self.profile {
            SpectralProfile::Flat { g2_density } => g2_density,
            SpectralProfile::Lorentzian {
                weight,
                center,
                width,
            } => {
                let d = omega - center;
                weight * width / (PI * (d * d + width * width))
            }
        }
    }

    /// Value just inside the lower edge.
    pub(crate) fn density_at_lower_edge(&self) -> f64 {
        self.profile_value(self.omega_min)
    }

    pub fn supports(&self, omega: f64) -> bool {
        omega > self.omega_min && omega < self.omega_max
    }
}

/// Bath state: spectrum plus inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub spectrum: CouplingSpectrum,
    /// s/rad; infinite at zero temperature.
    pub beta: f64,
}

impl BathParams {
    pub fn new(
        spectrum: CouplingSpectrum,
        temperature: Temperature,
        delta_omega: f64,
    ) -> Result<Self> {
        let beta = temperature.inverse(delta_omega)?;
        Ok(Self { spectrum, beta })
    }

    pub fn zero_temperature(spectrum: CouplingSpectrum) -> Self {
        Self {
            spectrum,
            beta: f64::INFINITY,
        }
    }

    pub fn occupation(&self, omega: f64) -> f64 {
        bose_from_beta(self.beta, omega)
    }

    pub fn omega_max(&self) -> f64 {
        self.spectrum.omega_max
    }
}

/// γ = 2π·G(Δω)². Outside the spectral support there are no resonant bath
/// modes: returns 0 together with an [`Warning::OffResonantBath`].
pub fn decay_rate(spectrum: &CouplingSpectrum, delta_omega: f64) -> (f64, Option<Warning>) {
    if !spectrum.supports(delta_omega) {
        let w = Warning::OffResonantBath {
            delta_omega,
            omega_min: spectrum.omega_min,
            omega_max: spectrum.omega_max,
        }
        .emit();
        return (0.0, Some(w));
    }
    (2.0 * PI * spectrum.coupling_density(delta_omega), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUARTZ_DW: f64 = 3.521_353_442_427_5e12;
    const QUARTZ_G: f64 = -4.115_822_914_929_888e10;

    #[test]
    fn occupation_examples() {
        assert_eq!(bose_occupation(QUARTZ_DW, 0.0).unwrap(), 0.0);
        let n = bose_occupation(QUARTZ_DW, 300.0).unwrap();
        assert!((n - 10.66).abs() < 5e-3, "{n}");
        let x = HBAR * QUARTZ_DW / (BOLTZMANN * 300.0);
        assert!((x - 0.0897).abs() < 1e-4);

        let beta = Temperature::BetaDeltaOmega(2f64.ln()).inverse(5.0).unwrap();
        assert!((bose_from_beta(beta, 5.0) - 1.0).abs() < 1e-15);

        assert!(bose_occupation(0.0, 300.0).is_err());
        assert!(bose_occupation(-1.0, 300.0).is_err());
        assert!(bose_occupation(1.0, -3.0).is_err());
    }

    #[test]
    fn occupation_increases_with_temperature() {
        let ns: Vec<f64> = [50.0, 150.0, 300.0]
            .iter()
            .map(|&t| bose_occupation(QUARTZ_DW, t).unwrap())
            .collect();
        assert!(ns[0] < ns[1] && ns[1] < ns[2]);
    }

    #[test]
    fn decay_rate_examples() {
        let zero = CouplingSpectrum::zero(0.0, 2.0 * QUARTZ_DW).unwrap();
        assert_eq!(decay_rate(&zero, QUARTZ_DW), (0.0, None));

        let kappa = 0.37;
        let s = CouplingSpectrum::new(
            SpectralProfile::Lorentzian {
                weight: 0.04,
                center: 10.0,
                width: kappa,
            },
            0.0,
            20.0,
        )
        .unwrap();
        let (gamma, w) = decay_rate(&s, 10.0);
        assert!(w.is_none());
        assert!((gamma - 2.0 * 0.04 / kappa).abs() < 1e-15);

        let s = CouplingSpectrum::lorentzian_from_quality(
            QUARTZ_G,
            QUARTZ_DW,
            1000.0,
            0.0,
            2.0 * QUARTZ_DW,
        )
        .unwrap();
        let (gamma, _) = decay_rate(&s, QUARTZ_DW);
        assert!((gamma / 9.6e11 - 1.0).abs() < 5e-3, "{gamma}");
    }

    #[test]
    fn off_support_decay_warns() {
        let s = CouplingSpectrum::flat_from_single_mode(1.0, 2.0, 5.0).unwrap();
        let (gamma, w) = decay_rate(&s, 1.0);
        assert_eq!(gamma, 0.0);
        assert!(matches!(w, Some(Warning::OffResonantBath { .. })));
    }

    #[test]
    fn spectrum_validation() {
        assert!(CouplingSpectrum::flat_from_single_mode(1.0, 3.0, 2.0).is_err());
        assert!(CouplingSpectrum::flat_from_single_mode(1.0, -1.0, 2.0).is_err());
        assert!(CouplingSpectrum::lorentzian_from_quality(1.0, 1.0, 0.0, 0.0, 2.0).is_err());
        assert!(CouplingSpectrum::new(
            SpectralProfile::Lorentzian {
                weight: 1.0,
                center: 1.0,
                width: 0.0
            },
            0.0,
            2.0
        )
        .is_err());
    }
}
