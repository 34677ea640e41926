//! Soft validity warnings.
//!
//! These never stop a computation. They flag inputs that leave the regime in
//! which the model's approximations (small twist, weak coupling, Markovian
//! bath) hold. Every warning is also sent to the `log` facade when created.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// First-order expansion error grows as θ₀².
    LargeTwist { theta_0: f64, threshold: f64 },
    /// |G| is not small compared to Δω.
    StrongCoupling { ratio: f64, threshold: f64 },
    /// Δω = 0: the two polarization levels are degenerate.
    DegenerateLevels,
    /// The transition frequency lies outside the bath's spectral support.
    OffResonantBath {
        delta_omega: f64,
        omega_min: f64,
        omega_max: f64,
    },
    /// Relaxation is not slow compared to the level splitting.
    NonMarkovian {
        relaxation_rate: f64,
        delta_omega: f64,
        threshold: f64,
    },
}

impl Warning {
    pub(crate) fn emit(self) -> Self {
        log::warn!("{self}");
        self
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::LargeTwist { theta_0, threshold } => write!(
                f,
                "twist angle {theta_0} rad exceeds {threshold}; first-order expansion degrades as θ²"
            ),
            Warning::StrongCoupling { ratio, threshold } => write!(
                f,
                "|G|/Δω = {ratio:.4} exceeds {threshold}; two-level and rotating-wave approximations are questionable"
            ),
            Warning::DegenerateLevels => {
                write!(f, "Δω = 0: ordinary and extraordinary modes are degenerate")
            }
            Warning::OffResonantBath {
                delta_omega,
                omega_min,
                omega_max,
            } => write!(
                f,
                "Δω = {delta_omega:e} rad/s lies outside the bath support [{omega_min:e}, {omega_max:e}]; no resonant decay"
            ),
            Warning::NonMarkovian {
                relaxation_rate,
                delta_omega,
                threshold,
            } => write!(
                f,
                "relaxation rate (2n+1)γ = {relaxation_rate:e} rad/s exceeds {threshold}·Δω (Δω = {delta_omega:e}); weak-coupling master equation is outside its validity regime"
            ),
        }
    }
}
