//! Turns a [`ScenarioConfig`] into library objects.

use num_complex::Complex64;
use twistcav::hamiltonian::{two_level_params, CouplingOptions, TwoLevelParams};
use twistcav::lindblad::{
    derive_dynamics, BathParams, CouplingSpectrum, DensityMatrix2, DerivedDynamics,
    DynamicsOptions, Temperature,
};
use twistcav::modes::{cavity_frequencies, CavityConfig, CavityFrequencies};
use twistcav::tensor::{Strictness, UniaxialMedium};
use twistcav::Warning;

use crate::config::{InitialState, Preset, ScenarioConfig, SpectrumKind};
use crate::error::{CliError, Context};

pub fn medium(cfg: &ScenarioConfig) -> Result<UniaxialMedium, CliError> {
    let strictness = if cfg.medium.strict {
        Strictness::PositiveUniaxial
    } else {
        Strictness::Relaxed
    };
    UniaxialMedium::from_indices(cfg.medium.n_o, cfg.medium.n_e, strictness).context("medium")
}

pub fn cavity(cfg: &ScenarioConfig) -> Result<CavityConfig, CliError> {
    CavityConfig::new(cfg.cavity_length, medium(cfg)?).context("cavity_length")
}

fn mechanical_frequency(cfg: &ScenarioConfig, delta_omega: f64) -> Result<f64, CliError> {
    match (cfg.omega_0, cfg.resonant) {
        (Some(_), Some(true)) => Err(CliError::Config(
            "set either `omega_0` or `resonant: true`, not both".into(),
        )),
        (Some(w), _) => Ok(w),
        (None, Some(false)) => Err(CliError::Config(
            "`resonant` is false but no `omega_0` is given".into(),
        )),
        (None, _) => Ok(delta_omega),
    }
}

pub fn temperature(cfg: &ScenarioConfig) -> Result<Temperature, CliError> {
    match (cfg.temperature, cfg.beta_delta_omega) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "set either `temperature` or `beta_delta_omega`, not both".into(),
        )),
        (Some(t), None) => Ok(Temperature::Kelvin(t)),
        (None, Some(x)) => Ok(Temperature::BetaDeltaOmega(x)),
        (None, None) => Err(CliError::Config(
            "missing `temperature` (K) or `beta_delta_omega`".into(),
        )),
    }
}

pub fn spectrum(
    cfg: &ScenarioConfig,
    two_level: &TwoLevelParams,
) -> Result<CouplingSpectrum, CliError> {
    let s = &cfg.spectrum;
    let omega_min = s.omega_min.unwrap_or(0.0);
    let omega_max = s.omega_max.unwrap_or(2.0 * two_level.delta_omega);
    let g = two_level.coupling;
    match s.kind {
        SpectrumKind::Zero => CouplingSpectrum::zero(omega_min, omega_max).context("spectrum"),
        SpectrumKind::Flat => {
            CouplingSpectrum::flat_from_single_mode(g, omega_min, omega_max).context("spectrum")
        }
        SpectrumKind::Lorentzian => {
            let center = two_level.omega_0;
            match (s.quality, s.kappa) {
                (Some(q), None) => {
                    CouplingSpectrum::lorentzian_from_quality(g, center, q, omega_min, omega_max)
                        .context("spectrum")
                }
                (None, Some(kappa)) => CouplingSpectrum::lorentzian_from_quality(
                    g,
                    center,
                    center / kappa,
                    omega_min,
                    omega_max,
                )
                .context("spectrum"),
                _ => Err(CliError::Config(
                    "lorentzian spectrum needs exactly one of `spectrum.quality` or `spectrum.kappa`".into(),
                )),
            }
        }
    }
}

pub fn initial_state(cfg: &ScenarioConfig) -> Result<DensityMatrix2, CliError> {
    match &cfg.initial_state {
        InitialState::Preset(Preset::Diagonal) => Ok(DensityMatrix2::diagonal_polarization()),
        InitialState::Preset(Preset::Ordinary) => Ok(DensityMatrix2::ordinary()),
        InitialState::Preset(Preset::Extraordinary) => Ok(DensityMatrix2::extraordinary()),
        InitialState::Explicit { matrix } => {
            let e = |r: usize, c: usize| Complex64::new(matrix[r][c][0], matrix[r][c][1]);
            let m = nalgebra::Matrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1));
            DensityMatrix2::new(m).context("initial_state")
        }
    }
}

/// Everything the commands share.
pub struct Scenario {
    pub frequencies: CavityFrequencies,
    pub two_level: TwoLevelParams,
    pub bath: BathParams,
    pub dynamics: DerivedDynamics,
    pub warnings: Vec<Warning>,
}

impl Scenario {
    pub fn build(cfg: &ScenarioConfig, include_shift: bool) -> Result<Self, CliError> {
        let cav = cavity(cfg)?;
        let frequencies = cavity_frequencies(&cav);
        let omega_0 = mechanical_frequency(cfg, frequencies.delta_omega)?;
        let two_level = two_level_params(&cav, omega_0, CouplingOptions::default())
            .context("two-level parameters")?;
        let spectrum = spectrum(cfg, &two_level)?;
        let bath = BathParams::new(spectrum, temperature(cfg)?, frequencies.delta_omega)
            .context("temperature")?;
        let options = DynamicsOptions {
            include_shift,
            gamma_override: cfg.spectrum.gamma_override,
            ..Default::default()
        };
        let dynamics = derive_dynamics(&two_level, &bath, &options).context("master equation")?;
        let mut warnings = two_level.warnings.clone();
        warnings.extend(dynamics.warnings.iter().cloned());
        Ok(Self {
            frequencies,
            two_level,
            bath,
            dynamics,
            warnings,
        })
    }
}
