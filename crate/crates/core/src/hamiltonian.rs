//! Torsional optomechanical coupling and the two-level ⊗ oscillator
//! Hamiltonian.
//!
//! All Hamiltonian quantities are angular frequencies (energy/ħ). The
//! photonic two-level system has the ordinary mode as its upper level:
//! σ_z = |o⟩⟨o| − |e⟩⟨e| and σ₊ = |o⟩⟨e|. Basis index 0 is always the
//! ordinary mode.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::constants::{GAUSSIAN_ENERGY_FACTOR, HBAR, SPEED_OF_LIGHT};
use crate::diagnostics::Warning;
use crate::error::{ensure_finite, Error, Result};
use crate::modes::{cavity_frequencies, CavityConfig};
use crate::tensor::UniaxialMedium;

/// Default |G|/Δω above which the two-level reduction is flagged.
pub const STRONG_COUPLING_THRESHOLD: f64 = 0.1;

/// Ratio between the coupling constant G and the coefficient obtained by
/// substituting the field-amplitude correspondence C_σ ↔ i√(ħω_σ/2) â_σ and
/// θ₀ ↦ (b̂ + b̂†)/√2 into the classical interaction energy. The closed form
/// for G carries mode-volume bookkeeping that the substitution alone does
/// not reproduce; the two routes agree up to exactly this factor.
pub const SUBSTITUTION_BOOKKEEPING_FACTOR: f64 = 2.0;

/// Classical interaction energy (erg) between the twist and the two cavity
/// modes with complex amplitudes `c_e`, `c_o`:
/// −(g/2)(1/n_o² − 1/n_e²) θ₀ (C_e* C_o + C_o* C_e), g = (8π)⁻¹.
pub fn interaction_energy(
    c_e: Complex64,
    c_o: Complex64,
    medium: &UniaxialMedium,
    theta_0: f64,
) -> f64 {
    let cross = c_e.conj() * c_o + c_o.conj() * c_e;
    -0.5 * GAUSSIAN_ENERGY_FACTOR * medium.inverse_eps_difference() * theta_0 * cross.re
}

/// Single-mode coupling G = −c/(16 L √(2 n_o n_e)) · (1/n_o² − 1/n_e²),
/// in rad/s. Negative for positive-uniaxial media.
pub fn coupling_constant(config: &CavityConfig) -> Result<f64> {
    if config.mode_number() != 1 {
        return Err(Error::domain(
            "the coupling constant is defined for the fundamental cavity mode only",
        ));
    }
    let m = config.medium();
    let prefactor = SPEED_OF_LIGHT / (16.0 * config.length() * (2.0 * m.n_o() * m.n_e()).sqrt());
    Ok(-prefactor * m.inverse_eps_difference())
}

/// Coefficient of (b̂ + b̂†)(â_e†â_o + â_o†â_e)/ħ obtained from
/// [`interaction_energy`] through the quantization correspondence.
/// Equals [`coupling_constant`] / [`SUBSTITUTION_BOOKKEEPING_FACTOR`].
pub fn coupling_from_substitution(config: &CavityConfig) -> f64 {
    let freqs = cavity_frequencies(config);
    let c_e = Complex64::new((HBAR * freqs.omega_e / 2.0).sqrt(), 0.0);
    let c_o = Complex64::new((HBAR * freqs.omega_o / 2.0).sqrt(), 0.0);
    // Both orderings C_e*C_o and C_o*C_e contribute; one operator term each.
    let energy = interaction_energy(c_e, c_o, config.medium(), std::f64::consts::FRAC_1_SQRT_2);
    energy / 2.0 / HBAR
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingOptions {
    /// Multiplies G; 1 reproduces the idealized θ̂₀ = (b̂ + b̂†)/√2.
    pub zero_point_scale: f64,
    pub strong_coupling_threshold: f64,
}

impl Default for CouplingOptions {
    fn default() -> Self {
        Self {
            zero_point_scale: 1.0,
            strong_coupling_threshold: STRONG_COUPLING_THRESHOLD,
        }
    }
}

/// Parameters of H = (Δω/2)σ_z + ω₀ b†b + G(σ₊b + σ₋b†).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelParams {
    pub delta_omega: f64,
    pub omega_0: f64,
    pub coupling: f64,
    pub cavity: Option<CavityConfig>,
    pub warnings: Vec<Warning>,
}

impl TwoLevelParams {
    /// Direct construction, bypassing the cavity.
    pub fn from_parts(delta_omega: f64, omega_0: f64, coupling: f64) -> Result<Self> {
        Self::assemble(
            delta_omega,
            omega_0,
            coupling,
            None,
            STRONG_COUPLING_THRESHOLD,
        )
    }

    fn assemble(
        delta_omega: f64,
        omega_0: f64,
        coupling: f64,
        cavity: Option<CavityConfig>,
        threshold: f64,
    ) -> Result<Self> {
        ensure_finite("delta_omega", delta_omega)?;
        ensure_finite("omega_0", omega_0)?;
        ensure_finite("coupling", coupling)?;
        if delta_omega < 0.0 {
            return Err(Error::domain(format!(
                "Δω must be non-negative (ordinary mode above extraordinary), got {delta_omega}"
            )));
        }
        if omega_0 <= 0.0 {
            return Err(Error::domain(format!("ω₀ must be positive, got {omega_0}")));
        }
        let mut warnings = Vec::new();
        if delta_omega == 0.0 {
            warnings.push(Warning::DegenerateLevels.emit());
        } else {
            let ratio = coupling.abs() / delta_omega;
            if ratio > threshold {
                warnings.push(Warning::StrongCoupling { ratio, threshold }.emit());
            }
        }
        Ok(Self {
            delta_omega,
            omega_0,
            coupling,
            cavity,
            warnings,
        })
    }

    /// |G|/Δω (infinite for degenerate levels with nonzero G).
    pub fn coupling_ratio(&self) -> f64 {
        if self.coupling == 0.0 {
            0.0
        } else {
            self.coupling.abs() / self.delta_omega
        }
    }
}

/// Bundles Δω and G of the cavity with the torsional frequency ω₀.
pub fn two_level_params(
    config: &CavityConfig,
    omega_0: f64,
    options: CouplingOptions,
) -> Result<TwoLevelParams> {
    ensure_finite("zero_point_scale", options.zero_point_scale)?;
    let freqs = cavity_frequencies(config);
    let g = coupling_constant(config)? * options.zero_point_scale;
    TwoLevelParams::assemble(
        freqs.delta_omega,
        omega_0,
        g,
        Some(*config),
        options.strong_coupling_threshold,
    )
}

/// Dense Hamiltonian on {o, e} ⊗ {|0⟩ … |N_max⟩}; index = qubit·(N_max+1) + m
/// with qubit 0 = ordinary.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedSystem {
    pub fock_cutoff: usize,
    pub rwa: bool,
    pub hamiltonian: DMatrix<f64>,
}

pub const ORDINARY: usize = 0;
pub const EXTRAORDINARY: usize = 1;

impl QuantizedSystem {
    pub fn dimension(&self) -> usize {
        2 * (self.fock_cutoff + 1)
    }

    pub fn index(&self, qubit: usize, phonons: usize) -> usize {
        qubit * (self.fock_cutoff + 1) + phonons
    }

    /// σ₊σ₋ + b†b, diagonal in this basis.
    pub fn excitation_number(&self) -> DMatrix<f64> {
        let n = self.fock_cutoff + 1;
        DMatrix::from_fn(self.dimension(), self.dimension(), |i, j| {
            if i != j {
                return 0.0;
            }
            let (q, m) = (i / n, i % n);
            m as f64 + if q == ORDINARY { 1.0 } else { 0.0 }
        })
    }

    /// max |H − Hᵀ| / max |H|.
    pub fn hermiticity_defect(&self) -> f64 {
        let h = &self.hamiltonian;
        let scale = h.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (h - h.transpose()).amax() / scale
    }

    /// ‖[H, N_exc]‖_F / ‖H‖_F.
    pub fn excitation_commutator(&self) -> f64 {
        let n = self.excitation_number();
        let h = &self.hamiltonian;
        let c = h * &n - &n * h;
        c.norm() / h.norm()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .hamiltonian
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn propagator(&self) -> Propagator {
        Propagator::new(&self.hamiltonian)
    }
}

/// Exact time evolution e^{−iHt} for a real symmetric H, via its
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl Propagator {
    pub fn new(hamiltonian: &DMatrix<f64>) -> Self {
        Self {
            eigen: hamiltonian.clone().symmetric_eigen(),
        }
    }

    pub fn evolve(&self, psi0: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let v = &self.eigen.eigenvectors;
        let coeffs: DVector<Complex64> = DVector::from_fn(v.ncols(), |k, _| {
            let overlap: Complex64 = v
                .column(k)
                .iter()
                .zip(psi0.iter())
                .map(|(a, b)| b * a)
                .sum();
            overlap * Complex64::from_polar(1.0, -self.eigen.eigenvalues[k] * t)
        });
        DVector::from_fn(v.nrows(), |i, _| {
            (0..v.ncols()).map(|k| coeffs[k] * v[(i, k)]).sum()
        })
    }
}

/// Builds H = (Δω/2)σ_z + ω₀ b†b + G(σ₊b + σ₋b†), plus G(σ₊b† + σ₋b) when
/// `rwa` is false.
pub fn build_hamiltonian(
    params: &TwoLevelParams,
    fock_cutoff: usize,
    rwa: bool,
) -> Result<QuantizedSystem> {
    if fock_cutoff < 1 {
        return Err(Error::domain("Fock cutoff must be at least 1"));
    }
    let n = fock_cutoff + 1;
    let dim = 2 * n;
    let idx = |q: usize, m: usize| q * n + m;
    let g = params.coupling;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for m in 0..n {
        let mech = params.omega_0 * m as f64;
        h[(idx(ORDINARY, m), idx(ORDINARY, m))] = params.delta_omega / 2.0 + mech;
        h[(idx(EXTRAORDINARY, m), idx(EXTRAORDINARY, m))] = -params.delta_omega / 2.0 + mech;
    }
    for m in 1..n {
        let amp = g * (m as f64).sqrt();
        // σ₊ b : |e, m⟩ → √m |o, m−1⟩
        let (a, b) = (idx(ORDINARY, m - 1), idx(EXTRAORDINARY, m));
        h[(a, b)] = amp;
        h[(b, a)] = amp;
        if !rwa {
            // σ₊ b† : |e, m−1⟩ → √m |o, m⟩
            let (a, b) = (idx(ORDINARY, m), idx(EXTRAORDINARY, m - 1));
            h[(a, b)] = amp;
            h[(b, a)] = amp;
        }
    }
    Ok(QuantizedSystem {
        fock_cutoff,
        rwa,
        hamiltonian: h,
    })
}
