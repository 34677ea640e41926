//! Photon-polarization dynamics under a thermal torsional bath.
//!
//! Tracing out a continuum of torsional modes in the weak-coupling limit
//! gives a master equation for the 2×2 density matrix in the
//! {ordinary, extraordinary} basis with
//!
//! - a coherent term (Δω/2 + δ)σ_z,
//! - emission σ₋ at rate (n+1)γ and absorption σ₊ at rate nγ,
//!
//! where n = n(Δω) is the Bose occupation, γ = 2π G(Δω)² the golden-rule
//! rate and δ the principal-value frequency shift.

mod bath;
mod density;
mod dynamics;
mod shift;

pub use bath::{
    bose_from_beta, bose_occupation, decay_rate, BathParams, CouplingSpectrum, SpectralProfile,
    Temperature,
};
pub use density::DensityMatrix2;
pub use dynamics::{
    analytic_solution, derive_dynamics, evolve, lindblad_rhs, steady_state, DerivedDynamics,
    DynamicsOptions, DynamicsParams, EvolveOptions, Trajectory, TrajectoryDiagnostics,
    MARKOV_THRESHOLD, STABILITY_LIMIT,
};
pub use shift::{frequency_shift, QuadratureOptions, ShiftResult};
