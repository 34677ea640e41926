//! Torsional optomechanics in a birefringent optical cavity.
//!
//! A cavity filled with a uniaxial crystal supports an ordinary and an
//! extraordinary polarization mode at slightly different frequencies.
//! Twisting the cavity about its axis rotates the optic axis, which mixes the
//! two modes; quantizing the twist turns this into a two-level system coupled
//! to a torsional oscillator. The crate covers the full chain:
//!
//! - [`tensor`]: permittivity tensors of the twisted medium, exact and to
//!   first order in the twist angle.
//! - [`modes`]: plane-wave eigenmodes of the uniaxial medium and the cavity's
//!   ordinary/extraordinary frequencies.
//! - [`hamiltonian`]: interaction energy, coupling constant and the
//!   two-level ⊗ oscillator Hamiltonian (with or without rotating-wave
//!   approximation).
//! - [`lindblad`]: thermal bath quantities and the master equation for the
//!   2×2 polarization density matrix.
//! - [`oracle`]: brute-force validators (discretized bath, Jaynes–Cummings).
//!
//! Dynamics use angular frequencies (ħ = 1); optics use Gaussian units with
//! lengths in centimetres.

pub mod constants;
pub mod diagnostics;
pub mod error;
pub mod hamiltonian;
pub mod lindblad;
pub mod modes;
pub mod oracle;
pub mod quadrature;
pub mod tensor;

pub use diagnostics::Warning;
pub use error::{Error, Result};
