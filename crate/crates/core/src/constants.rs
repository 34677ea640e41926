//! Physical constants in CGS units.

/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.9979e10;

/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.0546e-27;

/// Boltzmann constant, erg/K.
pub const BOLTZMANN: f64 = 1.3807e-16;

/// Gaussian-unit prefactor of the electromagnetic energy density, (8π)⁻¹.
pub const GAUSSIAN_ENERGY_FACTOR: f64 = 1.0 / (8.0 * std::f64::consts::PI);

/// Refractive indices of crystalline quartz (ordinary, extraordinary).
pub const QUARTZ_INDICES: (f64, f64) = (1.547, 1.556);
