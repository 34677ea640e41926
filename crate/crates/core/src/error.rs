use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The ordinary/extraordinary directions are undefined for a wavevector
    /// along the optic axis (both transverse modes see ε_o).
    #[error(
        "wavevector is parallel to the optic axis; ordinary and extraordinary modes are degenerate"
    )]
    OpticAxisDegeneracy,

    #[error(
        "step size {dt:e} s violates the stability guard dt·max(Γ, Ω) ≤ {limit}; use dt ≤ {suggested:e} s"
    )]
    StabilityGuard { dt: f64, limit: f64, suggested: f64 },

    #[error(
        "principal-value refinement did not converge: last iterates {previous:e} and {last:e}"
    )]
    QuadratureNotConverged { previous: f64, last: f64 },

    #[error(
        "bath integrand ~1/ω is not integrable at ω = {omega_min:e}; set omega_min > 0 or use a spectrum that vanishes at zero frequency"
    )]
    NonIntegrableEndpoint { omega_min: f64 },

    #[error(
        "requested time {requested:e} s exceeds the bath recurrence time {bound:e} s; use at least {suggested_modes} modes or narrow the window"
    )]
    RecurrenceGuard {
        requested: f64,
        bound: f64,
        suggested_modes: usize,
    },

    #[error("no unique steady state: the decay rate is zero")]
    NoSteadyState,

    #[error("eigenvalue solver failed: {0}")]
    Solver(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {value}")))
    }
}
