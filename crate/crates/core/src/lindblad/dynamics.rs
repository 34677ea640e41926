use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::diagnostics::Warning;
use crate::error::{ensure_finite, Error, Result};
use crate::hamiltonian::TwoLevelParams;

use super::bath::{decay_rate, BathParams};
use super::density::DensityMatrix2;
use super::shift::{frequency_shift, QuadratureOptions, ShiftResult};

/// Upper bound on dt·max(Γ, Ω) accepted by [`evolve`].
pub const STABILITY_LIMIT: f64 = 0.1;

/// Γ/Δω above which the weak-coupling master equation is flagged.
pub const MARKOV_THRESHOLD: f64 = 0.1;

const TRACE_RENORMALIZE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsParams {
    pub delta_omega: f64,
    pub gamma: f64,
    pub n_bar: f64,
    pub delta_shift: f64,
}

impl DynamicsParams {
    pub fn new(delta_omega: f64, gamma: f64, n_bar: f64, delta_shift: f64) -> Result<Self> {
        ensure_finite("delta_omega", delta_omega)?;
        ensure_finite("gamma", gamma)?;
        ensure_finite("n_bar", n_bar)?;
        ensure_finite("delta_shift", delta_shift)?;
        if gamma < 0.0 {
            return Err(Error::domain(format!("γ must be ≥ 0, got {gamma}")));
        }
        if n_bar < 0.0 {
            return Err(Error::domain(format!("n must be ≥ 0, got {n_bar}")));
        }
        Ok(Self {
            delta_omega,
            gamma,
            n_bar,
            delta_shift,
        })
    }

    /// Γ = (2n + 1)γ, the population relaxation rate.
    pub fn relaxation_rate(&self) -> f64 {
        (2.0 * self.n_bar + 1.0) * self.gamma
    }

    /// Ω = Δω + 2δ, the coherence precession rate.
    pub fn precession_rate(&self) -> f64 {
        self.delta_omega + 2.0 * self.delta_shift
    }

    /// (n+1)/(2n+1).
    pub fn steady_extraordinary(&self) -> f64 {
        (self.n_bar + 1.0) / (2.0 * self.n_bar + 1.0)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn dissipator(jump: &Matrix2<Complex64>, rho: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let jd = jump.adjoint();
    let jdj = jd * jump;
    jump * rho * jd - (jdj * rho + rho * jdj) * c(0.5)
}

/// dρ/dt = −i[(Δω/2 + δ)σ_z, ρ] + (n+1)γ D[σ₋]ρ + nγ D[σ₊]ρ with
/// D[L]ρ = LρL† − ½{L†L, ρ}.
pub fn lindblad_rhs(rho: &DensityMatrix2, params: &DynamicsParams) -> Matrix2<Complex64> {
    let zero = c(0.0);
    let one = c(1.0);
    let sigma_z = Matrix2::new(one, zero, zero, -one);
    // σ₊ = |o⟩⟨e| raises e → o; σ₋ = σ₊†.
    let sigma_plus = Matrix2::new(zero, one, zero, zero);
    let sigma_minus = sigma_plus.adjoint();

    let r = rho.matrix();
    let h = sigma_z * c(0.5 * params.delta_omega + params.delta_shift);
    let coherent = (h * r - r * h) * Complex64::new(0.0, -1.0);
    let down = dissipator(&sigma_minus, r) * c((params.n_bar + 1.0) * params.gamma);
    let up = dissipator(&sigma_plus, r) * c(params.n_bar * params.gamma);
    coherent + down + up
}

/// Closed-form solution. Populations relax at Γ = (2n+1)γ towards
/// ρ_ee = (n+1)/(2n+1); the coherence evolves as
/// ρ_oe(t) = ρ_oe(0) e^{−Γt/2} e^{−iΩt} with Ω = Δω + 2δ.
pub fn analytic_solution(rho0: &DensityMatrix2, params: &DynamicsParams, t: f64) -> DensityMatrix2 {
    let big_gamma = params.relaxation_rate();
    let ee_inf = params.steady_extraordinary();
    let ee = ee_inf + (rho0.rho_ee() - ee_inf) * (-big_gamma * t).exp();
    // Any trace defect of rho0 is carried along unchanged.
    let oo = rho0.trace() - ee;
    let phase = Complex64::from_polar((-0.5 * big_gamma * t).exp(), -params.precession_rate() * t);
    let oe = rho0.rho_oe() * phase;
    let eo = rho0.rho_eo() * phase.conj();
    DensityMatrix2::from_matrix_unchecked(Matrix2::new(c(oo), oe, eo, c(ee)))
}

/// diag(n/(2n+1), (n+1)/(2n+1)).
pub fn steady_state(params: &DynamicsParams) -> Result<DensityMatrix2> {
    if params.gamma <= 0.0 {
        return Err(Error::NoSteadyState);
    }
    let ee = params.steady_extraordinary();
    // Computed directly rather than as 1 − ρ_ee to keep relative precision
    // when n ≪ 1.
    let oo = params.n_bar / (2.0 * params.n_bar + 1.0);
    Ok(DensityMatrix2::from_matrix_unchecked(Matrix2::new(
        c(oo),
        c(0.0),
        c(0.0),
        c(ee),
    )))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub t_final: f64,
    pub dt: f64,
    /// Record every `stride`-th step (the final state is always recorded).
    pub stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrajectoryDiagnostics {
    pub steps: usize,
    pub step_size: f64,
    pub max_trace_drift: f64,
    pub max_hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub renormalizations: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix2>,
    pub diagnostics: TrajectoryDiagnostics,
}

impl Trajectory {
    pub fn last(&self) -> (f64, &DensityMatrix2) {
        let i = self.times.len() - 1;
        (self.times[i], &self.states[i])
    }
}

fn axpy(y: &Matrix2<Complex64>, a: f64, x: &Matrix2<Complex64>) -> DensityMatrix2 {
    DensityMatrix2::from_matrix_unchecked(y + x * c(a))
}

/// Fixed-step classical RK4. The step count is ⌈t_final/dt⌉ and the step
/// size is t_final divided by it, so the last sample lands on t_final.
pub fn evolve(
    rho0: &DensityMatrix2,
    params: &DynamicsParams,
    options: &EvolveOptions,
) -> Result<Trajectory> {
    ensure_finite("t_final", options.t_final)?;
    ensure_finite("dt", options.dt)?;
    if options.t_final < 0.0 {
        return Err(Error::domain("t_final must be ≥ 0"));
    }
    if options.dt <= 0.0 {
        return Err(Error::domain("dt must be positive"));
    }
    if options.stride == 0 {
        return Err(Error::domain("stride must be at least 1"));
    }
    let fastest = params.relaxation_rate().max(params.precession_rate().abs());
    if options.dt * fastest > STABILITY_LIMIT {
        return Err(Error::StabilityGuard {
            dt: options.dt,
            limit: STABILITY_LIMIT,
            suggested: STABILITY_LIMIT / fastest,
        });
    }

    let ratio = options.t_final / options.dt;
    let steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };
    let h = if steps == 0 {
        0.0
    } else {
        options.t_final / steps as f64
    };

    let mut diag = TrajectoryDiagnostics {
        steps,
        step_size: h,
        max_trace_drift: (rho0.trace() - 1.0).abs(),
        max_hermiticity_defect: rho0.hermiticity_defect(),
        min_eigenvalue: rho0.min_eigenvalue(),
        renormalizations: 0,
    };
    let capacity = steps / options.stride + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    times.push(0.0);
    states.push(*rho0);

    let mut rho = *rho0;
    for step in 1..=steps {
        let y = *rho.matrix();
        let k1 = lindblad_rhs(&rho, params);
        let k2 = lindblad_rhs(&axpy(&y, 0.5 * h, &k1), params);
        let k3 = lindblad_rhs(&axpy(&y, 0.5 * h, &k2), params);
        let k4 = lindblad_rhs(&axpy(&y, h, &k3), params);
        let incr = (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0);
        rho = DensityMatrix2::from_matrix_unchecked(y + incr);

        let drift = (rho.trace() - 1.0).abs();
        diag.max_trace_drift = diag.max_trace_drift.max(drift);
        if drift > TRACE_RENORMALIZE {
            rho.scale_trace();
            diag.renormalizations += 1;
        }
        diag.max_hermiticity_defect = diag.max_hermiticity_defect.max(rho.hermiticity_defect());
        diag.min_eigenvalue = diag.min_eigenvalue.min(rho.min_eigenvalue());

        if step % options.stride == 0 || step == steps {
            times.push(step as f64 * h);
            states.push(rho);
        }
    }
    Ok(Trajectory {
        times,
        states,
        diagnostics: diag,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsOptions {
    pub include_shift: bool,
    /// Sets γ directly, bypassing the spectrum.
    pub gamma_override: Option<f64>,
    pub quadrature: QuadratureOptions,
    pub markov_threshold: f64,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        Self {
            include_shift: false,
            gamma_override: None,
            quadrature: QuadratureOptions::default(),
            markov_threshold: MARKOV_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivedDynamics {
    pub params: DynamicsParams,
    pub shift: Option<ShiftResult>,
    pub warnings: Vec<Warning>,
}

/// Master-equation coefficients for a two-level system in a bath: n(Δω),
/// γ = 2πG(Δω)² (or the override) and, on request, the shift δ.
pub fn derive_dynamics(
    two_level: &TwoLevelParams,
    bath: &BathParams,
    options: &DynamicsOptions,
) -> Result<DerivedDynamics> {
    let dw = two_level.delta_omega;
    if dw <= 0.0 {
        return Err(Error::domain("master equation requires Δω > 0"));
    }
    let mut warnings = Vec::new();
    let n_bar = bath.occupation(dw);
    let gamma = match options.gamma_override {
        Some(g) => g,
        None => {
            let (g, w) = decay_rate(&bath.spectrum, dw);
            warnings.extend(w);
            g
        }
    };
    let shift = if options.include_shift {
        Some(frequency_shift(bath, dw, &options.quadrature)?)
    } else {
        None
    };
    let params = DynamicsParams::new(dw, gamma, n_bar, shift.as_ref().map_or(0.0, |s| s.value))?;
    let relaxation = params.relaxation_rate();
    if relaxation > options.markov_threshold * dw {
        warnings.push(
            Warning::NonMarkovian {
                relaxation_rate: relaxation,
                delta_omega: dw,
                threshold: options.markov_threshold,
            }
            .emit(),
        );
    }
    Ok(DerivedDynamics {
        params,
        shift,
        warnings,
    })
}
