//! Brute-force validators for the master equation and the Hamiltonian.
//!
//! At zero temperature a single excitation shared between the two-level
//! system and a discretized bath stays in the (M+1)-dimensional sector
//! {|o, vac⟩, |e, 1_j⟩}. Its Hamiltonian (energies relative to Δω)
//!
//! ```text
//!     ⎡ 0   g₁  …  g_M ⎤
//! H = ⎢ g₁  d₁         ⎥      d_j = ω_j − Δω
//!     ⎢ ⋮       ⋱      ⎥
//!     ⎣ g_M         d_M⎦
//! ```
//!
//! is an arrowhead matrix. Its eigenvalues are the roots of the secular
//! function x − Σ g_j²/(x − d_j), one between each pair of consecutive poles
//! and one beyond each end, so the exact propagator costs O(M²) instead of a
//! dense O(M³) diagonalization.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::diagnostics::Warning;
use crate::error::{ensure_finite, Error, Result};
use crate::hamiltonian::{build_hamiltonian, TwoLevelParams, EXTRAORDINARY, ORDINARY};
use crate::lindblad::{evolve, CouplingSpectrum, DensityMatrix2, DynamicsParams, EvolveOptions};

/// Bath modes on a uniform midpoint grid with couplings g_j = √(G(ω_j)²·Δgrid).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
    pub spacing: f64,
    pub window: (f64, f64),
    pub warnings: Vec<Warning>,
}

impl DiscretizedBath {
    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    /// 2π/Δgrid: the time at which the discrete bath re-emits the excitation.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing
    }

    /// 2π g_j²/Δgrid interpolated between the two grid points bracketing ω.
    pub fn binned_decay_rate(&self, omega: f64) -> f64 {
        let density = |j: usize| self.couplings[j] * self.couplings[j] / self.spacing;
        let (lo, hi) = self.window;
        if omega < lo || omega > hi {
            return 0.0;
        }
        let pos = (omega - self.frequencies[0]) / self.spacing;
        let m = self.modes();
        if pos <= 0.0 {
            return 2.0 * PI * density(0);
        }
        let j = (pos.floor() as usize).min(m - 1);
        if j + 1 >= m {
            return 2.0 * PI * density(m - 1);
        }
        let frac = pos - j as f64;
        2.0 * PI * ((1.0 - frac) * density(j) + frac * density(j + 1))
    }
}

/// Midpoint discretization ω_j = ω_min + (j + ½)Δgrid of `spectrum` over
/// `window`. Warns when Δω is outside the window.
pub fn discretize_bath(
    spectrum: &CouplingSpectrum,
    modes: usize,
    window: (f64, f64),
    delta_omega: f64,
) -> Result<DiscretizedBath> {
    let (lo, hi) = window;
    ensure_finite("window start", lo)?;
    ensure_finite("window end", hi)?;
    if modes < 2 {
        return Err(Error::domain(format!(
            "bath needs at least 2 modes, got {modes}"
        )));
    }
    if lo < 0.0 || hi <= lo {
        return Err(Error::domain(format!(
            "invalid bath window [{lo:e}, {hi:e}]"
        )));
    }
    let spacing = (hi - lo) / modes as f64;
    let frequencies: Vec<f64> = (0..modes)
        .map(|j| lo + (j as f64 + 0.5) * spacing)
        .collect();
    let couplings = frequencies
        .iter()
        .map(|&w| (spectrum.coupling_density(w) * spacing).sqrt())
        .collect();
    let mut warnings = Vec::new();
    if !(delta_omega > lo && delta_omega < hi) {
        warnings.push(
            Warning::OffResonantBath {
                delta_omega,
                omega_min: lo,
                omega_max: hi,
            }
            .emit(),
        );
    }
    Ok(DiscretizedBath {
        frequencies,
        couplings,
        spacing,
        window,
        warnings,
    })
}

/// Eigen-decomposition of the single-excitation arrowhead Hamiltonian.
/// Each eigenvalue is stored as `poles[anchor] + offset` so that its distance
/// to the nearest pole keeps full relative precision.
#[derive(Debug, Clone)]
struct Arrowhead {
    poles: Vec<f64>,
    weights2: Vec<f64>,
    couplings: Vec<f64>,
    roots: Vec<(usize, f64)>,
    /// |⟨o, vac|k⟩|².
    overlaps: Vec<f64>,
}

impl Arrowhead {
    fn new(bath: &DiscretizedBath, delta_omega: f64) -> Self {
        // Uncoupled modes never receive amplitude; drop them.
        let (mut poles, mut couplings) = (Vec::new(), Vec::new());
        for (w, g) in bath.frequencies.iter().zip(&bath.couplings) {
            if *g != 0.0 {
                poles.push(w - delta_omega);
                couplings.push(*g);
            }
        }
        let weights2: Vec<f64> = couplings.iter().map(|g| g * g).collect();
        let mut arrow = Self {
            poles,
            weights2,
            couplings,
            roots: Vec::new(),
            overlaps: Vec::new(),
        };
        if arrow.poles.is_empty() {
            arrow.roots.push((usize::MAX, 0.0));
            arrow.overlaps.push(1.0);
            return arrow;
        }
        arrow.solve();
        arrow
    }

    fn root_value(&self, root: (usize, f64)) -> f64 {
        match root.0 {
            usize::MAX => root.1,
            a => self.poles[a] + root.1,
        }
    }

    /// x_k − d_j, exact in the anchor pole's term.
    fn gap(&self, root: (usize, f64), j: usize) -> f64 {
        if root.0 == j {
            root.1
        } else if root.0 == usize::MAX {
            root.1 - self.poles[j]
        } else {
            (self.poles[root.0] - self.poles[j]) + root.1
        }
    }

    /// Secular function and its derivative at poles[anchor] + s.
    fn secular(&self, anchor: usize, s: f64) -> (f64, f64) {
        let x = self.poles[anchor] + s;
        let (mut sum, mut deriv) = (0.0, 0.0);
        for j in 0..self.poles.len() {
            let gap = self.gap((anchor, s), j);
            let r = self.weights2[j] / gap;
            sum += r;
            deriv += r / gap;
        }
        (x - sum, 1.0 + deriv)
    }

    /// Safeguarded Newton on f(s) over the open bracket (lo, hi), where f
    /// is increasing with f(lo) < 0 < f(hi).
    fn bracketed_root(&self, anchor: usize, mut lo: f64, mut hi: f64) -> f64 {
        let mut s = 0.5 * (lo + hi);
        for _ in 0..200 {
            let (f, df) = self.secular(anchor, s);
            if f == 0.0 {
                return s;
            }
            if f < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let newton = s - f / df;
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let tol = 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE);
            if (next - s).abs() <= tol || hi - lo <= tol {
                return next;
            }
            s = next;
        }
        s
    }

    fn solve(&mut self) {
        let m = self.poles.len();
        let total: f64 = self.weights2.iter().sum();
        let span = self.poles[m - 1] - self.poles[0];
        let pad = total.sqrt() + span / m as f64 + f64::MIN_POSITIVE;

        // Below the lowest pole.
        let lower = self.poles[0].min(0.0) - pad;
        let s = self.bracketed_root(0, lower - self.poles[0], 0.0);
        self.roots.push((0, s));

        for j in 0..m - 1 {
            let width = self.poles[j + 1] - self.poles[j];
            let half = 0.5 * width;
            let (f_mid, _) = self.secular(j, half);
            let root = if f_mid >= 0.0 {
                (j, self.bracketed_root(j, 0.0, half))
            } else {
                (j + 1, self.bracketed_root(j + 1, -half, 0.0))
            };
            self.roots.push(root);
        }

        // Above the highest pole.
        let upper = self.poles[m - 1].max(0.0) + pad;
        let s = self.bracketed_root(m - 1, 0.0, upper - self.poles[m - 1]);
        self.roots.push((m - 1, s));

        self.overlaps = self
            .roots
            .iter()
            .map(|&root| {
                let norm: f64 = (0..m)
                    .map(|j| {
                        let gap = self.gap(root, j);
                        self.weights2[j] / (gap * gap)
                    })
                    .sum();
                1.0 / (1.0 + norm)
            })
            .collect();
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.roots.iter().map(|&r| self.root_value(r)).collect()
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.roots
            .iter()
            .map(|&r| Complex64::from_polar(1.0, -self.root_value(r) * t))
            .collect()
    }

    /// ⟨o, vac| e^{−iHt} |o, vac⟩.
    fn survival_amplitude(&self, t: f64) -> Complex64 {
        self.phases(t)
            .iter()
            .zip(&self.overlaps)
            .map(|(p, w)| p * w)
            .sum()
    }

    /// Full state (c, c_1 … c_M) at time t for the initial state |o, vac⟩.
    fn state(&self, t: f64) -> (Complex64, Vec<Complex64>) {
        let phases = self.phases(t);
        let c = phases.iter().zip(&self.overlaps).map(|(p, w)| p * w).sum();
        let bath = (0..self.poles.len())
            .map(|j| {
                let s: Complex64 = self
                    .roots
                    .iter()
                    .zip(&phases)
                    .zip(&self.overlaps)
                    .map(|((&r, p), w)| p * (w / self.gap(r, j)))
                    .sum();
                s * self.couplings[j]
            })
            .collect();
        (c, bath)
    }
}

/// Survival series of the excited state against a discretized bath.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationEvolution {
    pub times: Vec<f64>,
    /// c(t) = ⟨o, vac|ψ(t)⟩ in the frame rotating at Δω/2.
    pub amplitudes: Vec<Complex64>,
    /// |c(t)|².
    pub survival: Vec<f64>,
    /// max |Σ|c|² + Σ_j|c_j|² − 1| over the sampled norm checkpoints.
    pub max_norm_deviation: f64,
}

/// How many (evenly spread) times get the O(M²) full-state norm check.
pub const NORM_CHECKPOINTS: usize = 8;

/// Exact evolution of |o, vac⟩ through the given times. Times must not
/// exceed the bath's recurrence time.
pub fn evolve_single_excitation(
    bath: &DiscretizedBath,
    delta_omega: f64,
    times: &[f64],
) -> Result<SingleExcitationEvolution> {
    ensure_finite("delta_omega", delta_omega)?;
    let bound = bath.recurrence_time();
    let mut latest = 0.0f64;
    for &t in times {
        ensure_finite("time", t)?;
        if t < 0.0 {
            return Err(Error::domain(format!(
                "times must be non-negative, got {t:e}"
            )));
        }
        latest = latest.max(t);
    }
    if latest > bound {
        let (lo, hi) = bath.window;
        let needed = (latest * (hi - lo) / (2.0 * PI)).ceil() as usize;
        return Err(Error::RecurrenceGuard {
            requested: latest,
            bound,
            suggested_modes: needed.next_power_of_two(),
        });
    }

    let arrow = Arrowhead::new(bath, delta_omega);
    let amplitudes: Vec<Complex64> = times.iter().map(|&t| arrow.survival_amplitude(t)).collect();
    let survival = amplitudes.iter().map(|c| c.norm_sqr()).collect();

    let mut max_norm_deviation: f64 = 0.0;
    if !times.is_empty() {
        let stride = times.len().div_ceil(NORM_CHECKPOINTS).max(1);
        let mut checkpoints: Vec<usize> = (0..times.len()).step_by(stride).collect();
        checkpoints.push(times.len() - 1);
        for i in checkpoints {
            let (c, bath_amps) = arrow.state(times[i]);
            let norm = c.norm_sqr() + bath_amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
            max_norm_deviation = max_norm_deviation.max((norm - 1.0).abs());
        }
    }
    Ok(SingleExcitationEvolution {
        times: times.to_vec(),
        amplitudes,
        survival,
        max_norm_deviation,
    })
}

/// Dense (M+1)×(M+1) single-excitation Hamiltonian in the basis
/// {|o, vac⟩, |e, 1_1⟩, …, |e, 1_M⟩}, energies relative to Δω.
pub fn single_excitation_hamiltonian(bath: &DiscretizedBath, delta_omega: f64) -> DMatrix<f64> {
    let m = bath.modes();
    let mut h = DMatrix::zeros(m + 1, m + 1);
    for j in 0..m {
        h[(j + 1, j + 1)] = bath.frequencies[j] - delta_omega;
        h[(0, j + 1)] = bath.couplings[j];
        h[(j + 1, 0)] = bath.couplings[j];
    }
    h
}

/// Eigenvalues of the single-excitation Hamiltonian from the secular
/// equation, ascending (uncoupled modes excluded).
pub fn single_excitation_spectrum(bath: &DiscretizedBath, delta_omega: f64) -> Vec<f64> {
    Arrowhead::new(bath, delta_omega).eigenvalues()
}

/// Result of comparing the zero-temperature master equation with the exact
/// discretized-bath survival probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayComparison {
    pub gamma: f64,
    pub times: Vec<f64>,
    pub lindblad: Vec<f64>,
    pub exact: Vec<f64>,
    /// max |ρ_oo − |c|²| / ρ_oo.
    pub max_relative_deviation: f64,
    pub max_absolute_deviation: f64,
    /// max |e^{−γt} − |c|²| (the oracle's own distance from the golden rule).
    pub max_exponential_deviation: f64,
    pub max_norm_deviation: f64,
}

/// Runs the T = 0 master equation (RK4, γ from the golden rule unless
/// overridden, δ = 0) alongside the exact discretized bath from ρ = |o⟩⟨o|,
/// sampling `samples + 1` evenly spaced times on γt ∈ [0, γt_max].
pub fn compare_with_lindblad(
    bath: &DiscretizedBath,
    delta_omega: f64,
    gamma: f64,
    gamma_t_max: f64,
    samples: usize,
) -> Result<DecayComparison> {
    ensure_finite("gamma", gamma)?;
    ensure_finite("gamma_t_max", gamma_t_max)?;
    if gamma < 0.0 || gamma_t_max < 0.0 || samples == 0 {
        return Err(Error::domain(
            "comparison needs γ ≥ 0, γt_max ≥ 0 and at least one sample",
        ));
    }
    let params = DynamicsParams::new(delta_omega, gamma, 0.0, 0.0)?;
    // Time scale: 1/γ, or the bath's recurrence time when γ = 0.
    let t_max = if gamma > 0.0 {
        gamma_t_max / gamma
    } else {
        0.5 * bath.recurrence_time()
    };
    let times: Vec<f64> = (0..=samples)
        .map(|i| t_max * i as f64 / samples as f64)
        .collect();
    let exact_run = evolve_single_excitation(bath, delta_omega, &times)?;

    let rate = params.relaxation_rate().max(params.precession_rate().abs());
    let sample_dt = t_max / samples as f64;
    let steps_per_sample = if rate == 0.0 || sample_dt == 0.0 {
        1
    } else {
        (sample_dt * rate / (0.5 * crate::lindblad::STABILITY_LIMIT)).ceil() as usize
    };
    let options = EvolveOptions {
        t_final: t_max,
        dt: if sample_dt == 0.0 {
            1.0
        } else {
            sample_dt / steps_per_sample as f64
        },
        stride: steps_per_sample,
    };
    let trajectory = evolve(&DensityMatrix2::ordinary(), &params, &options)?;
    let lindblad: Vec<f64> = trajectory.states.iter().map(|s| s.rho_oo()).collect();
    debug_assert_eq!(lindblad.len(), times.len());

    let mut rel: f64 = 0.0;
    let mut abs: f64 = 0.0;
    let mut expo: f64 = 0.0;
    for ((t, l), e) in times.iter().zip(&lindblad).zip(&exact_run.survival) {
        let d = (l - e).abs();
        abs = abs.max(d);
        rel = rel.max(d / l.abs().max(f64::MIN_POSITIVE));
        expo = expo.max(((-gamma * t).exp() - e).abs());
    }
    Ok(DecayComparison {
        gamma,
        times,
        lindblad,
        exact: exact_run.survival,
        max_relative_deviation: rel,
        max_absolute_deviation: abs,
        max_exponential_deviation: expo,
        max_norm_deviation: exact_run.max_norm_deviation,
    })
}

/// Excited-population series from |o, 0⟩ with and without the rotating-wave
/// approximation, against the two-level Rabi closed form
/// P(t) = 1 − (G²/Ω_R²) sin²(Ω_R t), Ω_R² = G² + (Δω − ω₀)²/4.
#[derive(Debug, Clone, PartialEq)]
pub struct RabiReport {
    pub times: Vec<f64>,
    pub analytic: Vec<f64>,
    pub rwa: Vec<f64>,
    pub full: Vec<f64>,
    pub rwa_max_deviation: f64,
    pub full_max_deviation: f64,
    pub resonant: bool,
}

pub fn jc_rabi_check(
    params: &TwoLevelParams,
    fock_cutoff: usize,
    times: &[f64],
) -> Result<RabiReport> {
    let rwa_system = build_hamiltonian(params, fock_cutoff, true)?;
    let full_system = build_hamiltonian(params, fock_cutoff, false)?;
    let start = rwa_system.index(ORDINARY, 0);
    let dim = rwa_system.dimension();
    let mut psi0 = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    psi0[start] = Complex64::new(1.0, 0.0);

    let ordinary_population = |psi: &DVector<Complex64>| -> f64 {
        (0..=fock_cutoff)
            .map(|m| psi[rwa_system.index(ORDINARY, m)].norm_sqr())
            .sum()
    };
    // |o, m⟩ spans the upper level; the extraordinary sector only serves as
    // the complement.
    let _ = EXTRAORDINARY;

    let g = params.coupling;
    let detuning = params.delta_omega - params.omega_0;
    let rabi = (g * g + 0.25 * detuning * detuning).sqrt();
    let analytic: Vec<f64> = times
        .iter()
        .map(|&t| {
            if rabi == 0.0 {
                1.0
            } else {
                1.0 - (g * g) / (rabi * rabi) * (rabi * t).sin().powi(2)
            }
        })
        .collect();

    let rwa_prop = rwa_system.propagator();
    let full_prop = full_system.propagator();
    let rwa: Vec<f64> = times
        .iter()
        .map(|&t| ordinary_population(&rwa_prop.evolve(&psi0, t)))
        .collect();
    let full: Vec<f64> = times
        .iter()
        .map(|&t| ordinary_population(&full_prop.evolve(&psi0, t)))
        .collect();
    let max_dev = |xs: &[f64]| {
        xs.iter()
            .zip(&analytic)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    Ok(RabiReport {
        times: times.to_vec(),
        rwa_max_deviation: max_dev(&rwa),
        full_max_deviation: max_dev(&full),
        analytic,
        rwa,
        full,
        resonant: detuning == 0.0,
    })
}
