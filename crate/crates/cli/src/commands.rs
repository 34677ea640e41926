//! Subcommand implementations. Each returns the summary document; CSV
//! output goes to the path given by the caller.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use twistcav::hamiltonian::build_hamiltonian;
use twistcav::lindblad::{
    evolve, frequency_shift, steady_state, EvolveOptions, QuadratureOptions, Trajectory,
};
use twistcav::modes::{solve_eigenmodes, ModeLabel};
use twistcav::oracle::{compare_with_lindblad, discretize_bath};
use twistcav::tensor::{first_order_relative_error, TwistProfile};
use twistcav::Warning;

use crate::config::{expand_sweep, parse_config, ScenarioConfig};
use crate::error::{CliError, Context};
use crate::scenario::{self, Scenario};

/// Default number of RK4 steps per output row.
pub const DEFAULT_STRIDE: usize = 40;
/// Default t_final in units of 1/Γ.
pub const DEFAULT_RELAXATION_TIMES: f64 = 40.0;
/// Default dt in units of 1/Γ.
pub const DEFAULT_STEP_FRACTION: f64 = 1e-3;

pub const TRAJECTORY_HEADER: &str = "t,rho_oo,rho_ee,re_rho_oe,im_rho_oe,abs_rho_oe";

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct StateEntry {
    pub rho_oo: f64,
    pub rho_ee: f64,
    pub re_rho_oe: f64,
    pub im_rho_oe: f64,
}

impl From<&twistcav::lindblad::DensityMatrix2> for StateEntry {
    fn from(rho: &twistcav::lindblad::DensityMatrix2) -> Self {
        Self {
            rho_oo: rho.rho_oo(),
            rho_ee: rho.rho_ee(),
            re_rho_oe: rho.rho_oe().re,
            im_rho_oe: rho.rho_oe().im,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeEntry {
    pub label: &'static str,
    /// ω²/c² in cm⁻².
    pub eigenvalue: f64,
    pub frequency: f64,
    /// Polarization direction, `[re, im]` per Cartesian component.
    pub direction: [[f64; 2]; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySummary {
    pub csv: Option<String>,
    pub rows: usize,
    pub t_final: f64,
    pub dt: f64,
    pub steps: usize,
    pub final_state: StateEntry,
    pub final_population_deviation: Option<f64>,
    pub max_trace_drift: f64,
    pub max_hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub renormalizations: usize,
}

/// Checks on the dense two-level ⊗ oscillator Hamiltonian.
#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianSummary {
    pub fock_cutoff: usize,
    pub rwa: bool,
    pub dimension: usize,
    pub hermiticity_defect: f64,
    /// ‖[H, N_exc]‖/‖H‖; vanishes under the rotating-wave approximation.
    pub excitation_commutator: f64,
    /// Ascending, rad/s.
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftSummary {
    pub value: f64,
    pub iterates: Vec<f64>,
    pub final_excision: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub modes: usize,
    pub window: [f64; 2],
    pub recurrence_time: f64,
    pub gamma: f64,
    pub gamma_t_max: f64,
    pub max_relative_deviation: f64,
    pub max_absolute_deviation: f64,
    pub max_exponential_deviation: f64,
    pub max_norm_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// The summary document. Every key is always present; sections a command
/// does not compute are null.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub config: Value,
    pub omega_o: f64,
    pub omega_e: f64,
    pub delta_omega: f64,
    pub omega_0: Option<f64>,
    pub coupling: Option<f64>,
    pub coupling_ratio: Option<f64>,
    pub n_bar: Option<f64>,
    pub gamma: Option<f64>,
    pub delta_shift: Option<f64>,
    pub relaxation_rate: Option<f64>,
    pub precession_rate: Option<f64>,
    pub steady_state: Option<StateEntry>,
    pub expansion_error: Option<f64>,
    pub modes: Option<Vec<ModeEntry>>,
    pub hamiltonian: Option<HamiltonianSummary>,
    pub trajectory: Option<TrajectorySummary>,
    pub shift: Option<ShiftSummary>,
    pub oracle: Option<OracleSummary>,
    pub warnings: Vec<Warning>,
    pub timing_seconds: f64,
}

impl RunSummary {
    fn empty(command: &'static str, doc: &Value) -> Self {
        Self {
            command,
            config: doc.clone(),
            omega_o: 0.0,
            omega_e: 0.0,
            delta_omega: 0.0,
            omega_0: None,
            coupling: None,
            coupling_ratio: None,
            n_bar: None,
            gamma: None,
            delta_shift: None,
            relaxation_rate: None,
            precession_rate: None,
            steady_state: None,
            expansion_error: None,
            modes: None,
            hamiltonian: None,
            trajectory: None,
            shift: None,
            oracle: None,
            warnings: Vec::new(),
            timing_seconds: 0.0,
        }
    }

    fn fill(&mut self, cfg: &ScenarioConfig, sc: &Scenario) -> Result<(), CliError> {
        let p = &sc.dynamics.params;
        self.omega_o = sc.frequencies.omega_o;
        self.omega_e = sc.frequencies.omega_e;
        self.delta_omega = sc.frequencies.delta_omega;
        self.omega_0 = Some(sc.two_level.omega_0);
        self.coupling = Some(sc.two_level.coupling);
        self.coupling_ratio = Some(sc.two_level.coupling_ratio());
        self.n_bar = Some(p.n_bar);
        self.gamma = Some(p.gamma);
        self.delta_shift = Some(p.delta_shift);
        self.relaxation_rate = Some(p.relaxation_rate());
        self.precession_rate = Some(p.precession_rate());
        self.steady_state = steady_state(p).ok().as_ref().map(StateEntry::from);
        self.warnings = sc.warnings.clone();
        if let Some(s) = &sc.dynamics.shift {
            self.shift = Some(ShiftSummary {
                value: s.value,
                iterates: s.iterates.clone(),
                final_excision: s.final_excision,
            });
        }
        self.expansion_error = expansion_error(cfg, &mut self.warnings)?;
        Ok(())
    }
}

fn expansion_error(
    cfg: &ScenarioConfig,
    warnings: &mut Vec<Warning>,
) -> Result<Option<f64>, CliError> {
    let Some(theta) = cfg.twist_angle else {
        return Ok(None);
    };
    let (_, warning) = TwistProfile::new(theta, cfg.cavity_length).context("twist_angle")?;
    warnings.extend(warning);
    let medium = scenario::medium(cfg)?;
    Ok(Some(
        first_order_relative_error(&medium, theta).context("twist_angle")?,
    ))
}

pub fn cmd_modes(doc: &Value) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let cav = scenario::cavity(&cfg)?;
    let freqs = twistcav::modes::cavity_frequencies(&cav);
    let set = solve_eigenmodes(&cav.wavevector(), cav.medium()).context("eigenmodes")?;
    let modes = set
        .iter()
        .map(|m| ModeEntry {
            label: match m.label {
                ModeLabel::Longitudinal => "longitudinal",
                ModeLabel::Ordinary => "ordinary",
                ModeLabel::Extraordinary => "extraordinary",
            },
            eigenvalue: m.eigenvalue,
            frequency: m.frequency(),
            direction: [0, 1, 2].map(|i| [m.direction[i].re, m.direction[i].im]),
        })
        .collect();
    let mut summary = RunSummary::empty("modes", doc);
    summary.omega_o = freqs.omega_o;
    summary.omega_e = freqs.omega_e;
    summary.delta_omega = freqs.delta_omega;
    summary.modes = Some(modes);
    summary.expansion_error = expansion_error(&cfg, &mut summary.warnings)?;
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

pub fn cmd_params(doc: &Value) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let sc = Scenario::build(&cfg, cfg.include_delta_shift)?;
    let system =
        build_hamiltonian(&sc.two_level, cfg.fock_cutoff, cfg.rwa).context("fock_cutoff")?;
    let mut summary = RunSummary::empty("params", doc);
    summary.fill(&cfg, &sc)?;
    summary.steady_state = None;
    summary.hamiltonian = Some(HamiltonianSummary {
        fock_cutoff: system.fock_cutoff,
        rwa: system.rwa,
        dimension: system.dimension(),
        hermiticity_defect: system.hermiticity_defect(),
        excitation_commutator: system.excitation_commutator(),
        eigenvalues: system.eigenvalues(),
    });
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

pub fn cmd_steady(doc: &Value) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let sc = Scenario::build(&cfg, cfg.include_delta_shift)?;
    let ss = steady_state(&sc.dynamics.params).context("steady state")?;
    let mut summary = RunSummary::empty("steady", doc);
    summary.fill(&cfg, &sc)?;
    summary.steady_state = Some(StateEntry::from(&ss));
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

pub fn cmd_shift(doc: &Value) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let sc = Scenario::build(&cfg, false)?;
    let dw = sc.frequencies.delta_omega;
    let result =
        frequency_shift(&sc.bath, dw, &QuadratureOptions::default()).context("frequency shift")?;
    let mut summary = RunSummary::empty("shift", doc);
    summary.fill(&cfg, &sc)?;
    summary.delta_shift = Some(result.value);
    summary.precession_rate = Some(dw + 2.0 * result.value);
    summary.shift = Some(ShiftSummary {
        value: result.value,
        iterates: result.iterates,
        final_excision: result.final_excision,
    });
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.times.len() * 130);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        let oe = rho.rho_oe();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(*t),
            num(rho.rho_oo()),
            num(rho.rho_ee()),
            num(oe.re),
            num(oe.im),
            num(oe.norm())
        );
    }
    out
}

pub fn cmd_evolve(doc: &Value, csv: &Path) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let sc = Scenario::build(&cfg, cfg.include_delta_shift)?;
    let p = sc.dynamics.params;
    let rate = p.relaxation_rate();
    let scale = |name: &str, explicit: Option<f64>, factor: f64| match explicit {
        Some(v) => Ok(v),
        None if rate > 0.0 => Ok(factor / rate),
        None => Err(CliError::Config(format!(
            "`time.{name}` is required when the relaxation rate is zero"
        ))),
    };
    let options = EvolveOptions {
        t_final: scale("t_final", cfg.time.t_final, DEFAULT_RELAXATION_TIMES)?,
        dt: scale("dt", cfg.time.dt, DEFAULT_STEP_FRACTION)?,
        stride: cfg.time.stride.unwrap_or(DEFAULT_STRIDE),
    };
    let rho0 = scenario::initial_state(&cfg)?;
    let traj = evolve(&rho0, &p, &options).context("master equation integration")?;
    std::fs::write(csv, trajectory_csv(&traj))?;

    let mut summary = RunSummary::empty("evolve", doc);
    summary.fill(&cfg, &sc)?;
    let (_, last) = traj.last();
    let d = traj.diagnostics;
    summary.trajectory = Some(TrajectorySummary {
        csv: Some(csv.display().to_string()),
        rows: traj.times.len(),
        t_final: options.t_final,
        dt: d.step_size,
        steps: d.steps,
        final_state: StateEntry::from(last),
        final_population_deviation: summary.steady_state.as_ref().map(|ss| {
            (last.rho_oo() - ss.rho_oo)
                .abs()
                .max((last.rho_ee() - ss.rho_ee).abs())
        }),
        max_trace_drift: d.max_trace_drift,
        max_hermiticity_defect: d.max_hermiticity_defect,
        min_eigenvalue: d.min_eigenvalue,
        renormalizations: d.renormalizations,
    });
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

pub fn cmd_oracle(doc: &Value, csv: Option<&Path>) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let sc = Scenario::build(&cfg, false)?;
    let dw = sc.frequencies.delta_omega;
    let spectrum = &sc.bath.spectrum;
    let window = (
        cfg.oracle.window_min.unwrap_or(spectrum.omega_min()),
        cfg.oracle.window_max.unwrap_or(spectrum.omega_max()),
    );
    let bath =
        discretize_bath(spectrum, cfg.oracle.modes, window, dw).context("bath discretization")?;
    // The comparison runs at zero temperature with the golden-rule γ.
    let gamma = sc.dynamics.params.gamma;
    let cmp = compare_with_lindblad(&bath, dw, gamma, cfg.oracle.gamma_t_max, cfg.oracle.samples)
        .context("bath oracle")?;

    if let Some(path) = csv {
        let mut out = String::from("t,gamma_t,lindblad_rho_oo,exact_survival\n");
        for ((t, l), e) in cmp.times.iter().zip(&cmp.lindblad).zip(&cmp.exact) {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                num(*t),
                num(gamma * t),
                num(*l),
                num(*e)
            );
        }
        std::fs::write(path, out)?;
    }

    let mut summary = RunSummary::empty("oracle", doc);
    summary.fill(&cfg, &sc)?;
    summary.n_bar = Some(0.0);
    summary.relaxation_rate = Some(gamma);
    summary.steady_state = None;
    summary.warnings.extend(bath.warnings.iter().cloned());
    let passed = cmp.max_relative_deviation <= cfg.oracle.threshold;
    summary.oracle = Some(OracleSummary {
        modes: bath.modes(),
        window: [window.0, window.1],
        recurrence_time: bath.recurrence_time(),
        gamma,
        gamma_t_max: cfg.oracle.gamma_t_max,
        max_relative_deviation: cmp.max_relative_deviation,
        max_absolute_deviation: cmp.max_absolute_deviation,
        max_exponential_deviation: cmp.max_exponential_deviation,
        max_norm_deviation: cmp.max_norm_deviation,
        threshold: cfg.oracle.threshold,
        passed,
    });
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

/// Advice printed when the oracle comparison misses its threshold.
pub fn oracle_advice(summary: &OracleSummary) -> String {
    format!(
        "max relative deviation {:.3e} exceeds {}; increase `oracle.modes` (now {}) or widen the window so the bath is dense and broad compared to γ",
        summary.max_relative_deviation, summary.threshold, summary.modes
    )
}

pub const SWEEP_COLUMNS: &[&str] = &[
    "delta_omega",
    "coupling",
    "n_bar",
    "gamma",
    "relaxation_rate",
    "delta_shift",
    "rho_oo_steady",
    "rho_ee_steady",
    "expansion_error",
];

fn cell(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn sweep_value(v: &Value) -> String {
    match v.as_f64() {
        Some(x) => num(x),
        None => {
            let s = v.to_string();
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        }
    }
}

/// One parameter summary per swept value, in input order.
pub fn cmd_sweep(doc: &Value, csv: &Path) -> Result<Vec<RunSummary>, CliError> {
    let (key, points) = expand_sweep(doc)?;
    let mut summaries = Vec::with_capacity(points.len());
    let mut out = String::new();
    out.push_str(&key);
    for c in SWEEP_COLUMNS {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (value, point) in &points {
        let s = cmd_steady_lenient(point).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("sweep value {value}: {m}")),
            other => other,
        })?;
        let ss = s.steady_state.as_ref();
        let row = [
            Some(s.delta_omega),
            s.coupling,
            s.n_bar,
            s.gamma,
            s.relaxation_rate,
            s.delta_shift,
            ss.map(|x| x.rho_oo),
            ss.map(|x| x.rho_ee),
            s.expansion_error,
        ];
        out.push_str(&sweep_value(value));
        for v in row {
            out.push(',');
            out.push_str(&cell(v));
        }
        out.push('\n');
        summaries.push(s);
    }
    std::fs::write(csv, out)?;
    Ok(summaries)
}

/// Like `steady`, but a zero decay rate leaves the steady state empty
/// instead of failing the whole sweep.
fn cmd_steady_lenient(doc: &Value) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let cfg = parse_config(doc)?;
    let sc = Scenario::build(&cfg, cfg.include_delta_shift)?;
    let mut summary = RunSummary::empty("sweep", doc);
    summary.fill(&cfg, &sc)?;
    summary.timing_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}
