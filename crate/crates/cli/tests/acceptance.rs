//! Acceptance suite: runs every criterion at its stated tolerance and time
//! limit, prints one PASS/FAIL line per criterion, and fails if any missed.
//!
//! Run with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use twistcav::hamiltonian::{coupling_constant, TwoLevelParams};
use twistcav::lindblad::{
    analytic_solution, decay_rate, evolve, frequency_shift, steady_state, BathParams,
    CouplingSpectrum, DensityMatrix2, DynamicsParams, EvolveOptions, QuadratureOptions,
    Temperature,
};
use twistcav::modes::{
    check_orthonormality, eigen_residual, gram_deviation, solve_eigenmodes,
    solve_eigenmodes_numeric, CavityConfig, WaveVector,
};
use twistcav::oracle::{compare_with_lindblad, discretize_bath, jc_rabi_check};
use twistcav::tensor::{first_order_relative_error, Strictness, UniaxialMedium};

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(
    results: &mut Vec<bool>,
    number: usize,
    name: &str,
    limit: Duration,
    body: impl FnOnce() -> Outcome,
) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let passed = outcome.passed && in_time;
    println!(
        "[{}] {number:>2}. {name}: {}; {:.2} s (limit {} s)",
        if passed { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    results.push(passed);
}

fn workspace_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn quartz_cavity() -> CavityConfig {
    CavityConfig::new(1e-4, UniaxialMedium::quartz()).unwrap()
}

/// Thermal-relaxation scenario parameters built directly from the library: quartz,
/// 300 K, L = 1e-4 cm, resonant Lorentzian bath with Q = 10.
fn thermal_bath(omega_min: f64) -> (TwoLevelParams, BathParams) {
    let cav = quartz_cavity();
    let dw = twistcav::modes::cavity_frequencies(&cav).delta_omega;
    let g = coupling_constant(&cav).unwrap();
    let tl = TwoLevelParams::from_parts(dw, dw, g).unwrap();
    let s = CouplingSpectrum::lorentzian_from_quality(g, dw, 10.0, omega_min, 2.0 * dw).unwrap();
    let bath = BathParams::new(s, Temperature::Kelvin(300.0), dw).unwrap();
    (tl, bath)
}

fn thermal_params(include_shift: bool) -> DynamicsParams {
    let (tl, bath) = thermal_bath(3.5e9);
    let opts = twistcav::lindblad::DynamicsOptions {
        include_shift,
        ..Default::default()
    };
    twistcav::lindblad::derive_dynamics(&tl, &bath, &opts)
        .unwrap()
        .params
}

fn read_csv(path: &std::path::Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn run_thermal(dir: &std::path::Path) -> Result<(String, Vec<Vec<f64>>), String> {
    let csv = dir.join("thermal.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_twistcav"))
        .arg("evolve")
        .arg(workspace_file("configs/thermal_relaxation.json"))
        .arg("--csv")
        .arg(&csv)
        .arg("--out")
        .arg(dir.join("thermal.json"))
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("evolve exited with {status}"));
    }
    Ok(read_csv(&csv))
}

/// Least-squares slope of y against x.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn steady_state_reproduction(dir: &std::path::Path) -> Outcome {
    let p = thermal_params(false);
    let ss = steady_state(&p).unwrap();
    let (_, rows) = match run_thermal(dir) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                passed: false,
                detail: e,
            }
        }
    };
    let last = rows.last().unwrap();
    let t_gamma = last[0] * p.relaxation_rate();
    let pop = (last[1] - ss.rho_oo())
        .abs()
        .max((last[2] - ss.rho_ee()).abs());
    let coh = last[5];
    let n_ok = (p.n_bar - 10.66).abs() < 0.01;
    Outcome {
        passed: t_gamma >= 20.0 && pop <= 1e-6 && coh <= 1e-8 && n_ok,
        detail: format!(
            "n = {:.4}, Γt_final = {t_gamma:.1}, max |Δpop| = {pop:.2e} (≤ 1e-6), |ρ_oe| = {coh:.2e} (≤ 1e-8)",
            p.n_bar
        ),
    }
}

fn qualitative_reproduction(dir: &std::path::Path) -> Outcome {
    let p = thermal_params(false);
    let ss = steady_state(&p).unwrap();
    let (header, rows) = match run_thermal(dir) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                passed: false,
                detail: e,
            }
        }
    };
    // Non-increasing distance to the limit, allowing for last-bit rounding
    // once the signal reaches the f64 floor.
    let slack = 4.0 * f64::EPSILON;
    let monotone = |col: usize, target: f64| {
        rows.windows(2)
            .filter(|w| (w[1][col] - target).abs() > (w[0][col] - target).abs() + slack)
            .count()
    };
    let oo = monotone(1, ss.rho_oo());
    let ee = monotone(2, ss.rho_ee());
    let coh = monotone(5, 0.0);
    // Populations approach from one side only.
    let side = rows
        .iter()
        .all(|r| r[1] >= ss.rho_oo() - slack && r[2] <= ss.rho_ee() + slack);
    let coherence_end = rows.last().unwrap()[5];
    Outcome {
        passed: header == "t,rho_oo,rho_ee,re_rho_oe,im_rho_oe,abs_rho_oe"
            && oo == 0
            && ee == 0
            && coh == 0
            && side
            && coherence_end <= 1e-8,
        detail: format!(
            "{} rows; monotonicity violations ρ_oo {oo}, ρ_ee {ee}, |ρ_oe| {coh}; one-sided approach {side}; final |ρ_oe| {coherence_end:.1e}",
            rows.len()
        ),
    }
}

fn decay_law_recovery() -> Outcome {
    let p = thermal_params(true);
    let big_gamma = p.relaxation_rate();
    let rho0 = DensityMatrix2::diagonal_polarization();
    let opts = EvolveOptions {
        t_final: 5.0 / big_gamma,
        dt: 1e-3 / big_gamma,
        stride: 10,
    };
    let traj = evolve(&rho0, &p, &opts).unwrap();
    let ss = steady_state(&p).unwrap();
    let t = &traj.times;
    let pop: Vec<f64> = traj
        .states
        .iter()
        .map(|s| (s.rho_oo() - ss.rho_oo()).abs().ln())
        .collect();
    let coh: Vec<f64> = traj.states.iter().map(|s| s.rho_oe().norm().ln()).collect();
    let mut phase = Vec::with_capacity(t.len());
    let mut offset = 0.0;
    let mut prev = traj.states[0].rho_oe().arg();
    for s in &traj.states {
        let a = s.rho_oe().arg();
        let mut d = a - prev;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        offset += d;
        prev = a;
        phase.push(offset);
    }
    let pop_rate = -slope(t, &pop);
    let coh_rate = -slope(t, &coh);
    let phase_rate = -slope(t, &phase);
    let e1 = (pop_rate / big_gamma - 1.0).abs();
    let e2 = (coh_rate / (0.5 * big_gamma) - 1.0).abs();
    let e3 = (phase_rate / p.precession_rate() - 1.0).abs();
    Outcome {
        passed: e1 <= 1e-3 && e2 <= 1e-3 && e3 <= 1e-3 && p.delta_shift != 0.0,
        detail: format!(
            "relative errors: population {e1:.1e}, coherence {e2:.1e}, phase {e3:.1e} (each ≤ 1e-3; δ = {:.3e} rad/s)",
            p.delta_shift
        ),
    }
}

fn analytic_vs_rk4() -> Outcome {
    let p = thermal_params(false);
    let big_gamma = p.relaxation_rate();
    let rho0 = DensityMatrix2::diagonal_polarization();
    let error = |dt: f64| {
        let opts = EvolveOptions {
            t_final: 40.0 / big_gamma,
            dt,
            stride: 1,
        };
        let traj = evolve(&rho0, &p, &opts).unwrap();
        traj.times
            .iter()
            .zip(&traj.states)
            .map(|(t, s)| s.max_abs_diff(&analytic_solution(&rho0, &p, *t)))
            .fold(0.0, f64::max)
    };
    let coarse = error(1e-3 / big_gamma);
    let fine = error(0.5e-3 / big_gamma);
    let ratio = coarse / fine;
    Outcome {
        passed: coarse <= 1e-8 && (12.0..=20.0).contains(&ratio),
        detail: format!("max deviation {coarse:.2e} at dt = 1e-3/Γ (≤ 1e-8), {fine:.2e} at half step, ratio {ratio:.2} (in [12, 20])"),
    }
}

fn eigenmode_suite() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let (mut res, mut gram, mut eig, mut angle) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let eps_o = rng.gen_range(1.2..4.0);
        let eps_e = eps_o * rng.gen_range(1.0001..1.5);
        let medium = UniaxialMedium::new(eps_o, eps_e).unwrap();
        let k = loop {
            let v = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let scale = 10f64.powf(rng.gen_range(0.0..6.0));
            let k = WaveVector::new(v[0] * scale, v[1] * scale, v[2] * scale);
            if k.stretched_transverse(&medium) > 1e-3 * k.stretched(&medium).norm() {
                break k;
            }
        };
        let closed = solve_eigenmodes(&k, &medium).unwrap();
        let numeric = solve_eigenmodes_numeric(&k, &medium).unwrap();
        for m in closed.iter() {
            res = res.max(eigen_residual(&k, &medium, m).unwrap());
        }
        gram = gram.max(gram_deviation(&check_orthonormality(&closed, &medium)));
        let k2 = k.magnitude().powi(2);
        let kp2 = k.stretched(&medium).norm_squared();
        let analytic = [0.0, k2 / eps_o, kp2 / (eps_o * eps_e)];
        let scale = analytic[1].max(analytic[2]);
        for (m, a) in numeric.iter().zip(analytic) {
            eig = eig.max((m.eigenvalue - a).abs() / scale);
        }
        for (a, b) in closed.iter().zip(numeric.iter()) {
            angle = angle.max(twistcav::modes::direction_angle(&a.direction, &b.direction));
        }
    }
    Outcome {
        passed: res <= 1e-10 && gram <= 1e-12 && eig <= 1e-10 && angle <= 1e-10,
        detail: format!(
            "100 random cases: max residual {res:.1e}, Gram deviation {gram:.1e}, eigenvalue error {eig:.1e}, closed-vs-numeric angle {angle:.1e}"
        ),
    }
}

fn expansion_order() -> Outcome {
    let medium = UniaxialMedium::quartz();
    let thetas: Vec<f64> = (0..=30)
        .map(|i| 10f64.powf(-4.0 + 3.0 * i as f64 / 30.0))
        .collect();
    let x: Vec<f64> = thetas.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = thetas
        .iter()
        .map(|&t| first_order_relative_error(&medium, t).unwrap().ln())
        .collect();
    let s = slope(&x, &y);
    Outcome {
        passed: (s - 2.0).abs() <= 0.05,
        detail: format!("log-log slope {s:.4} over θ ∈ [1e-4, 1e-1] (2.00 ± 0.05)"),
    }
}

fn coupling_constant_check() -> Outcome {
    let g = coupling_constant(&quartz_cavity()).unwrap();
    // Independent arithmetic: G = −(c/16L)·(n_e² − n_o²)/(n_o² n_e²)/√(2 n_o n_e).
    let (c, l, no, ne) = (2.9979e10_f64, 1e-4_f64, 1.547_f64, 1.556_f64);
    let reference =
        -(c / (16.0 * l)) * (ne * ne - no * no) / (no * no * ne * ne) / (2.0 * no * ne).sqrt();
    let rel = (g / reference - 1.0).abs();
    let quoted = (g / -4.116e10 - 1.0).abs();
    let iso = UniaxialMedium::from_indices(1.5, 1.5, Strictness::Relaxed).unwrap();
    let g_iso = coupling_constant(&CavityConfig::new(1e-4, iso).unwrap()).unwrap();
    Outcome {
        passed: rel <= 1e-3 && quoted <= 1e-3 && g_iso == 0.0,
        detail: format!("G = {g:.6e} rad/s, re-derivation {reference:.6e} (rel {rel:.1e}); n_o = n_e gives G = 0: {}", g_iso == 0.0),
    }
}

fn wigner_weisskopf() -> Outcome {
    let cav = quartz_cavity();
    let dw = twistcav::modes::cavity_frequencies(&cav).delta_omega;
    let g = coupling_constant(&cav).unwrap();
    let window = (0.0, 2.0 * dw);
    let s = CouplingSpectrum::flat_from_single_mode(g, window.0, window.1).unwrap();
    let (gamma, _) = decay_rate(&s, dw);
    let deviation = |m: usize| {
        let bath = discretize_bath(&s, m, window, dw).unwrap();
        compare_with_lindblad(&bath, dw, gamma, 3.0, 300).unwrap()
    };
    let a = deviation(4096);
    let b = deviation(8192);
    // "Not worse" up to float noise in the last digits.
    let not_worse = b.max_relative_deviation <= a.max_relative_deviation * (1.0 + 1e-9);
    Outcome {
        passed: a.max_relative_deviation <= 0.02 && not_worse && a.max_norm_deviation <= 1e-10,
        detail: format!(
            "max relative deviation on γt ∈ [0, 3]: {:.3e} at M = 4096 (≤ 2e-2), {:.3e} at M = 8192 (not worse: {not_worse}); norm drift {:.1e}",
            a.max_relative_deviation, b.max_relative_deviation, a.max_norm_deviation
        ),
    }
}

fn jaynes_cummings() -> Outcome {
    let cav = quartz_cavity();
    let dw = twistcav::modes::cavity_frequencies(&cav).delta_omega;
    let g = coupling_constant(&cav).unwrap();
    let p = TwoLevelParams::from_parts(dw, dw, g).unwrap();
    let times: Vec<f64> = (0..=1000)
        .map(|i| 10.0 * i as f64 / 1000.0 / g.abs())
        .collect();
    let r = jc_rabi_check(&p, 3, &times).unwrap();
    Outcome {
        passed: r.rwa_max_deviation <= 1e-8,
        detail: format!(
            "RWA max |P − cos²(|G|t)| = {:.1e} (≤ 1e-8) over |G|t ≤ 10; full Rabi deviation {:.1e} (reported)",
            r.rwa_max_deviation, r.full_max_deviation
        ),
    }
}

fn principal_value() -> Outcome {
    let cav = quartz_cavity();
    let dw = twistcav::modes::cavity_frequencies(&cav).delta_omega;
    let g = coupling_constant(&cav).unwrap();
    let omega_max = 3.0 * dw;
    let s = CouplingSpectrum::flat_from_single_mode(g, 0.0, omega_max).unwrap();
    let g2 = g * g / omega_max;
    let r = frequency_shift(
        &BathParams::zero_temperature(s),
        dw,
        &QuadratureOptions::default(),
    )
    .unwrap();
    let exact = 0.5 * g2 * (dw / (omega_max - dw)).ln();
    let rel = (r.value / exact - 1.0).abs();

    let s = CouplingSpectrum::flat_from_single_mode(g, 0.0, 2.0 * dw).unwrap();
    let g2_sym = g * g / (2.0 * dw);
    let sym = frequency_shift(
        &BathParams::zero_temperature(s),
        dw,
        &QuadratureOptions::default(),
    )
    .unwrap()
    .value;
    Outcome {
        passed: rel <= 1e-6 && sym.abs() <= 1e-12 * g2_sym,
        detail: format!(
            "flat T = 0: relative error {rel:.1e} (≤ 1e-6); symmetric window |δ|/G² = {:.1e} (≤ 1e-12)",
            sym.abs() / g2_sym
        ),
    }
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut results = Vec::new();
    let secs = Duration::from_secs;
    criterion(
        &mut results,
        1,
        "steady-state reproduction",
        secs(5),
        || steady_state_reproduction(dir.path()),
    );
    criterion(&mut results, 2, "qualitative dynamics", secs(5), || {
        qualitative_reproduction(dir.path())
    });
    criterion(
        &mut results,
        3,
        "decay-law recovery",
        secs(10),
        decay_law_recovery,
    );
    criterion(
        &mut results,
        4,
        "analytic vs RK4",
        secs(30),
        analytic_vs_rk4,
    );
    criterion(&mut results, 5, "eigenmode suite", secs(5), eigenmode_suite);
    criterion(&mut results, 6, "expansion order", secs(1), expansion_order);
    criterion(
        &mut results,
        7,
        "coupling constant",
        secs(1),
        coupling_constant_check,
    );
    criterion(
        &mut results,
        8,
        "Wigner-Weisskopf oracle",
        secs(60),
        wigner_weisskopf,
    );
    criterion(
        &mut results,
        9,
        "Jaynes-Cummings check",
        secs(5),
        jaynes_cummings,
    );
    criterion(
        &mut results,
        10,
        "principal-value quadrature",
        secs(5),
        principal_value,
    );

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
