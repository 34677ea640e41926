//! Principal-value frequency shift
//! δ = P∫ dω G(ω)² (n(ω) + 1/2) / (Δω − ω).
//!
//! A window [Δω − η, Δω + η] around the pole is excised. On the symmetric
//! part of the range the two sides are folded onto u = |ω − Δω|, which
//! leaves the smooth integrand (f(Δω − u) − f(Δω + u))/u; the rest of the
//! range is regular. The excised window contributes an odd power series in
//! η, so successive halvings of η are combined by Richardson extrapolation
//! with exponents 1, 3, 5, …

use crate::error::{Error, Result};
use crate::quadrature::AdaptiveIntegrator;

use super::bath::BathParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Initial excision half-width as a fraction of the symmetric half-range.
    pub initial_excision: f64,
    pub gauss_order: usize,
    /// Convergence threshold between successive extrapolated values.
    pub rel_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            initial_excision: 0.125,
            gauss_order: 16,
            rel_tol: 1e-6,
            max_refinements: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResult {
    /// δ in rad/s.
    pub value: f64,
    /// Diagonal of the Richardson table, one entry per excision width.
    pub iterates: Vec<f64>,
    pub final_excision: f64,
}

pub fn frequency_shift(
    bath: &BathParams,
    delta_omega: f64,
    options: &QuadratureOptions,
) -> Result<ShiftResult> {
    let spectrum = &bath.spectrum;
    let (a, b) = (spectrum.omega_min(), spectrum.omega_max());
    if !(delta_omega > 0.0 && delta_omega < b) {
        return Err(Error::domain(format!(
            "Δω = {delta_omega:e} must lie strictly inside (0, ω_max = {b:e})"
        )));
    }
    if bath.beta.is_finite() && a <= 0.0 && spectrum.density_at_lower_edge() > 0.0 {
        return Err(Error::NonIntegrableEndpoint { omega_min: a });
    }

    let f = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        spectrum.coupling_density(w) * (bath.occupation(w) + 0.5)
    };

    // Scale for the absolute tolerance: the integrand's size times the range.
    let samples = 257;
    let peak = (0..samples)
        .map(|i| f(a + (b - a) * (i as f64 + 0.5) / samples as f64).abs())
        .fold(f(delta_omega).abs(), f64::max);
    let abs_tol = 1e-14 * peak;
    let integrator = AdaptiveIntegrator::new(options.gauss_order, 1e-12, abs_tol);

    if delta_omega <= a {
        let v = integrator
            .integrate(|w| f(w) / (delta_omega - w), a, b)
            .value;
        return Ok(ShiftResult {
            value: v,
            iterates: vec![v],
            final_excision: 0.0,
        });
    }

    let half = (delta_omega - a).min(b - delta_omega);
    let remainder = if delta_omega - a > b - delta_omega {
        integrator.integrate(|w| f(w) / (delta_omega - w), a, delta_omega - half)
    } else {
        integrator.integrate(|w| f(w) / (delta_omega - w), delta_omega + half, b)
    }
    .value;

    let folded = |u: f64| (f(delta_omega - u) - f(delta_omega + u)) / u;
    let excised = |eta: f64| remainder + integrator.integrate(folded, eta, half).value;

    let mut eta = options.initial_excision * half;
    let mut table: Vec<Vec<f64>> = vec![vec![excised(eta)]];
    let mut iterates = vec![table[0][0]];
    for k in 1..=options.max_refinements {
        eta *= 0.5;
        let mut row = vec![excised(eta)];
        for j in 1..=k {
            let p = (2 * j - 1) as i32;
            let factor = 2f64.powi(p) - 1.0;
            let next = row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / factor;
            row.push(next);
        }
        let last = row[k];
        let previous = table[k - 1][k - 1];
        iterates.push(last);
        table.push(row);
        if (last - previous).abs() <= options.rel_tol * last.abs() + abs_tol * (b - a) {
            return Ok(ShiftResult {
                value: last,
                iterates,
                final_excision: eta,
            });
        }
    }
    let n = iterates.len();
    Err(Error::QuadratureNotConverged {
        previous: iterates[n - 2],
        last: iterates[n - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::bath::{CouplingSpectrum, SpectralProfile, Temperature};

    fn flat(g2: f64, a: f64, b: f64) -> CouplingSpectrum {
        CouplingSpectrum::new(SpectralProfile::Flat { g2_density: g2 }, a, b).unwrap()
    }

    #[test]
    fn flat_zero_temperature_closed_form() {
        let g2 = 1.7e21;
        let (dw, wmax) = (3.5e12, 1.1e13);
        let bath = BathParams::zero_temperature(flat(g2, 0.0, wmax));
        let r = frequency_shift(&bath, dw, &QuadratureOptions::default()).unwrap();
        let exact = 0.5 * g2 * (dw / (wmax - dw)).ln();
        assert!(
            (r.value / exact - 1.0).abs() < 1e-6,
            "{} vs {exact}",
            r.value
        );
    }

    #[test]
    fn pole_at_center_vanishes() {
        let g2 = 2.0;
        let bath = BathParams::zero_temperature(flat(g2, 0.0, 8.0));
        let r = frequency_shift(&bath, 4.0, &QuadratureOptions::default()).unwrap();
        assert!(r.value.abs() <= 1e-12 * g2);
    }

    #[test]
    fn symmetric_lorentzian_vanishes() {
        let s = CouplingSpectrum::new(
            SpectralProfile::Lorentzian {
                weight: 3.0,
                center: 5.0,
                width: 0.2,
            },
            1.0,
            9.0,
        )
        .unwrap();
        let bath = BathParams::zero_temperature(s);
        let r = frequency_shift(&bath, 5.0, &QuadratureOptions::default()).unwrap();
        assert!(r.value.abs() <= 1e-12 * 3.0, "{}", r.value);
    }

    /// Singularity subtraction plus composite Simpson, independent of the
    /// excision/Richardson path.
    fn subtraction_oracle(bath: &BathParams, dw: f64) -> f64 {
        let s = &bath.spectrum;
        let (a, b) = (s.omega_min(), s.omega_max());
        let f = |w: f64| s.coupling_density(w) * (bath.occupation(w) + 0.5);
        let f0 = f(dw);
        let g = |w: f64| {
            if (w - dw).abs() < 1e-9 * dw {
                // removable point; neighbours dominate the Simpson sum anyway
                let h = 1e-6 * dw;
                -(f(dw + h) - f(dw - h)) / (2.0 * h)
            } else {
                (f(w) - f0) / (dw - w)
            }
        };
        let n = 2_000_000;
        let h = (b - a) / n as f64;
        let mut sum = g(a) + g(b);
        for i in 1..n {
            let w = a + i as f64 * h;
            sum += if i % 2 == 1 { 4.0 } else { 2.0 } * g(w);
        }
        sum * h / 3.0 + f0 * ((dw - a) / (b - dw)).ln()
    }

    #[test]
    fn thermal_lorentzian_against_subtraction_oracle() {
        let s = CouplingSpectrum::new(
            SpectralProfile::Lorentzian {
                weight: 1.0,
                center: 4.5,
                width: 0.8,
            },
            0.5,
            10.0,
        )
        .unwrap();
        let bath = BathParams::new(s, Temperature::BetaDeltaOmega(0.4), 4.0).unwrap();
        let r = frequency_shift(&bath, 4.0, &QuadratureOptions::default()).unwrap();
        let oracle = subtraction_oracle(&bath, 4.0);
        assert!(
            (r.value / oracle - 1.0).abs() < 1e-6,
            "{} vs {oracle}",
            r.value
        );
    }

    #[test]
    fn flat_spectrum_at_finite_temperature_needs_cutoff() {
        let s = flat(1.0, 0.0, 10.0);
        let bath = BathParams::new(s, Temperature::BetaDeltaOmega(0.1), 4.0).unwrap();
        assert!(matches!(
            frequency_shift(&bath, 4.0, &QuadratureOptions::default()),
            Err(Error::NonIntegrableEndpoint { .. })
        ));
        let s = flat(1.0, 0.01, 10.0);
        let bath = BathParams::new(s, Temperature::BetaDeltaOmega(0.1), 4.0).unwrap();
        assert!(frequency_shift(&bath, 4.0, &QuadratureOptions::default()).is_ok());
    }

    #[test]
    fn pole_outside_range_rejected() {
        let bath = BathParams::zero_temperature(flat(1.0, 0.0, 2.0));
        assert!(frequency_shift(&bath, 3.0, &QuadratureOptions::default()).is_err());
        assert!(frequency_shift(&bath, 0.0, &QuadratureOptions::default()).is_err());
    }

    #[test]
    fn refinement_budget_exhaustion_reports_iterates() {
        let s = flat(1.0, 0.01, 10.0);
        let bath = BathParams::new(s, Temperature::BetaDeltaOmega(0.3), 4.0).unwrap();
        let opts = QuadratureOptions {
            max_refinements: 1,
            rel_tol: 1e-300,
            ..Default::default()
        };
        match frequency_shift(&bath, 4.0, &opts) {
            Err(Error::QuadratureNotConverged { previous, last }) => {
                assert!(previous.is_finite() && last.is_finite());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
