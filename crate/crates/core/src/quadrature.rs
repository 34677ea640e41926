//! Gauss–Legendre rules and adaptive composite integration.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// n-point rule on [−1, 1]. Nodes are found by Newton iteration on
    /// P_n from the Tricomi initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            weights[i] = w;
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Adaptive composite quadrature: a panel is accepted when the rule on the
/// whole panel and the sum over its two halves agree within the panel's
/// share of the tolerance.
#[derive(Debug, Clone)]
pub struct AdaptiveIntegrator {
    rule: GaussLegendre,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

impl AdaptiveIntegrator {
    pub fn new(order: usize, rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rule: GaussLegendre::new(order),
            rel_tol,
            abs_tol,
            max_depth: 60,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Integral {
        if a == b {
            return Integral {
                value: 0.0,
                error_estimate: 0.0,
                panels: 0,
            };
        }
        let total_width = (b - a).abs();
        let whole = self.rule.integrate(&f, a, b);
        let tol = self.abs_tol.max(self.rel_tol * whole.abs());

        let mut stack = vec![(a, b, whole, 0usize)];
        let mut value = 0.0;
        let mut error = 0.0;
        let mut panels = 0;
        while let Some((lo, hi, estimate, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = self.rule.integrate(&f, lo, mid);
            let right = self.rule.integrate(&f, mid, hi);
            let refined = left + right;
            let diff = (refined - estimate).abs();
            let share = tol * (hi - lo).abs() / total_width;
            if diff <= share || depth >= self.max_depth {
                value += refined;
                error += diff;
                panels += 2;
            } else {
                stack.push((mid, hi, right, depth + 1));
                stack.push((lo, mid, left, depth + 1));
            }
        }
        Integral {
            value,
            error_estimate: error,
            panels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // Degree 9 is the highest exact degree for 5 points.
        let v = rule.integrate(|x| x.powi(9) + x.powi(8), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn known_nodes() {
        let rule = GaussLegendre::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((rule.nodes()[0] - x).abs() < 1e-15 || (rule.nodes()[0] + x).abs() < 1e-15);
        let rule = GaussLegendre::new(3);
        assert!(rule.nodes()[1].abs() < 1e-15);
        assert!((rule.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_log_endpoint() {
        let integ = AdaptiveIntegrator::new(10, 1e-12, 0.0);
        // ∫_ε^1 dx/x = −ln ε
        let eps = 1e-6;
        let r = integ.integrate(|x| 1.0 / x, eps, 1.0);
        assert!((r.value + eps.ln()).abs() < 1e-10);
    }

    #[test]
    fn adaptive_lorentzian() {
        let integ = AdaptiveIntegrator::new(10, 1e-13, 0.0);
        let k = 1e-3;
        let r = integ.integrate(|x| k / (x * x + k * k) / PI, -1.0, 1.0);
        let exact = 2.0 * (1.0 / k).atan() / PI;
        assert!((r.value - exact).abs() < 1e-12);
    }
}
