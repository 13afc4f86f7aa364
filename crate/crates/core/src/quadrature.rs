//! Gauss-Legendre quadrature used for the shadowing/thermal convolution
//! integral in the measurement likelihood.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters for the one-dimensional convolution integral over thermal noise.
///
/// The integration interval is the thermal mean plus/minus
/// `half_width_sigmas` thermal standard deviations; 8 sigmas leaves less than
/// 1e-15 of the Gaussian mass outside the interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Number of Gauss-Legendre nodes.
    pub nodes: usize,
    /// Half-width of the integration interval in units of the thermal std.
    pub half_width_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: 64,
            half_width_sigmas: 8.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::Config(format!(
                "quadrature.nodes must be >= 2, got {}",
                self.nodes
            )));
        }
        if !(self.half_width_sigmas > 0.0 && self.half_width_sigmas.is_finite()) {
            return Err(Error::Config(format!(
                "quadrature.half_width_sigmas must be positive, got {}",
                self.half_width_sigmas
            )));
        }
        Ok(())
    }
}

/// A Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the n-point rule via Newton iteration on the Legendre
    /// polynomial P_n (roots bracketed by the Chebyshev initial guess).
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!(
                "Gauss-Legendre rule needs >= 2 nodes, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Ok(GaussLegendre { nodes, weights })
    }

    /// Node/weight pairs scaled to the interval [a, b].
    pub fn scaled(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.scaled(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Evaluates (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Process-wide cache of rules keyed by node count; building a 64-point rule
/// is cheap but likelihood evaluations happen millions of times per run.
pub fn cached_rule(n: usize) -> Result<Arc<GaussLegendre>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().expect("quadrature cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(GaussLegendre::new(n)?);
    cache
        .write()
        .expect("quadrature cache poisoned")
        .insert(n, Arc::clone(&rule));
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn five_point_nodes_match_reference() {
        // Abramowitz & Stegun table 25.4.
        let rule = GaussLegendre::new(5).unwrap();
        let expect = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        for (got, want) in rule.nodes.iter().zip(expect.iter()) {
            assert_relative_eq!(got, want, epsilon = 1e-12);
        }
        let wexpect = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        for (got, want) in rule.weights.iter().zip(wexpect.iter()) {
            assert_relative_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8).unwrap();
        // Degree up to 2n-1 is exact.
        let got = rule.integrate(-1.0, 1.0, |x| x.powi(6));
        assert_relative_eq!(got, 2.0 / 7.0, epsilon = 1e-14);
        let got = rule.integrate(0.0, 2.0, |x| 3.0 * x * x);
        assert_relative_eq!(got, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_mass_captured() {
        let rule = GaussLegendre::new(64).unwrap();
        let sigma = 0.3;
        let mass = rule.integrate(-8.0 * sigma, 8.0 * sigma, |x| {
            (-(x * x) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        });
        assert_relative_eq!(mass, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let rule = GaussLegendre::new(33).unwrap();
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-13);
    }
}
