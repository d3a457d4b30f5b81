//! Gauss–Legendre quadrature, specialised to integrands of the form
//! `exp(q(y))` with `q` quadratic.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n` from Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let step = p / d;
                z -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_lo^hi f(y) dy`.
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(mid + half * z))
            .sum();
        half * sum
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// A quadratic `q(y) = c2 y² + c1 y + c0` recovered from three samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl Quadratic {
    /// Interpolates `q` through `y ∈ {−1, 0, 1}`.
    pub fn probe(mut q: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let (qm, q0, qp) = (q(-1.0)?, q(0.0)?, q(1.0)?);
        Ok(Self {
            c2: 0.5 * (qp + qm) - q0,
            c1: 0.5 * (qp - qm),
            c0: q0,
        })
    }

    pub fn eval(&self, y: f64) -> f64 {
        (self.c2 * y + self.c1) * y + self.c0
    }
}

/// Truncated Gauss–Legendre estimate of `∫ exp(q(y)) dy` for quadratic `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIntegral {
    /// `ln ∫ exp(q)`, computed relative to the maximum so it never overflows.
    pub log_value: f64,
    pub center: f64,
    pub std_dev: f64,
}

/// Half-width of the truncated interval, in standard deviations.
pub const TRUNCATION_SIGMAS: f64 = 12.0;

/// Integrates `exp(log_f)` where `log_f` is quadratic in `y`.
///
/// The shape is read off `log_f` at three points; the interval is centred at
/// the maximum and spans [`TRUNCATION_SIGMAS`] standard deviations each side.
/// The quadrature itself samples `log_f` at the nodes.
pub fn integrate_exp_quadratic(
    rule: &GaussLegendre,
    mut log_f: impl FnMut(f64) -> Result<f64>,
) -> Result<GaussianIntegral> {
    let q = Quadratic::probe(&mut log_f)?;
    if q.c2.is_nan() || q.c2 >= 0.0 {
        return Err(Error::NotNegativeDefinite(q.c2));
    }
    let center = -q.c1 / (2.0 * q.c2);
    let std_dev = (-0.5 / q.c2).sqrt();
    let peak = log_f(center)?;
    let half = TRUNCATION_SIGMAS * std_dev;
    let mut err = None;
    let sum = rule.integrate(center - half, center + half, |y| match log_f(y) {
        Ok(v) => (v - peak).exp(),
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(GaussianIntegral {
        log_value: peak + sum.ln(),
        center,
        std_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 2n - 1 = 9
        let got = rule.integrate(-1.0, 2.0, |y| y.powi(9) - 3.0 * y.powi(4) + 1.0);
        let want = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (32.0 + 1.0) / 5.0 + 3.0;
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 7, 100, 200] {
            let rule = GaussLegendre::new(n);
            assert_eq!(rule.len(), n);
            let s = rule.integrate(-1.0, 1.0, |_| 1.0);
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn gaussian_integral_matches_closed_form() {
        let rule = GaussLegendre::new(200);
        // ∫ exp(−(y − 3)²/(2·0.01) + 5) dy = √(2π·0.01)·e⁵
        let g = integrate_exp_quadratic(&rule, |y| Ok(-(y - 3.0).powi(2) / 0.02 + 5.0)).unwrap();
        let want = 0.5 * (2.0 * PI * 0.01f64).ln() + 5.0;
        assert!((g.log_value - want).abs() < 1e-13);
        assert!((g.center - 3.0).abs() < 1e-12);
        assert!((g.std_dev - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rejects_growing_integrand() {
        let rule = GaussLegendre::new(10);
        assert!(matches!(
            integrate_exp_quadratic(&rule, |y| Ok(y * y)),
            Err(Error::NotNegativeDefinite(_))
        ));
        assert!(integrate_exp_quadratic(&rule, |y| Ok(2.0 * y)).is_err());
    }
}
