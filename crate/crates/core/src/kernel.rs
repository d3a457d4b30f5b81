//! Closed-form heat kernels.
//!
//! Kernels have the form
//!
//! ```text
//! P(t; x, x0) = φ(t) · exp(α x² + β x x0 + γ x0² + μ x + ν x0)
//! ```
//!
//! and solve `∂ₜP = θ∂ₓ²P − (ax + b)∂ₓP − ρx²P` in the forward variable `x`.
//! The three families (hyperbolic, critical, oscillatory) are evaluated in
//! log-space so that `sinh` overflow and `1/sinh` underflow never surface.
//!
//! `P` is a density with respect to the reference measure
//! `m(dy) = exp(−(a y² + 2b y)/(2θ)) dy` (see [`log_reference_density`]):
//! the semigroup acts as `f ↦ ∫ P(t; ·, y) f(y) m(dy)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result, SingularTimeError};
use crate::operator::{regime, OUOperator, ProductOperator, RegimeKind};
use crate::special::ln_sinh;

/// Relative width of the rejected window around each singular time.
pub const SINGULAR_WINDOW: f64 = 1e-12;

/// The six ansatz coefficients at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
    pub nu: f64,
    pub log_phi: f64,
}

impl KernelCoefficients {
    /// `ln P(t; x, x0)` from the coefficients.
    pub fn log_kernel(&self, x: f64, x0: f64) -> f64 {
        self.log_phi
            + self.alpha * x * x
            + self.beta * x * x0
            + self.gamma * x0 * x0
            + self.mu * x
            + self.nu * x0
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

fn singular_check(lambda0: f64, t: f64) -> Result<f64> {
    let phase = lambda0 * t;
    let sin = phase.sin();
    let window = SINGULAR_WINDOW.max(SINGULAR_WINDOW * phase);
    if sin.abs() < window {
        let k = (phase / PI).round().max(1.0) as u64;
        return Err(SingularTimeError {
            t,
            k,
            t_singular: k as f64 * PI / lambda0,
            window: window / lambda0,
        }
        .into());
    }
    Ok(sin)
}

/// Evaluates the six coefficients at time `t`.
///
/// Past the first oscillatory window `sin(λ₀t) < 0` and the prefactor is
/// imaginary; `log_phi` then holds the log of its modulus.
pub fn coefficients(op: &OUOperator, t: f64) -> Result<KernelCoefficients> {
    check_time(t)?;
    let (theta, a, b, rho) = (op.theta(), op.a(), op.b(), op.rho());
    let reg = regime(op);
    let delta = reg.discriminant();
    let ab = a * b;
    let drift = a / (4.0 * theta);
    let offset = b / (2.0 * theta);

    let c = match reg.kind() {
        RegimeKind::Critical => {
            let alpha = drift - 1.0 / (4.0 * theta * t);
            let mu = -ab * t / (4.0 * theta) + offset;
            KernelCoefficients {
                alpha,
                beta: 1.0 / (2.0 * theta * t),
                gamma: alpha,
                mu,
                nu: mu,
                log_phi: -0.5 * (4.0 * PI * theta * t).ln()
                    + (0.5 * a - b * b / (4.0 * theta)) * t
                    + ab * ab * t * t * t / (48.0 * theta),
            }
        }
        RegimeKind::Hyperbolic { lambda0: l } => {
            let lt = l * t;
            let coth = 1.0 / lt.tanh();
            // 1/sinh via e^{-lt}, which underflows gracefully instead of overflowing.
            let csch = 2.0 * (-lt).exp() / (-(-2.0 * lt).exp_m1());
            let alpha = drift - l / (4.0 * theta) * coth;
            let half = (0.5 * lt).tanh();
            let mu = -ab / (2.0 * theta * l) * half + offset;
            KernelCoefficients {
                alpha,
                beta: l / (2.0 * theta) * csch,
                gamma: alpha,
                mu,
                nu: mu,
                log_phi: 0.5 * ((l / (4.0 * PI * theta)).ln() - ln_sinh(lt))
                    + (0.5 * a - rho * b * b / delta) * t
                    - ab * ab / (2.0 * theta * l * l * l) * half,
            }
        }
        RegimeKind::Oscillatory { lambda0: l } => {
            let sin = singular_check(l, t)?;
            let lt = l * t;
            let cot = lt.cos() / sin;
            let alpha = drift - l / (4.0 * theta) * cot;
            // tan(λ₀t/2) = (1 − cos λ₀t)/sin λ₀t
            let half = 2.0 * (0.5 * lt).sin().powi(2) / sin;
            let mu = -ab / (2.0 * theta * l) * half + offset;
            KernelCoefficients {
                alpha,
                beta: l / (2.0 * theta * sin),
                gamma: alpha,
                mu,
                nu: mu,
                log_phi: 0.5 * (l / (4.0 * PI * theta * sin.abs())).ln()
                    + (0.5 * a - rho * b * b / delta) * t
                    + ab * ab / (2.0 * theta * l * l * l) * half,
            }
        }
    };
    Ok(c)
}

/// `ln P(t; x, x0)`.
pub fn log_kernel(op: &OUOperator, t: f64, x: f64, x0: f64) -> Result<f64> {
    Ok(coefficients(op, t)?.log_kernel(x, x0))
}

/// `P(t; x, x0)`; a single exponential of [`log_kernel`].
pub fn kernel(op: &OUOperator, t: f64, x: f64, x0: f64) -> Result<f64> {
    log_kernel(op, t, x, x0).map(f64::exp)
}

/// `ln` of the density of the reference measure, `−(a y² + 2b y)/(2θ)`.
pub fn log_reference_density(op: &OUOperator, y: f64) -> f64 {
    -(op.a() * y * y + 2.0 * op.b() * y) / (2.0 * op.theta())
}

/// Log of the product kernel: the sum of the per-coordinate 1-d logs.
pub fn log_kernel_nd(pop: &ProductOperator, t: f64, x: &[f64], x0: &[f64]) -> Result<f64> {
    check_time(t)?;
    let n = pop.dim();
    for got in [x.len(), x0.len()] {
        if got != n {
            return Err(Error::DimensionMismatch { expected: n, got });
        }
    }
    pop.factors()
        .iter()
        .zip(x.iter().zip(x0))
        .enumerate()
        .map(|(index, (op, (&xi, &x0i)))| {
            log_kernel(op, t, xi, x0i).map_err(|e| Error::Factor {
                index,
                source: Box::new(e),
            })
        })
        .sum()
}

/// Conjugate times `kπ/λ₀ ≤ t_max` of an oscillatory operator, increasing.
pub fn singular_times(op: &OUOperator, t_max: f64) -> Vec<f64> {
    match regime(op).kind() {
        RegimeKind::Oscillatory { lambda0 } => (1u64..)
            .map(|k| k as f64 * PI / lambda0)
            .take_while(|&t| t <= t_max)
            .collect(),
        _ => Vec::new(),
    }
}

/// End of the first regular window: `π/λ₀` for oscillatory operators, `∞` otherwise.
pub fn first_singular_time(op: &OUOperator) -> f64 {
    match regime(op).kind() {
        RegimeKind::Oscillatory { lambda0 } => PI / lambda0,
        _ => f64::INFINITY,
    }
}
