//! Finite-difference residuals of the heat equation and of the coefficient ODEs.

use crate::error::{Error, Result};
use crate::kernel::{coefficients, log_kernel, KernelCoefficients};
use crate::operator::OUOperator;

use super::VerificationReport;

pub const PDE_TOLERANCE: f64 = 1e-6;
pub const ODE_TOLERANCE: f64 = 1e-5;

/// Relative residual of `∂ₜP = θ∂ₓ²P − (ax + b)∂ₓP − ρx²P` at `(t, x)`.
///
/// Derivatives are taken on the ratios `P(·)/P(t, x)`: 5-point central in
/// `x`, 2-point central in `t`. The residual is normalised by
/// `max(|∂ₜP|, |P|/t)`.
pub fn pde_residual(
    op: &OUOperator,
    t: f64,
    x: f64,
    x0: f64,
    h_t: f64,
    h_x: f64,
) -> Result<VerificationReport> {
    if !(h_t > 0.0 && h_x > 0.0) || t - h_t <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < h_t < t and h_x > 0 (t = {t}, h_t = {h_t}, h_x = {h_x})"
        )));
    }
    let center = log_kernel(op, t, x, x0)?;
    let ratio = |tt: f64, xx: f64| -> Result<f64> { Ok((log_kernel(op, tt, xx, x0)? - center).exp()) };

    let p_t = (ratio(t + h_t, x)? - ratio(t - h_t, x)?) / (2.0 * h_t);
    let (m2, m1) = (ratio(t, x - 2.0 * h_x)?, ratio(t, x - h_x)?);
    let (p1, p2) = (ratio(t, x + h_x)?, ratio(t, x + 2.0 * h_x)?);
    let p_x = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h_x);
    let p_xx = (-m2 + 16.0 * m1 - 30.0 + 16.0 * p1 - p2) / (12.0 * h_x * h_x);

    let residual = p_t - op.theta() * p_xx + (op.a() * x + op.b()) * p_x + op.rho() * x * x;
    let scale = p_t.abs().max(1.0 / t);
    Ok(VerificationReport::new("pde_residual", residual.abs() / scale, PDE_TOLERANCE)
        .with_operator(op)
        .with("t", t)
        .with("x", x)
        .with("x0", x0)
        .with("h_t", h_t)
        .with("h_x", h_x))
}

/// Default steps: `h_x = 1e-4·(1 + |x|)`, `h_t = 1e-5·t`.
pub fn pde_residual_default(op: &OUOperator, t: f64, x: f64, x0: f64) -> Result<VerificationReport> {
    pde_residual(op, t, x, x0, 1e-5 * t, 1e-4 * (1.0 + x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientName {
    Alpha,
    Beta,
    Gamma,
    Mu,
    Nu,
    LogPhi,
}

impl CoefficientName {
    pub const ALL: [CoefficientName; 6] = [
        CoefficientName::Alpha,
        CoefficientName::Beta,
        CoefficientName::Gamma,
        CoefficientName::Mu,
        CoefficientName::Nu,
        CoefficientName::LogPhi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CoefficientName::Alpha => "alpha",
            CoefficientName::Beta => "beta",
            CoefficientName::Gamma => "gamma",
            CoefficientName::Mu => "mu",
            CoefficientName::Nu => "nu",
            CoefficientName::LogPhi => "log_phi",
        }
    }

    fn pick(&self, c: &KernelCoefficients) -> f64 {
        match self {
            CoefficientName::Alpha => c.alpha,
            CoefficientName::Beta => c.beta,
            CoefficientName::Gamma => c.gamma,
            CoefficientName::Mu => c.mu,
            CoefficientName::Nu => c.nu,
            CoefficientName::LogPhi => c.log_phi,
        }
    }

    /// Terms whose sum is the right-hand side of this coefficient's ODE.
    fn rhs_terms(&self, op: &OUOperator, c: &KernelCoefficients) -> Vec<f64> {
        let (th, a, b, rho) = (op.theta(), op.a(), op.b(), op.rho());
        match self {
            CoefficientName::Alpha => vec![4.0 * th * c.alpha * c.alpha, -2.0 * a * c.alpha, -rho],
            CoefficientName::Beta => vec![4.0 * th * c.alpha * c.beta, -a * c.beta],
            CoefficientName::Gamma => vec![th * c.beta * c.beta],
            CoefficientName::Mu => vec![4.0 * th * c.alpha * c.mu, -a * c.mu, -2.0 * b * c.alpha],
            CoefficientName::Nu => vec![2.0 * th * c.beta * c.mu, -b * c.beta],
            CoefficientName::LogPhi => vec![th * c.mu * c.mu, 2.0 * th * c.alpha, -b * c.mu],
        }
    }
}

/// Central-difference check of the six coefficient ODEs at `t`.
///
/// Each measured value is `|ḟ_fd − rhs| / max(Σ|rhs terms|, |f|/t)`; the
/// second scale is the round-off floor of the difference quotient once `ḟ`
/// has decayed. Identities such as `0 = 0` for `μ, ν` at `b = 0` measure
/// exactly zero.
pub fn ode_residuals(op: &OUOperator, t: f64, h: f64) -> Result<[VerificationReport; 6]> {
    if h.is_nan() || h <= 0.0 || t - h <= 0.0 {
        return Err(Error::InvalidArgument(format!("need 0 < h < t (t = {t}, h = {h})")));
    }
    let now = coefficients(op, t)?;
    let ahead = coefficients(op, t + h)?;
    let behind = coefficients(op, t - h)?;
    Ok(CoefficientName::ALL.map(|name| {
        let fd = (name.pick(&ahead) - name.pick(&behind)) / (2.0 * h);
        let terms = name.rhs_terms(op, &now);
        let rhs: f64 = terms.iter().sum();
        let scale = terms.iter().map(|v| v.abs()).sum::<f64>().max(name.pick(&now).abs() / t);
        let diff = (fd - rhs).abs();
        let measured = if diff == 0.0 { 0.0 } else { diff / scale };
        VerificationReport::new(format!("ode_residual_{}", name.as_str()), measured, ODE_TOLERANCE)
            .with_operator(op)
            .with("t", t)
            .with("h", h)
    }))
}
