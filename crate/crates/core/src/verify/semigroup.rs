//! Quadrature checks of the semigroup identity and of the initial delta.
//!
//! All integrals are taken against the reference measure
//! `m(dy) = exp(−(a y² + 2b y)/(2θ)) dy` and have `exp(quadratic)` integrands,
//! so [`integrate_exp_quadratic`] centres and scales the interval exactly.

use crate::error::Result;
use crate::kernel::{log_kernel, log_reference_density};
use crate::operator::OUOperator;
use crate::quadrature::{integrate_exp_quadratic, GaussLegendre};

use super::{Probe, VerificationReport};

pub const CK_TOLERANCE: f64 = 1e-8;

/// Relative error of `∫ P(t1; x, y) P(t2; y, x0) m(dy)` against `P(t1 + t2; x, x0)`.
pub fn chapman_kolmogorov_error(
    op: &OUOperator,
    t1: f64,
    t2: f64,
    x: f64,
    x0: f64,
    nodes: usize,
) -> Result<VerificationReport> {
    let rule = GaussLegendre::new(nodes);
    let target = log_kernel(op, t1 + t2, x, x0)?;
    let integral = integrate_exp_quadratic(&rule, |y| {
        Ok(log_kernel(op, t1, x, y)? + log_reference_density(op, y) + log_kernel(op, t2, y, x0)?)
    })?;
    let measured = (integral.log_value - target).exp_m1().abs();
    Ok(VerificationReport::new("chapman_kolmogorov", measured, CK_TOLERANCE)
        .with_operator(op)
        .with("t1", t1)
        .with("t2", t2)
        .with("x", x)
        .with("x0", x0)
        .with("nodes", nodes as u64))
}

/// `|∫ P(t; x, x0) φ(x) m(dx) − φ(x0)|`; decays like `O(t)` as `t → 0`.
///
/// The tolerance is `5t`.
pub fn delta_limit_error(op: &OUOperator, t: f64, x0: f64, probe: Probe) -> Result<VerificationReport> {
    delta_limit_error_with(op, t, x0, probe, 200)
}

pub(crate) fn delta_limit_error_with(
    op: &OUOperator,
    t: f64,
    x0: f64,
    probe: Probe,
    nodes: usize,
) -> Result<VerificationReport> {
    let rule = GaussLegendre::new(nodes);
    let integral = integrate_exp_quadratic(&rule, |x| {
        Ok(log_kernel(op, t, x, x0)? + log_reference_density(op, x) + probe.log_value(x, x0))
    })?;
    let measured = (integral.log_value.exp() - probe.value(x0, x0)).abs();
    Ok(VerificationReport::new("delta_limit", measured, 5.0 * t)
        .with_operator(op)
        .with("t", t)
        .with("x0", x0)
        .with("probe", probe.name())
        .with("integral", integral.log_value.exp()))
}

/// `∫ P(t; x_start, y) φ(y) m(dy)`: the kernel's prediction for the
/// Feynman–Kac expectation started at `x_start`.
pub fn kernel_expectation(op: &OUOperator, t: f64, x_start: f64, probe: Probe, nodes: usize) -> Result<f64> {
    let rule = GaussLegendre::new(nodes);
    let integral = integrate_exp_quadratic(&rule, |y| {
        Ok(log_kernel(op, t, x_start, y)? + log_reference_density(op, y) + probe.log_value(y, x_start))
    })?;
    Ok(integral.log_value.exp())
}
