//! Independent numerical oracles for the closed forms.
//!
//! Every check returns a [`VerificationReport`] holding a measured error, the
//! tolerance it is held to, and enough context to reproduce it.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::operator::OUOperator;

mod montecarlo;
mod residual;
mod semigroup;
mod shooting;
mod suite;

pub use montecarlo::{feynman_kac_check, feynman_kac_estimate, MCEstimate};
pub use residual::{ode_residuals, pde_residual, pde_residual_default, CoefficientName, PDE_TOLERANCE, ODE_TOLERANCE};
pub use semigroup::{
    chapman_kolmogorov_error, delta_limit_error, kernel_expectation, CK_TOLERANCE,
};
pub use shooting::{geodesic_shooting_error, SHOOTING_TOLERANCE};
pub use suite::{run_suite, Suite, SuiteConfig};

/// Test functions integrated against the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    ConstantOne,
    /// `exp(−(x − c)²)` centred at the initial point.
    GaussianBump,
}

impl Probe {
    /// `ln φ(x)` for the probe centred at `center`.
    pub fn log_value(&self, x: f64, center: f64) -> f64 {
        match self {
            Probe::ConstantOne => 0.0,
            Probe::GaussianBump => -(x - center) * (x - center),
        }
    }

    pub fn value(&self, x: f64, center: f64) -> f64 {
        self.log_value(x, center).exp()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Probe::ConstantOne => "constant-1",
            Probe::GaussianBump => "gaussian-bump",
        }
    }
}

/// Outcome of a single oracle check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: BTreeMap<String, Value>,
}

impl VerificationReport {
    /// `passed` is `measured ≤ tolerance`; NaN never passes.
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            context: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    pub fn with_operator(self, op: &OUOperator) -> Self {
        self.with("theta", op.theta())
            .with("a", op.a())
            .with("b", op.b())
            .with("rho", op.rho())
    }
}
