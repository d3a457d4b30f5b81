//! Fixed batteries of checks for a single operator, as run by `ou-heat verify`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geodesic::{geodesic, GeodesicResult};
use crate::kernel::first_singular_time;
use crate::operator::OUOperator;

use super::montecarlo::feynman_kac_check;
use super::residual::{ode_residuals, pde_residual_default, ODE_TOLERANCE, PDE_TOLERANCE};
use super::semigroup::{chapman_kolmogorov_error, delta_limit_error, CK_TOLERANCE};
use super::shooting::{geodesic_shooting_error, SHOOTING_TOLERANCE};
use super::{Probe, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ode,
    Pde,
    Ck,
    Delta,
    Mc,
    Shooting,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [Suite::Ode, Suite::Pde, Suite::Ck, Suite::Delta, Suite::Mc, Suite::Shooting, Suite::All];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ode => "ode",
            Suite::Pde => "pde",
            Suite::Ck => "ck",
            Suite::Delta => "delta",
            Suite::Mc => "mc",
            Suite::Shooting => "shooting",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub paths: u64,
    pub dt: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            paths: 20_000,
            dt: 1e-3,
        }
    }
}

const SAMPLE_X: f64 = 0.3;
const SAMPLE_X0: f64 = -0.2;
const DELTA_TIMES: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Reference time: `0.5`, or `0.45·π/λ₀` if that is earlier, so every sample
/// lies inside the first regular window.
fn reference_time(op: &OUOperator) -> f64 {
    0.5f64.min(0.45 * first_singular_time(op))
}

fn or_failed(name: &str, tolerance: f64, op: &OUOperator, r: Result<VerificationReport>) -> VerificationReport {
    r.unwrap_or_else(|e| {
        VerificationReport::new(name, f64::NAN, tolerance)
            .with_operator(op)
            .with("error", e.to_string())
    })
}

fn ode(op: &OUOperator, out: &mut Vec<VerificationReport>) {
    let t = reference_time(op);
    match ode_residuals(op, t, 1e-6 * t) {
        Ok(rs) => out.extend(rs),
        Err(e) => out.push(or_failed("ode_residual", ODE_TOLERANCE, op, Err(e))),
    }
}

fn pde(op: &OUOperator, out: &mut Vec<VerificationReport>) {
    let r = pde_residual_default(op, reference_time(op), SAMPLE_X, SAMPLE_X0);
    out.push(or_failed("pde_residual", PDE_TOLERANCE, op, r));
}

fn ck(op: &OUOperator, out: &mut Vec<VerificationReport>) {
    let t = reference_time(op);
    let r = chapman_kolmogorov_error(op, 0.4 * t, 0.6 * t, SAMPLE_X, SAMPLE_X0, 200);
    out.push(or_failed("chapman_kolmogorov", CK_TOLERANCE, op, r));
}

fn delta(op: &OUOperator, out: &mut Vec<VerificationReport>) {
    let mut errors = Vec::new();
    for t in DELTA_TIMES {
        let r = or_failed("delta_limit", 5.0 * t, op, delta_limit_error(op, t, SAMPLE_X0, Probe::GaussianBump));
        errors.push(r.measured);
        out.push(r);
    }
    // Linear decay: each tenfold reduction of t shrinks the error tenfold.
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[1] / w[0]).collect();
    let measured = if errors.iter().all(|e| *e <= 1e-13) {
        0.0
    } else {
        ratios.iter().map(|r| (r - 0.1).abs()).fold(0.0, |m, d| if d.is_nan() { d } else { m.max(d) })
    };
    out.push(
        VerificationReport::new("delta_decay_ratio", measured, 0.05)
            .with_operator(op)
            .with("ratios", ratios),
    );
}

fn mc(op: &OUOperator, config: &SuiteConfig, out: &mut Vec<VerificationReport>) {
    let r = feynman_kac_check(op, reference_time(op), 0.0, Probe::ConstantOne, config.paths, config.dt, config.seed);
    out.push(or_failed("feynman_kac", f64::NAN, op, r));
}

fn shooting(op: &OUOperator, out: &mut Vec<VerificationReport>) {
    let (x0, x1) = (1.0, 0.5);
    // Resonant operators have no unique geodesic to shoot for.
    if matches!(geodesic(op, x0, x1), GeodesicResult::Unique { .. }) {
        out.push(or_failed("geodesic_shooting", SHOOTING_TOLERANCE, op, geodesic_shooting_error(op, x0, x1, 101)));
    }
}

/// Runs `suite` on `op`. Checks that cannot be evaluated are reported as
/// failures with the error message in their context.
pub fn run_suite(op: &OUOperator, suite: Suite, config: &SuiteConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Ode {
        ode(op, &mut out);
    }
    if all || suite == Suite::Pde {
        pde(op, &mut out);
    }
    if all || suite == Suite::Ck {
        ck(op, &mut out);
    }
    if all || suite == Suite::Delta {
        delta(op, &mut out);
    }
    if all || suite == Suite::Mc {
        mc(op, config, &mut out);
    }
    if all || suite == Suite::Shooting {
        shooting(op, &mut out);
    }
    out
}
