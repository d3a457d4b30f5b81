//! Feynman–Kac Monte Carlo for `e^{−tL}φ(x)`.
//!
//! Paths follow `dX = −(aX + b) ds + √(2θ) dW` under Euler–Maruyama and carry
//! the weight `exp(−ρ∫X² ds)` accumulated with left-endpoint sums. Path `i`
//! draws from its own ChaCha stream, so results do not depend on how rayon
//! splits the work.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::OUOperator;

use super::semigroup::kernel_expectation;
use super::{Probe, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub paths: u64,
    pub seed: u64,
    pub dt: f64,
}

/// One path's weighted `φ(X_t)`; `dt` is shortened on the last step to land on `t`.
struct PathSpec {
    t: f64,
    x_start: f64,
    probe: Probe,
    dt: f64,
    steps: u64,
    seed: u64,
}

fn simulate_path(op: &OUOperator, spec: &PathSpec, index: u64) -> f64 {
    let PathSpec { t, x_start, probe, dt, steps, seed } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let diffusion = (2.0 * op.theta()).sqrt();
    let mut x = x_start;
    let mut log_weight = 0.0;
    for step in 0..steps {
        let h = if step + 1 == steps { t - dt * (steps - 1) as f64 } else { dt };
        let z: f64 = StandardNormal.sample(&mut rng);
        log_weight -= op.rho() * x * x * h;
        x += -(op.a() * x + op.b()) * h + diffusion * h.sqrt() * z;
    }
    probe.value(x, x_start) * log_weight.exp()
}

/// Weighted mean of `φ(X_t)` over `paths` simulated paths.
pub fn feynman_kac_estimate(
    op: &OUOperator,
    t: f64,
    x_start: f64,
    probe: Probe,
    paths: u64,
    dt: f64,
    seed: u64,
) -> Result<MCEstimate> {
    if paths < 2 {
        return Err(Error::InvalidArgument(format!("need at least two paths, got {paths}")));
    }
    if dt.is_nan() || t.is_nan() || dt <= 0.0 || dt > t {
        return Err(Error::InvalidArgument(format!("need 0 < dt ≤ t (t = {t}, dt = {dt})")));
    }
    let spec = PathSpec {
        t,
        x_start,
        probe,
        dt,
        steps: ((t / dt) - 1e-9).ceil().max(1.0) as u64,
        seed,
    };
    let values: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|i| simulate_path(op, &spec, i))
        .collect();
    let n = paths as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(MCEstimate {
        mean,
        standard_error: (var / n).sqrt(),
        paths,
        seed,
        dt,
    })
}

/// Compares the Monte Carlo estimate with the kernel quadrature
/// `∫ P(t; x_start, y) φ(y) m(dy)`; tolerance is `3·SE + 2·dt·|reference|`.
pub fn feynman_kac_check(
    op: &OUOperator,
    t: f64,
    x_start: f64,
    probe: Probe,
    paths: u64,
    dt: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let est = feynman_kac_estimate(op, t, x_start, probe, paths, dt, seed)?;
    let reference = kernel_expectation(op, t, x_start, probe, 200)?;
    let tolerance = 3.0 * est.standard_error + 2.0 * dt * reference.abs();
    Ok(VerificationReport::new("feynman_kac", (est.mean - reference).abs(), tolerance)
        .with_operator(op)
        .with("t", t)
        .with("x_start", x_start)
        .with("probe", probe.name())
        .with("paths", paths)
        .with("dt", dt)
        .with("seed", seed)
        .with("estimate", est.mean)
        .with("standard_error", est.standard_error)
        .with("reference", reference))
}
