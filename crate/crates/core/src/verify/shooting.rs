//! Geodesics recovered by shooting on the Hamiltonian system.
//!
//! The initial momentum `ξ(0)` is found by secant iteration so that the
//! RK4-integrated trajectory lands on `x1` at `s = 1`; the resulting path is
//! compared with the closed form on a grid.

use crate::error::{Error, Result};
use crate::geodesic::{geodesic, geodesic_eval, GeodesicResult};
use crate::hamiltonian::{flow_numeric, PhaseState, DEFAULT_RK4_STEP};
use crate::operator::OUOperator;

use super::VerificationReport;

pub const SHOOTING_TOLERANCE: f64 = 1e-7;

const MAX_SECANT_ITERATIONS: usize = 100;

fn endpoint(op: &OUOperator, x0: f64, xi0: f64) -> f64 {
    flow_numeric(op, PhaseState::new(x0, xi0), 1.0, DEFAULT_RK4_STEP).x
}

fn shoot(op: &OUOperator, x0: f64, x1: f64) -> Result<f64> {
    let miss = |xi0: f64| endpoint(op, x0, xi0) - x1;
    let target = 1e-12 * (1.0 + x1.abs());
    let (mut p, mut q) = (0.0, 1.0);
    let (mut fp, mut fq) = (miss(p), miss(q));
    for _ in 0..MAX_SECANT_ITERATIONS {
        if fq.abs() <= target {
            return Ok(q);
        }
        if fq == fp {
            break;
        }
        let next = q - fq * (q - p) / (fq - fp);
        (p, fp) = (q, fq);
        q = next;
        fq = miss(q);
    }
    Err(Error::NoConvergence("geodesic shooting"))
}

/// Maximum deviation, on `grid` points of `[0, 1]`, between the closed-form
/// geodesic and the shooting solution, relative to `max(1, max|x|)`.
pub fn geodesic_shooting_error(op: &OUOperator, x0: f64, x1: f64, grid: usize) -> Result<VerificationReport> {
    let path = match geodesic(op, x0, x1) {
        GeodesicResult::Unique { path } => path,
        GeodesicResult::Family { family } => {
            return Err(Error::NotUnique(format!("a one-parameter family exists (k = {})", family.k)))
        }
        GeodesicResult::NoSolution { k, required_endpoint } => {
            return Err(Error::NotUnique(format!(
                "no geodesic exists (k = {k}, endpoint must be {required_endpoint})"
            )))
        }
    };
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid needs at least two points, got {grid}")));
    }
    let xi0 = shoot(op, x0, x1)?;

    let mut state = PhaseState::new(x0, xi0);
    let mut s_prev = 0.0;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..grid {
        let s = i as f64 / (grid - 1) as f64;
        state = flow_numeric(op, state, s - s_prev, DEFAULT_RK4_STEP);
        s_prev = s;
        let exact = geodesic_eval(&path, s)?;
        worst = worst.max((state.x - exact).abs());
        scale = scale.max(exact.abs());
    }
    Ok(VerificationReport::new("geodesic_shooting", worst / scale, SHOOTING_TOLERANCE)
        .with_operator(op)
        .with("x0", x0)
        .with("x1", x1)
        .with("grid", grid as u64)
        .with("xi0", xi0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn op(theta: f64, a: f64, b: f64, rho: f64) -> OUOperator {
        OUOperator::new(theta, a, b, rho).unwrap()
    }

    #[test]
    fn fixtures_in_every_regime() {
        for o in [op(1.0, 1.0, 0.0, 1.0), op(1.0, 2.0, 1.0, -1.0), op(1.0, 1.0, 0.0, -1.0), op(0.7, -0.4, 1.3, -2.0)] {
            let r = geodesic_shooting_error(&o, 1.0, 0.5, 101).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn momentum_matches_the_closed_form_slope() {
        // ẋ(0) = a x0 − 2θ ξ(0) + b, and ẋ(0) is known for the critical parabola.
        let o = op(1.0, 2.0, 1.0, -1.0);
        let r = geodesic_shooting_error(&o, 1.0, 0.5, 11).unwrap();
        let xi0 = r.context["xi0"].as_f64().unwrap();
        let slope = 0.5 - 1.0 - 1.0; // x1 − x0 − ab/2
        let want = (2.0 * 1.0 + 1.0 - slope) / 2.0;
        assert!((xi0 - want).abs() < 1e-9, "{xi0} vs {want}");
    }

    #[test]
    fn resonant_operators_are_rejected() {
        // Δ = −π², b = 0: forced endpoint −x0.
        let o = op(1.0, 0.0, 0.0, -PI * PI / 4.0);
        assert!(matches!(geodesic_shooting_error(&o, 1.0, -1.0, 11), Err(Error::NotUnique(_))));
        assert!(matches!(geodesic_shooting_error(&o, 1.0, 0.5, 11), Err(Error::NotUnique(_))));
    }
}
