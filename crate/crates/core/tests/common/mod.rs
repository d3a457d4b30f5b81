#![allow(dead_code)]

use ou_heat::geodesic::{family_eval, geodesic_eval, GeodesicPath, SingularFamily};
use ou_heat::OUOperator;
use rand::Rng;

pub fn op(theta: f64, a: f64, b: f64, rho: f64) -> OUOperator {
    OUOperator::new(theta, a, b, rho).unwrap()
}

pub fn l_plus() -> OUOperator {
    op(1.0, 1.0, 0.0, 1.0)
}

pub fn l_minus() -> OUOperator {
    op(1.0, 1.0, 0.0, -1.0)
}

/// Random operator; `kind` 0, 1, 2 forces hyperbolic, critical, oscillatory.
pub fn random_operator(rng: &mut impl Rng, kind: u32) -> OUOperator {
    let theta = rng.random_range(0.3..2.5);
    let a: f64 = rng.random_range(-2.5..2.5);
    let b = rng.random_range(-1.5..1.5);
    let edge = -a * a / (4.0 * theta);
    let rho = match kind {
        0 => edge + rng.random_range(0.05..3.0),
        1 => edge,
        _ => edge - rng.random_range(0.05..3.0),
    };
    op(theta, a, b, rho)
}

/// 5-point second difference.
pub fn second_difference(f: impl Fn(f64) -> f64, s: f64, h: f64) -> f64 {
    (-f(s + 2.0 * h) + 16.0 * f(s + h) - 30.0 * f(s) + 16.0 * f(s - h) - f(s - 2.0 * h)) / (12.0 * h * h)
}

/// Worst relative residual of `ẍ = Δx + ab` on interior points, scaled by
/// `max(max_s |Δx| + |ab|, max_s |x|)`.
pub fn geodesic_ode_residual(op: &OUOperator, x: impl Fn(f64) -> f64) -> f64 {
    let delta = op.a() * op.a() + 4.0 * op.rho() * op.theta();
    let ab = op.a() * op.b();
    let h = 1e-4;
    let (mut worst, mut rhs_scale, mut x_scale) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..=100 {
        let s = i as f64 / 100.0;
        x_scale = x_scale.max(x(s).abs());
        rhs_scale = rhs_scale.max(delta.abs() * x(s).abs() + ab.abs());
    }
    for i in 1..50 {
        let s = i as f64 / 50.0;
        let xdd = second_difference(&x, s, h);
        worst = worst.max((xdd - delta * x(s) - ab).abs());
    }
    worst / rhs_scale.max(x_scale).max(1e-300)
}

pub fn path_fn(p: &GeodesicPath) -> impl Fn(f64) -> f64 + '_ {
    // The difference stencil reaches 2h past the ends of [0, 1]; it is only
    // applied at interior points.
    move |s| geodesic_eval(p, s.clamp(0.0, 1.0)).unwrap()
}

pub fn family_fn(f: &SingularFamily, c2: f64) -> impl Fn(f64) -> f64 + '_ {
    move |s| family_eval(f, c2, s.clamp(0.0, 1.0)).unwrap()
}
