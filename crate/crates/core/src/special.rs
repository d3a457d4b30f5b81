//! Overflow-safe hyperbolic helpers.

use std::f64::consts::LN_2;

/// `ln sinh(x)` for `x > 0`, finite far beyond the range where `sinh` overflows.
#[inline]
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    // sinh x = e^x (1 − e^{−2x}) / 2
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// `sinh(λu) / sinh(λ)` for `0 ≤ u ≤ 1`, `λ > 0`, without forming either sinh.
#[inline]
pub fn sinh_ratio(lambda: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let num = -(-2.0 * lambda * u).exp_m1();
    let den = -(-2.0 * lambda).exp_m1();
    (lambda * (u - 1.0)).exp() * num / den
}

/// `(cosh x − 1) / x²`, accurate as `x → 0`.
#[inline]
pub fn cosh_m1_over_sq(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        0.5 + x * x / 24.0
    } else {
        let h = (0.5 * x).sinh();
        2.0 * h * h / (x * x)
    }
}

/// `(1 − cos x) / x²`, accurate as `x → 0`.
#[inline]
pub fn one_m_cos_over_sq(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        0.5 - x * x / 24.0
    } else {
        let h = (0.5 * x).sin();
        2.0 * h * h / (x * x)
    }
}
