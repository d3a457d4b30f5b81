//! Hamiltonian flow of the full symbol `H = −θξ² + (ax + b)ξ + ρx²`.
//!
//! With `X = (x, ξ)` the system reads `Ẋ = AX + B`,
//! `A = [[a, −2θ], [−2ρ, −a]]`, `B = (b, 0)`. `A` is trace-free with
//! `A² = Δ·I`, so `exp(sA)` has a two-term closed form in every regime.

use std::ops::Mul;

use serde::Serialize;

use crate::operator::{regime, OUOperator, RegimeKind};
use crate::special::{cosh_m1_over_sq, one_m_cos_over_sq};

/// Default RK4 step for [`flow_numeric`].
pub const DEFAULT_RK4_STEP: f64 = 1e-4;

/// A point `(x, ξ)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseState {
    pub x: f64,
    pub xi: f64,
}

impl PhaseState {
    pub fn new(x: f64, xi: f64) -> Self {
        Self { x, xi }
    }
}

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl FlowMatrix {
    pub const IDENTITY: FlowMatrix = FlowMatrix {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    /// `p·I + q·M`
    fn affine(p: f64, q: f64, m: &FlowMatrix) -> FlowMatrix {
        FlowMatrix {
            m11: p + q * m.m11,
            m12: q * m.m12,
            m21: q * m.m21,
            m22: p + q * m.m22,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn apply(&self, v: PhaseState) -> PhaseState {
        PhaseState {
            x: self.m11 * v.x + self.m12 * v.xi,
            xi: self.m21 * v.x + self.m22 * v.xi,
        }
    }

    pub fn max_abs_diff(&self, other: &FlowMatrix) -> f64 {
        (self.m11 - other.m11)
            .abs()
            .max((self.m12 - other.m12).abs())
            .max((self.m21 - other.m21).abs())
            .max((self.m22 - other.m22).abs())
    }
}

impl Mul for FlowMatrix {
    type Output = FlowMatrix;

    fn mul(self, r: FlowMatrix) -> FlowMatrix {
        FlowMatrix {
            m11: self.m11 * r.m11 + self.m12 * r.m21,
            m12: self.m11 * r.m12 + self.m12 * r.m22,
            m21: self.m21 * r.m11 + self.m22 * r.m21,
            m22: self.m21 * r.m12 + self.m22 * r.m22,
        }
    }
}

/// The generator `A = [[a, −2θ], [−2ρ, −a]]`.
pub fn generator(op: &OUOperator) -> FlowMatrix {
    FlowMatrix {
        m11: op.a(),
        m12: -2.0 * op.theta(),
        m21: -2.0 * op.rho(),
        m22: -op.a(),
    }
}

/// `exp(sA)`.
///
/// Critical: `I + sA`. Hyperbolic: `cosh(λ₀s)·I + sinh(λ₀s)/λ₀·A`.
/// Oscillatory: `cos(λ₀s)·I + sin(λ₀s)/λ₀·A`.
pub fn transition_matrix(op: &OUOperator, s: f64) -> FlowMatrix {
    let gen = generator(op);
    match regime(op).kind() {
        RegimeKind::Critical => FlowMatrix::affine(1.0, s, &gen),
        RegimeKind::Hyperbolic { lambda0 } => {
            let u = lambda0 * s;
            FlowMatrix::affine(u.cosh(), u.sinh() / lambda0, &gen)
        }
        RegimeKind::Oscillatory { lambda0 } => {
            let u = lambda0 * s;
            FlowMatrix::affine(u.cos(), u.sin() / lambda0, &gen)
        }
    }
}

/// `∫₀ˢ exp(uA) du`, the matrix that carries the constant forcing `B`.
fn forcing_integral(op: &OUOperator, s: f64) -> FlowMatrix {
    let gen = generator(op);
    match regime(op).kind() {
        RegimeKind::Critical => FlowMatrix::affine(s, 0.5 * s * s, &gen),
        RegimeKind::Hyperbolic { lambda0 } => {
            let u = lambda0 * s;
            let sinh_term = if u == 0.0 { s } else { u.sinh() / lambda0 };
            FlowMatrix::affine(sinh_term, s * s * cosh_m1_over_sq(u), &gen)
        }
        RegimeKind::Oscillatory { lambda0 } => {
            let u = lambda0 * s;
            let sin_term = if u == 0.0 { s } else { u.sin() / lambda0 };
            FlowMatrix::affine(sin_term, s * s * one_m_cos_over_sq(u), &gen)
        }
    }
}

/// Exact solution of `Ẋ = AX + B` after time `s`.
pub fn flow(op: &OUOperator, state0: PhaseState, s: f64) -> PhaseState {
    let hom = transition_matrix(op, s).apply(state0);
    let forced = forcing_integral(op, s).apply(PhaseState::new(op.b(), 0.0));
    PhaseState {
        x: hom.x + forced.x,
        xi: hom.xi + forced.xi,
    }
}

fn vector_field(op: &OUOperator, st: PhaseState) -> PhaseState {
    PhaseState {
        x: op.a() * st.x - 2.0 * op.theta() * st.xi + op.b(),
        xi: -2.0 * op.rho() * st.x - op.a() * st.xi,
    }
}

fn rk4_step(op: &OUOperator, st: PhaseState, h: f64) -> PhaseState {
    let shift = |base: PhaseState, k: PhaseState, c: f64| PhaseState {
        x: base.x + c * k.x,
        xi: base.xi + c * k.xi,
    };
    let k1 = vector_field(op, st);
    let k2 = vector_field(op, shift(st, k1, 0.5 * h));
    let k3 = vector_field(op, shift(st, k2, 0.5 * h));
    let k4 = vector_field(op, shift(st, k3, h));
    PhaseState {
        x: st.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        xi: st.xi + h / 6.0 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi),
    }
}

/// Fixed-step classic RK4 integration of `Ẋ = AX + B`; the last step is
/// shortened so the integration lands exactly on `s`. Negative `s` integrates
/// backwards.
pub fn flow_numeric(op: &OUOperator, state0: PhaseState, s: f64, dt: f64) -> PhaseState {
    assert!(dt > 0.0, "RK4 step must be positive");
    if s == 0.0 {
        return state0;
    }
    let dir = s.signum();
    let span = s.abs();
    let full = (span / dt).floor() as u64;
    let mut st = state0;
    for _ in 0..full {
        st = rk4_step(op, st, dir * dt);
    }
    let rest = span - full as f64 * dt;
    if rest > 1e-15 * span {
        st = rk4_step(op, st, dir * rest);
    }
    st
}

/// `H(x, ξ) = −θξ² + (ax + b)ξ + ρx²`.
pub fn hamiltonian_value(op: &OUOperator, state: PhaseState) -> f64 {
    let PhaseState { x, xi } = state;
    -op.theta() * xi * xi + (op.a() * x + op.b()) * xi + op.rho() * x * x
}
