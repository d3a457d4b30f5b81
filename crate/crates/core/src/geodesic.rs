//! Geodesics: projections onto `x` of Hamiltonian trajectories with
//! `x(0) = x0`, `x(1) = x1`.
//!
//! Eliminating `ξ` gives `ẍ = Δx + ab`, whose two-point problem on `[0, 1]`
//! is uniquely solvable except when the operator is oscillatory with
//! `λ₀ = kπ`. There the problem either has no solution or a one-parameter
//! family of them, depending on whether `x1` equals a forced endpoint.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{regime, OUOperator, Regime, RegimeKind};
use crate::special::sinh_ratio;

/// Relative tolerance for treating `λ₀` as an integer multiple of `π`.
pub const RESONANCE_TOL: f64 = 1e-9;
/// Relative-plus-absolute tolerance for matching the forced endpoint.
pub const ENDPOINT_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum GeodesicResult {
    Unique { path: GeodesicPath },
    Family { family: SingularFamily },
    NoSolution { k: u64, required_endpoint: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `x = −c + (x0 + c)·S(1−s) + (x1 + c)·S(s)`, `S(u) = sinh(λ₀u)/sinh λ₀`.
    Hyperbolic { lambda0: f64 },
    /// `x = (ab/2)s² + slope·s + x0`.
    Critical { half_ab: f64, slope: f64 },
    /// `x = c + (x0 − c)·T(1−s) + (x1 − c)·T(s)`, `T(u) = sin(λ₀u)/sin λ₀`.
    Oscillatory { lambda0: f64, sin_lambda0: f64 },
}

/// The unique geodesic joining `x0` to `x1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicPath {
    regime: Regime,
    x0: f64,
    x1: f64,
    /// Equilibrium `−ab/Δ` of `ẍ = Δx + ab`; zero in the critical regime.
    shift: f64,
    shape: Shape,
}

impl GeodesicPath {
    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    fn eval_unchecked(&self, s: f64) -> f64 {
        let (x0, x1, c) = (self.x0, self.x1, self.shift);
        match self.shape {
            Shape::Hyperbolic { lambda0 } => {
                c + (x0 - c) * sinh_ratio(lambda0, 1.0 - s) + (x1 - c) * sinh_ratio(lambda0, s)
            }
            Shape::Critical { half_ab, slope } => (half_ab * s + slope) * s + x0,
            Shape::Oscillatory {
                lambda0,
                sin_lambda0,
            } => {
                c + (x0 - c) * (lambda0 * (1.0 - s)).sin() / sin_lambda0
                    + (x1 - c) * (lambda0 * s).sin() / sin_lambda0
            }
        }
    }
}

/// The family of geodesics that exists when `λ₀ = kπ` and `x1` is the forced
/// endpoint. Members are indexed by a free real `c₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularFamily {
    pub k: u64,
    pub x0: f64,
    /// `ab/(kπ)²`
    pub center: f64,
    /// `a/(kπ)`
    pub sin_weight: f64,
}

impl SingularFamily {
    pub fn lambda0(&self) -> f64 {
        self.k as f64 * PI
    }

    /// `ab/(kπ)² + (−1)ᵏ(x0 − ab/(kπ)²)`.
    pub fn forced_endpoint(&self) -> f64 {
        forced_endpoint(self.k, self.x0, self.center)
    }
}

fn forced_endpoint(k: u64, x0: f64, center: f64) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    center + sign * (x0 - center)
}

/// Solves the two-point problem `x(0) = x0`, `x(1) = x1`.
pub fn geodesic(op: &OUOperator, x0: f64, x1: f64) -> GeodesicResult {
    let reg = regime(op);
    let ab = op.a() * op.b();
    let path = |shift, shape| GeodesicResult::Unique {
        path: GeodesicPath {
            regime: reg,
            x0,
            x1,
            shift,
            shape,
        },
    };
    match reg.kind() {
        RegimeKind::Hyperbolic { lambda0 } => {
            path(-ab / (lambda0 * lambda0), Shape::Hyperbolic { lambda0 })
        }
        RegimeKind::Critical => path(
            0.0,
            Shape::Critical {
                half_ab: 0.5 * ab,
                slope: x1 - x0 - 0.5 * ab,
            },
        ),
        RegimeKind::Oscillatory { lambda0 } => {
            let k = (lambda0 / PI).round();
            if k >= 1.0 && (lambda0 - k * PI).abs() <= RESONANCE_TOL * lambda0.max(1.0) {
                let k = k as u64;
                let kpi = k as f64 * PI;
                let center = ab / (kpi * kpi);
                let required = forced_endpoint(k, x0, center);
                if (x1 - required).abs() <= ENDPOINT_MATCH_TOL * (1.0 + x1.abs()) {
                    GeodesicResult::Family {
                        family: SingularFamily {
                            k,
                            x0,
                            center,
                            sin_weight: op.a() / kpi,
                        },
                    }
                } else {
                    GeodesicResult::NoSolution {
                        k,
                        required_endpoint: required,
                    }
                }
            } else {
                path(
                    ab / (lambda0 * lambda0),
                    Shape::Oscillatory {
                        lambda0,
                        sin_lambda0: lambda0.sin(),
                    },
                )
            }
        }
    }
}

fn check_unit(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(s))
    }
}

/// `x(s)` along a unique geodesic.
pub fn geodesic_eval(path: &GeodesicPath, s: f64) -> Result<f64> {
    check_unit(s)?;
    Ok(path.eval_unchecked(s))
}

/// `x(s)` for the family member with free coefficient `c2`:
/// `ab/(kπ)² + (x0 − ab/(kπ)²)(cos kπs + a/(kπ)·sin kπs) − c2·sin kπs`.
pub fn family_eval(family: &SingularFamily, c2: f64, s: f64) -> Result<f64> {
    check_unit(s)?;
    let phase = family.lambda0() * s;
    let (sin, cos) = if s == 1.0 {
        // sin(kπ) = 0 and cos(kπ) = ±1 exactly.
        (0.0, if family.k.is_multiple_of(2) { 1.0 } else { -1.0 })
    } else {
        phase.sin_cos()
    };
    Ok(family.center + (family.x0 - family.center) * (cos + family.sin_weight * sin) - c2 * sin)
}
