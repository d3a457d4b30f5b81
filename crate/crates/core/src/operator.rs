//! Operator parameters and regime classification.
//!
//! An operator `L = −θ∂² + (ax + b)∂ + ρx²` is described by four reals. The
//! sign of the discriminant `Δ = a² + 4ρθ` decides everything downstream:
//! hyperbolic (`Δ > 0`), critical (`Δ = 0`) or oscillatory (`Δ < 0`).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Default relative tolerance used by [`classify`] to snap near-zero
/// discriminants onto the critical regime.
pub const DEFAULT_EPS_CLASS: f64 = 1e-10;

/// The 1-d operator `−θ∂² + (ax + b)∂ + ρx²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OUOperator {
    theta: f64,
    a: f64,
    b: f64,
    rho: f64,
}

impl OUOperator {
    /// Validates `θ > 0`, `ρ ≠ 0` and finiteness of every field.
    pub fn new(theta: f64, a: f64, b: f64, rho: f64) -> Result<Self> {
        for (field, v) in [("theta", theta), ("a", a), ("b", b), ("rho", rho)] {
            if !v.is_finite() {
                return Err(Error::InvalidOperator {
                    field,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        if theta <= 0.0 {
            return Err(Error::InvalidOperator {
                field: "theta",
                reason: format!("must be positive, got {theta}"),
            });
        }
        if rho == 0.0 {
            return Err(Error::InvalidOperator {
                field: "rho",
                reason: "must be nonzero".to_string(),
            });
        }
        Ok(Self { theta, a, b, rho })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Same operator with the drift offset replaced.
    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(self.theta, self.a, b, self.rho)
    }
}

/// Regime of an operator together with its discriminant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    kind: RegimeKind,
    discriminant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeKind {
    /// `Δ > 0`; eigenvalues `±λ₀` with `λ₀ = √Δ`.
    Hyperbolic { lambda0: f64 },
    /// `Δ = 0`; the generator is nilpotent.
    Critical,
    /// `Δ < 0`; eigenvalues `±iλ₀` with `λ₀ = √(−Δ)`.
    Oscillatory { lambda0: f64 },
}

impl Regime {
    pub fn kind(&self) -> RegimeKind {
        self.kind
    }

    pub fn discriminant(&self) -> f64 {
        self.discriminant
    }

    /// `λ₀`, or `None` in the critical regime.
    pub fn lambda0(&self) -> Option<f64> {
        match self.kind {
            RegimeKind::Hyperbolic { lambda0 } | RegimeKind::Oscillatory { lambda0 } => {
                Some(lambda0)
            }
            RegimeKind::Critical => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            RegimeKind::Hyperbolic { .. } => "hyperbolic",
            RegimeKind::Critical => "critical",
            RegimeKind::Oscillatory { .. } => "oscillatory",
        }
    }

    pub fn is_critical(&self) -> bool {
        matches!(self.kind, RegimeKind::Critical)
    }
}

/// Operator in `n` decoupled spatial variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductOperator {
    factors: Vec<OUOperator>,
}

impl ProductOperator {
    pub fn new(factors: Vec<OUOperator>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidOperator {
                field: "factors",
                reason: "must contain at least one operator".to_string(),
            });
        }
        Ok(Self { factors })
    }

    /// `n` copies of the same 1-d operator.
    pub fn uniform(op: OUOperator, n: usize) -> Result<Self> {
        Self::new(vec![op; n])
    }

    pub fn factors(&self) -> &[OUOperator] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }
}

/// Result of [`parse_operator`].
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedOperator {
    Single(OUOperator),
    Product(ProductOperator),
}

impl ParsedOperator {
    /// Views either form as a product; a single operator becomes `n = 1`.
    pub fn into_product(self) -> ProductOperator {
        match self {
            ParsedOperator::Single(op) => ProductOperator { factors: vec![op] },
            ParsedOperator::Product(p) => p,
        }
    }
}

/// `a² + 4ρθ`, exactly as floating point gives it.
pub fn discriminant(op: &OUOperator) -> f64 {
    op.a * op.a + 4.0 * op.rho * op.theta
}

/// Classifies `op`; `|Δ| ≤ eps_rel · max(a², 4|ρθ|, 1)` counts as critical.
pub fn classify(op: &OUOperator, eps_rel: f64) -> Regime {
    let discriminant = discriminant(op);
    let scale = (op.a * op.a).max(4.0 * (op.rho * op.theta).abs()).max(1.0);
    let kind = if discriminant.abs() <= eps_rel * scale {
        RegimeKind::Critical
    } else if discriminant > 0.0 {
        RegimeKind::Hyperbolic {
            lambda0: discriminant.sqrt(),
        }
    } else {
        RegimeKind::Oscillatory {
            lambda0: (-discriminant).sqrt(),
        }
    };
    Regime { kind, discriminant }
}

/// Classification with [`DEFAULT_EPS_CLASS`].
pub fn regime(op: &OUOperator) -> Regime {
    classify(op, DEFAULT_EPS_CLASS)
}

/// Parses `{"theta":..,"a":..,"b":..,"rho":..}` or `{"factors":[...]}`.
pub fn parse_operator(text: &str) -> Result<ParsedOperator> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".to_string()))?;
    if let Some(factors) = obj.get("factors") {
        let list = factors.as_array().ok_or(Error::InvalidOperator {
            field: "factors",
            reason: "must be an array".to_string(),
        })?;
        let ops = list
            .iter()
            .enumerate()
            .map(|(index, v)| {
                operator_from_value(v).map_err(|e| Error::Factor {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(ParsedOperator::Product(ProductOperator::new(ops)?));
    }
    operator_from_value(&value).map(ParsedOperator::Single)
}

fn operator_from_value(v: &Value) -> Result<OUOperator> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("operator must be a JSON object".to_string()))?;
    let field = |name: &'static str| -> Result<f64> {
        match obj.get(name) {
            None => Err(Error::InvalidOperator {
                field: name,
                reason: "is missing".to_string(),
            }),
            Some(x) => x.as_f64().ok_or(Error::InvalidOperator {
                field: name,
                reason: format!("must be a number, got {x}"),
            }),
        }
    };
    OUOperator::new(field("theta")?, field("a")?, field("b")?, field("rho")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn op(theta: f64, a: f64, b: f64, rho: f64) -> OUOperator {
        OUOperator::new(theta, a, b, rho).unwrap()
    }

    #[test]
    fn discriminant_fixtures() {
        assert_eq!(discriminant(&op(1.0, 1.0, 0.0, 1.0)), 5.0);
        assert_eq!(discriminant(&op(1.0, 1.0, 0.0, -1.0)), -3.0);
        assert_eq!(discriminant(&op(1.0, 2.0, 0.0, -1.0)), 0.0);
    }

    #[test]
    fn classify_fixtures() {
        let r = regime(&op(1.0, 1.0, 0.0, 1.0));
        match r.kind() {
            RegimeKind::Hyperbolic { lambda0 } => assert!((lambda0 - 5f64.sqrt()).abs() < 1e-15),
            k => panic!("expected hyperbolic, got {k:?}"),
        }
        assert!(regime(&op(1.0, 2.0, 3.0, -1.0)).is_critical());

        let r = regime(&op(1.0, 1.0, 0.0, -(PI * PI + 1.0) / 4.0));
        match r.kind() {
            RegimeKind::Oscillatory { lambda0 } => assert!((lambda0 - PI).abs() < 1e-12),
            k => panic!("expected oscillatory, got {k:?}"),
        }
    }

    #[test]
    fn exact_classification_with_zero_tolerance() {
        let near = op(1.0, 2.0, 0.0, -1.0 + 1e-14);
        assert!(regime(&near).is_critical());
        assert!(!classify(&near, 0.0).is_critical());
        assert!(classify(&op(1.0, 2.0, 0.0, -1.0), 0.0).is_critical());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(matches!(
            OUOperator::new(0.0, 1.0, 0.0, 1.0),
            Err(Error::InvalidOperator { field: "theta", .. })
        ));
        assert!(matches!(
            OUOperator::new(1.0, 1.0, 0.0, 0.0),
            Err(Error::InvalidOperator { field: "rho", .. })
        ));
        assert!(matches!(
            OUOperator::new(1.0, f64::NAN, 0.0, 1.0),
            Err(Error::InvalidOperator { field: "a", .. })
        ));
        assert!(ProductOperator::new(vec![]).is_err());
    }

    #[test]
    fn parses_single_and_product() {
        let p = parse_operator(r#"{"theta":1,"a":1,"b":0,"rho":1}"#).unwrap();
        assert_eq!(p, ParsedOperator::Single(op(1.0, 1.0, 0.0, 1.0)));

        let p = parse_operator(
            r#"{"factors":[{"theta":1,"a":1,"b":0,"rho":1},{"theta":2,"a":0,"b":1,"rho":-1}]}"#,
        )
        .unwrap();
        match p {
            ParsedOperator::Product(prod) => assert_eq!(prod.dim(), 2),
            other => panic!("expected product, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = parse_operator(r#"{"theta":0,"a":1,"b":0,"rho":1}"#).unwrap_err();
        assert!(err.to_string().contains("theta must be positive"), "{err}");

        let err = parse_operator(r#"{"theta":1,"a":1,"rho":1}"#).unwrap_err();
        assert!(err.to_string().contains("b is missing"), "{err}");

        let err = parse_operator(r#"{"theta":1,"a":"x","b":0,"rho":1}"#).unwrap_err();
        assert!(err.to_string().contains("a must be a number"), "{err}");

        let err = parse_operator(r#"{"factors":[{"theta":1,"a":1,"b":0,"rho":0}]}"#).unwrap_err();
        assert!(err.to_string().contains("factor 0"), "{err}");

        assert!(matches!(parse_operator("{theta:1"), Err(Error::Parse(_))));
    }
}
