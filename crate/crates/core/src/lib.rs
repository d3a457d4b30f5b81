//! Closed-form geodesics and heat kernels of the Ornstein–Uhlenbeck operators
//!
//! ```text
//! L = −θ∂ₓ² + (ax + b)∂ₓ + ρx²,    θ > 0,
//! ```
//!
//! together with numerical oracles that check them independently.
//!
//! The discriminant `Δ = a² + 4ρθ` splits operators into hyperbolic (`Δ > 0`),
//! critical (`Δ = 0`) and oscillatory (`Δ < 0`) regimes; geodesics and kernels
//! have one closed form per regime.

pub mod cli;
pub mod error;
pub mod geodesic;
pub mod hamiltonian;
pub mod kernel;
pub mod operator;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use error::{Error, Result, SingularTimeError};
pub use geodesic::{family_eval, geodesic, geodesic_eval, GeodesicPath, GeodesicResult, SingularFamily};
pub use hamiltonian::{flow, flow_numeric, transition_matrix, FlowMatrix, PhaseState};
pub use kernel::{coefficients, kernel, log_kernel, log_kernel_nd, singular_times, KernelCoefficients};
pub use operator::{
    classify, discriminant, parse_operator, regime, OUOperator, ParsedOperator, ProductOperator, Regime, RegimeKind,
};
