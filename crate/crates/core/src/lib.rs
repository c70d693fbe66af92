//! Fractional Green kernels, existence criteria for the nonlocal semilinear
//! inequality `(−Δ)^α u ≥ u^q σ`, and numerical checks of the potential
//! theory behind them.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod discrete;
pub mod error;
pub mod green;
pub mod iterate;
pub mod profiles;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instances of the generic types.
pub type VolumeProfileF64 = profiles::VolumeProfile<f64>;
pub type MeasureProfileF64 = profiles::MeasureProfile<f64>;
pub type ModelParamsF64 = profiles::ModelParams<f64>;
pub type GreenValueF64 = green::GreenValue<f64>;
pub type GreenContextF64 = green::GreenContext<f64>;
pub type IntegralResultF64 = quadrature::IntegralResult<f64>;
