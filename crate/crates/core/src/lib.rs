//! Numerics for the curve `t ↦ ζ(½ + it)`.
//!
//! The crate is split into the evaluator ([`zeta`]), the phase machinery
//! ([`theta`]), the self-intersection scanner ([`selfcross`]), the
//! power-series engine deciding whether two analytic curves share an arc
//! near zero ([`series`], [`share`]) and sampled-curve tools for
//! transition maps and fundamental domains ([`loops`]).

pub mod error;
pub mod fixed;
pub mod gamma;
pub mod geometry;
pub mod loops;
pub mod rational;
pub mod roots;
pub mod scalar;
pub mod selfcross;
pub mod series;
pub mod share;
pub mod theta;
pub mod zeta;

pub use error::{Error, Result};
pub use zeta::{CriticalSample, EvalConfig, Method};
