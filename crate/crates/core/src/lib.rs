//! Polynomial interpolation on Bernstein elliptic discs.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: intervals, the Joukowsky map, Bernstein discs and the
//!   radius calculus for nested intervals.
//! * [`chebyshev`]: Chebyshev rules, barycentric interpolants on the complex
//!   plane, Lebesgue constants and Chebyshev/Laurent coefficients.
//! * [`chain`]: iterated interpolation along nested interval chains together
//!   with the constants of the corresponding error and stability bounds.
//! * [`oscillatory`]: plane-wave modulated interpolation and directional
//!   chains.
//! * [`fastsum`]: a 1D multilevel kernel summation built on nested
//!   interpolation bases.
//!
//! Experiments that compare a measured quantity against an analytic bound
//! return a [`check::Measurement`], which carries the rounding floor that
//! separates a genuine violation from double-precision noise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod chebyshev;
pub mod check;
pub mod error;
pub mod fastsum;
pub mod functions;
pub mod geometry;
pub mod oscillatory;

pub use error::{Error, Result};
pub use num_complex::Complex64;
