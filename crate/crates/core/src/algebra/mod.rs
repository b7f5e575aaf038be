//! Exact coefficient algebra: rationals, dense polynomials and rational functions.

mod polynomial;
mod ratfun;
mod rational;
mod scalar;

pub use polynomial::{horner, horner_with_derivatives, Polynomial};
pub use ratfun::RationalFunction;
pub use rational::{q, Rational};
pub use scalar::Scalar;
