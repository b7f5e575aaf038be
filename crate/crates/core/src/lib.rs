//! Polynomial solutions of `(a20 x^2 + a21 x + a22) y'' + (a10 x + a11) y' - tau y = 0`.

pub mod aim;
pub mod algebra;
pub mod catalog;
pub mod error;
pub mod hyper;
pub mod ode;
pub mod quadrature;
pub mod recurrence;
pub mod sampling;
pub mod solvable;
pub mod special;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
