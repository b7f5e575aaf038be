use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::Rational;

/// Field operations shared by exact and floating scalars.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(value: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    /// Returns `m` when the value is exactly `-m` for a nonnegative integer `m`.
    fn nonpositive_integer(&self) -> Option<usize>;

    fn from_int(value: i64) -> Self {
        Self::from_rational(&Rational::integer(value))
    }

    fn powi(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn nonpositive_integer(&self) -> Option<usize> {
        match self.to_i64() {
            Some(v) if v <= 0 => Some((-v) as usize),
            _ => None,
        }
    }
    fn powi(&self, exp: usize) -> Self {
        self.pow(exp as i32)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(value: &Rational) -> Self {
        value.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn nonpositive_integer(&self) -> Option<usize> {
        if *self <= 0.0 && self.fract() == 0.0 && *self > -1e15 {
            Some((-*self) as usize)
        } else {
            None
        }
    }
    fn powi(&self, exp: usize) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(value: &Rational) -> Self {
        Complex64::new(value.to_f64(), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn nonpositive_integer(&self) -> Option<usize> {
        if self.im == 0.0 {
            self.re.nonpositive_integer()
        } else {
            None
        }
    }
    fn powi(&self, exp: usize) -> Self {
        Complex64::powi(self, exp as i32)
    }
}
