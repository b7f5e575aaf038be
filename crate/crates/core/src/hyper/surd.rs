use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::algebra::{Rational, Scalar};

/// Exact element `a + b*sqrt(d)` of a quadratic extension of the rationals.
///
/// `d` is never a rational square; a purely rational value stores `b = d = 0`.
/// Values built from different radicands only combine when the radicands
/// differ by a rational square factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    fn make(a: Rational, b: Rational, d: Rational) -> Self {
        if b.is_zero() || d.is_zero() {
            Surd::rational(a)
        } else {
            Surd { a, b, d }
        }
    }

    /// Principal square root of a rational (imaginary for negative input).
    pub fn sqrt(value: &Rational) -> Self {
        if let Some(r) = value.sqrt_exact() {
            return Surd::rational(r);
        }
        // sqrt(p/q) = sqrt(p q) / q keeps the radicand integral.
        let radicand = Rational::from(value.numer() * value.denom());
        let coeff = Rational::from(value.denom().clone()).recip();
        if radicand.is_negative() {
            if let Some(r) = (-&radicand).sqrt_exact() {
                return Surd::make(Rational::zero(), coeff * r, Rational::integer(-1));
            }
        }
        Surd::make(Rational::zero(), coeff, radicand)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64();
        if self.b.is_zero() {
            return Complex64::new(a, 0.0);
        }
        let b = self.b.to_f64();
        let d = self.d.to_f64();
        if d >= 0.0 {
            Complex64::new(a + b * d.sqrt(), 0.0)
        } else {
            Complex64::new(a, b * (-d).sqrt())
        }
    }

    /// Rewrites `other` over this radicand, returning its coefficient pair.
    fn align(&self, other: &Surd) -> (Rational, Rational, Rational) {
        if other.b.is_zero() {
            return (other.a.clone(), Rational::zero(), self.d.clone());
        }
        if self.b.is_zero() || self.d == other.d {
            return (other.a.clone(), other.b.clone(), other.d.clone());
        }
        let ratio = &other.d / &self.d;
        let factor = ratio
            .sqrt_exact()
            .unwrap_or_else(|| panic!("incompatible radicands {:?} and {:?}", self.d, other.d));
        (other.a.clone(), &other.b * factor, self.d.clone())
    }

    fn radicand_with(&self, other: &Surd) -> Rational {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    pub fn conjugate(&self) -> Surd {
        Surd::make(self.a.clone(), -&self.b, self.d.clone())
    }

    /// Sign of a real surd (`None` for imaginary radicands).
    pub fn signum(&self) -> Option<i32> {
        if self.b.is_zero() {
            return Some(self.a.signum());
        }
        if self.d.is_negative() {
            return None;
        }
        // Compare a with -b sqrt(d) exactly via squares.
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sa == sb || sa == 0 {
            return Some(sb);
        }
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        Some(if lhs > rhs { sa } else { sb })
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{:?}", self.a)
        } else {
            write!(f, "{:?} + {:?}*sqrt({:?})", self.a, self.b, self.d)
        }
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        let d = self.radicand_with(&rhs);
        let base = Surd {
            d: d.clone(),
            ..self.clone()
        };
        let (ra, rb, _) = base.align(&rhs);
        Surd::make(self.a + ra, self.b + rb, d)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::make(-self.a, -self.b, self.d)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let d = self.radicand_with(&rhs);
        let base = Surd {
            d: d.clone(),
            ..self.clone()
        };
        let (ra, rb, _) = base.align(&rhs);
        let a = &self.a * &ra + &self.b * &rb * &d;
        let b = &self.a * &rb + &self.b * &ra;
        Surd::make(a, b, d)
    }
}

impl Div for Surd {
    type Output = Surd;
    fn div(self, rhs: Surd) -> Surd {
        let d = self.radicand_with(&rhs);
        let base = Surd {
            d: d.clone(),
            ..self.clone()
        };
        let (ra, rb, _) = base.align(&rhs);
        let norm = &ra * &ra - &rb * &rb * &d;
        assert!(!norm.is_zero(), "division by zero surd");
        let conj = Surd::make(ra / &norm, -(rb / &norm), d);
        self * conj
    }
}

impl Scalar for Surd {
    fn zero() -> Self {
        Surd::rational(Rational::zero())
    }
    fn one() -> Self {
        Surd::rational(Rational::one())
    }
    fn from_rational(value: &Rational) -> Self {
        Surd::rational(value.clone())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn nonpositive_integer(&self) -> Option<usize> {
        if self.b.is_zero() {
            self.a.nonpositive_integer()
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn square_roots() {
        assert_eq!(Surd::sqrt(&q(9, 4)), Surd::rational(q(3, 2)));
        let s = Surd::sqrt(&q(2, 1));
        assert_eq!(s.clone() * s, Surd::rational(q(2, 1)));
        let t = Surd::sqrt(&q(1, 2));
        assert_eq!(t.clone() * t.clone(), Surd::rational(q(1, 2)));
        assert!((t.to_complex().re - 0.5f64.sqrt()).abs() < 1e-15);
        let i = Surd::sqrt(&q(-1, 1));
        assert_eq!(i.clone() * i.clone(), Surd::rational(q(-1, 1)));
        assert_eq!(i.to_complex(), Complex64::new(0.0, 1.0));
        let neg = Surd::sqrt(&q(-3, 4));
        assert_eq!(neg.clone() * neg, Surd::rational(q(-3, 4)));
    }

    #[test]
    fn field_operations() {
        let s = Surd::sqrt(&q(3, 1));
        let x = Surd::rational(q(1, 2)) + s.clone();
        let y = x.clone() / x.clone();
        assert_eq!(y, Surd::one());
        let z = (x.clone() * x.conjugate()) - Surd::rational(q(1, 4) - q(3, 1));
        assert!(Scalar::is_zero(&z));
        // sqrt(12) aligns with sqrt(3).
        let w = Surd::sqrt(&q(12, 1)) - Surd::rational(q(2, 1)) * s;
        assert!(Scalar::is_zero(&w));
    }

    #[test]
    fn signs() {
        let s = Surd::sqrt(&q(2, 1));
        assert_eq!((Surd::rational(q(-1, 1)) + s.clone()).signum(), Some(1));
        assert_eq!((Surd::rational(q(-3, 2)) + s.clone()).signum(), Some(-1));
        assert_eq!(Surd::sqrt(&q(-2, 1)).signum(), None);
    }
}
