use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Rational, Scalar};
use crate::error::Error;

/// Dense univariate polynomial over the rationals; `coeffs[k]` multiplies `x^k`.
///
/// The zero polynomial has an empty coefficient list; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Rational::integer(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    /// `slope * x + intercept`.
    pub fn linear(slope: Rational, intercept: Rational) -> Self {
        Polynomial::new(vec![intercept, slope])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Rescaled so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            Some(lead) => self.scale(&lead.recip()),
            None => Polynomial::zero(),
        }
    }

    /// Lagrange interpolant through points with distinct abscissae.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Polynomial::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let factor = Polynomial::linear(Rational::one(), -xj).scale(&(xi - xj).recip());
                    basis = &basis * &factor;
                }
            }
            out = &out + &basis;
        }
        out
    }

    pub fn pow(&self, exp: usize) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Horner evaluation in any scalar field.
    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + T::from_rational(c))
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        horner(&self.to_f64(), x)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.eval(&x)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Rational::to_f64).collect()
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), Error> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor
            .leading()
            .map(Rational::recip)
            .ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - d_deg];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d_deg] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= &t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d_deg);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial, Error> {
        let (quot, rem) = self.div_rem(divisor)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::InvalidParams("inexact polynomial division".into()))
        }
    }

    /// Real roots over the rationals of a polynomial of degree at most two.
    pub fn rational_roots_low_degree(&self) -> Option<Vec<Rational>> {
        match self.degree() {
            None | Some(0) => Some(Vec::new()),
            Some(1) => Some(vec![-(self.coeff(0) / self.coeff(1))]),
            Some(2) => {
                let (a, b, c) = (self.coeff(2), self.coeff(1), self.coeff(0));
                let disc = &b * &b - Rational::integer(4) * &a * &c;
                let root = disc.sqrt_exact()?;
                let two_a = Rational::integer(2) * &a;
                let mut roots = vec![(-&b - &root) / &two_a, (-&b + &root) / &two_a];
                roots.sort();
                roots.dedup();
                Some(roots)
            }
            _ => None,
        }
    }

    /// LaTeX rendering in descending powers.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
            };
            match k {
                0 => out.push_str(&coeff),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&coeff);
                    }
                    out.push('x');
                    if k > 1 {
                        out.push_str(&format!("^{{{k}}}"));
                    }
                }
            }
        }
        out
    }
}

/// Horner evaluation of float coefficients (constant first).
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Value, first and second derivative of float coefficients at `x`.
pub fn horner_with_derivatives(coeffs: &[f64], x: f64) -> (f64, f64, f64) {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        ddp = ddp * x + 2.0 * dp;
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp, ddp)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag:?}")?,
                1 if mag.is_one() => write!(f, "x")?,
                1 => write!(f, "{mag:?}*x")?,
                _ if mag.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{mag:?}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<'b> Add<&'b Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'b Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'b> Sub<&'b Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'b Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'b> Mul<&'b Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'b Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn difference_of_squares() {
        let a = Polynomial::from_ints(&[1, 1]);
        let b = Polynomial::from_ints(&[-1, 1]);
        assert_eq!(&a * &b, Polynomial::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn additive_identity_and_monomials() {
        let p = Polynomial::from_ints(&[3, 0, 2]);
        assert_eq!(&p + &Polynomial::zero(), p);
        let prod = &Polynomial::monomial(q(2, 1), 1) * &Polynomial::monomial(q(3, 1), 2);
        assert_eq!(prod, Polynomial::monomial(q(6, 1), 3));
    }

    #[test]
    fn derivatives() {
        assert_eq!(
            Polynomial::monomial(q(1, 1), 3).derivative(),
            Polynomial::monomial(q(3, 1), 2)
        );
        assert!(Polynomial::constant(q(5, 1)).derivative().is_zero());
        let p1 = Polynomial::linear(q(-3, 2), q(7, 1));
        assert_eq!(p1.derivative(), Polynomial::constant(q(-3, 2)));
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::from_ints(&[-1, 0, 1]);
        assert_eq!(p.eval_rational(&q(2, 1)), q(3, 1));
        assert_eq!(p.eval_rational(&q(0, 1)), q(-1, 1));
        let h = Polynomial::from_ints(&[-2, 0, 4]);
        assert_eq!(h.eval_rational(&q(1, 2)), q(-1, 1));
        assert_eq!(h.eval_f64(0.5), -1.0);
        assert_eq!(h.eval_complex(Complex64::new(0.5, 0.0)).re, -1.0);
    }

    #[test]
    fn division_and_gcd() {
        let a = Polynomial::from_ints(&[-1, 0, 1]);
        let b = Polynomial::from_ints(&[1, 1]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(quot, Polynomial::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        let c = Polynomial::from_ints(&[2, 3, 1]);
        assert_eq!(a.gcd(&c), Polynomial::from_ints(&[1, 1]));
        assert!(a.div_rem(&Polynomial::zero()).is_err());
    }

    #[test]
    fn derivatives_by_horner() {
        let coeffs = [1.0, -2.0, 3.0, 0.5];
        let (p, dp, ddp) = horner_with_derivatives(&coeffs, 1.5);
        assert!((p - horner(&coeffs, 1.5)).abs() < 1e-14);
        assert!((dp - (-2.0 + 6.0 * 1.5 + 1.5 * 1.5 * 1.5)).abs() < 1e-12);
        assert!((ddp - (6.0 + 3.0 * 1.5)).abs() < 1e-12);
    }

    #[test]
    fn rendering() {
        let p = Polynomial::new(vec![q(-2, 1), q(0, 1), q(4, 1)]);
        assert_eq!(p.to_string(), "4*x^2 - 2");
        assert_eq!(p.to_latex(), "4x^{2} - 2");
        let r = Polynomial::new(vec![q(1, 2), q(-1, 1)]);
        assert_eq!(r.to_latex(), "-x + \\frac{1}{2}");
    }

    #[test]
    fn low_degree_roots() {
        let p = Polynomial::from_ints(&[-2, 1, 1]);
        assert_eq!(p.rational_roots_low_degree(), Some(vec![q(-2, 1), q(1, 1)]));
        assert_eq!(
            Polynomial::from_ints(&[1, 0, 1]).rational_roots_low_degree(),
            None
        );
    }
}
