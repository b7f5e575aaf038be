use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// Rising factorial `(lam)_k = lam (lam + 1) ... (lam + k - 1)`.
pub fn pochhammer<T: Scalar>(lam: &T, k: usize) -> T {
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * (lam.clone() + T::from_int(j as i64));
    }
    acc
}

/// Number of terms minus one of a terminating series, or `None` if no upper
/// parameter is a nonpositive integer.
pub fn termination_order<T: Scalar>(upper: &[T]) -> Option<usize> {
    upper.iter().filter_map(Scalar::nonpositive_integer).min()
}

/// `pFq(upper; lower; z)` summed to its natural termination.
pub fn terminating_pfq<T: Scalar>(upper: &[T], lower: &[T], z: &T) -> Result<T> {
    let order = termination_order(upper).ok_or(Error::NotTerminating)?;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..order {
        let kk = T::from_int(k as i64);
        let mut num = T::one();
        for a in upper {
            num = num * (a.clone() + kk.clone());
        }
        let mut den = T::from_int(k as i64 + 1);
        for (index, b) in lower.iter().enumerate() {
            let factor = b.clone() + kk.clone();
            if factor.is_zero() {
                return Err(Error::ZeroLowerParameter { index });
            }
            den = den * factor;
        }
        term = term * num / den * z.clone();
        sum = sum + term.clone();
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Rational};

    #[test]
    fn rising_factorials() {
        assert_eq!(pochhammer(&q(7, 3), 0), q(1, 1));
        assert_eq!(pochhammer(&q(3, 1), 2), q(12, 1));
        assert_eq!(pochhammer(&q(-2, 1), 3), q(0, 1));
        assert_eq!(pochhammer(&2.5f64, 2), 2.5 * 3.5);
    }

    #[test]
    fn two_term_sum() {
        let (b, c, z) = (q(3, 2), q(5, 7), q(-2, 9));
        let v = terminating_pfq(&[q(-1, 1), b.clone()], std::slice::from_ref(&c), &z).unwrap();
        assert_eq!(v, q(1, 1) - &b * &z / &c);
    }

    #[test]
    fn chu_vandermonde_example() {
        let v = terminating_pfq(&[q(-3, 1), q(2, 1)], &[q(4, 1)], &q(1, 1)).unwrap();
        assert_eq!(v, q(1, 5));
    }

    #[test]
    fn saalschutz_example() {
        let (a, b, c) = (q(1, 1), q(2, 1), q(5, 1));
        let n = 2;
        let e = Rational::one() + &a + &b - &c - Rational::from(n);
        let lhs =
            terminating_pfq(&[q(-2, 1), a.clone(), b.clone()], &[c.clone(), e], &q(1, 1)).unwrap();
        let rhs = pochhammer(&(&c - &a), n) * pochhammer(&(&c - &b), n)
            / (pochhammer(&c, n) * pochhammer(&(&c - &a - &b), n));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn errors() {
        assert_eq!(
            terminating_pfq(&[q(-3, 1)], &[q(-1, 1)], &q(1, 1)),
            Err(Error::ZeroLowerParameter { index: 0 })
        );
        assert_eq!(
            terminating_pfq(&[q(1, 2)], &[q(1, 1)], &q(1, 1)),
            Err(Error::NotTerminating)
        );
        // A lower collision beyond termination is harmless.
        assert!(terminating_pfq(&[q(-1, 1)], &[q(-3, 1)], &q(1, 1)).is_ok());
    }
}
