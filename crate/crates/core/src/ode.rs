//! The equation `(a20 x^2 + a21 x + a22) y'' + (a10 x + a11) y' - tau y = 0`,
//! its eigenvalue condition, case taxonomy and the brute-force series oracle.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};

/// Coefficients of the quadratic `p2` and linear `p1` polynomial factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EquationParams {
    pub a20: Rational,
    pub a21: Rational,
    pub a22: Rational,
    pub a10: Rational,
    pub a11: Rational,
}

impl EquationParams {
    /// Validates that the equation is second order and admits polynomial solutions.
    pub fn new(
        a20: Rational,
        a21: Rational,
        a22: Rational,
        a10: Rational,
        a11: Rational,
    ) -> Result<Self> {
        if a20.is_zero() && a21.is_zero() && a22.is_zero() {
            return Err(Error::InvalidParams(
                "a20 = a21 = a22 = 0 leaves no second-order term".into(),
            ));
        }
        if a20.is_zero() && a10.is_zero() {
            return Err(Error::InvalidParams(
                "a20^2 + a10^2 = 0 admits no polynomial family".into(),
            ));
        }
        Ok(EquationParams {
            a20,
            a21,
            a22,
            a10,
            a11,
        })
    }

    /// Integer-argument convenience constructor.
    pub fn from_ints(a20: i64, a21: i64, a22: i64, a10: i64, a11: i64) -> Result<Self> {
        Self::new(a20.into(), a21.into(), a22.into(), a10.into(), a11.into())
    }

    /// `p2(x) = a20 x^2 + a21 x + a22`.
    pub fn p2(&self) -> Polynomial {
        Polynomial::new(vec![self.a22.clone(), self.a21.clone(), self.a20.clone()])
    }

    /// `p1(x) = a10 x + a11`.
    pub fn p1(&self) -> Polynomial {
        Polynomial::linear(self.a10.clone(), self.a11.clone())
    }

    /// `a21^2 - 4 a20 a22`.
    pub fn discriminant(&self) -> Rational {
        &self.a21 * &self.a21 - Rational::integer(4) * &self.a20 * &self.a22
    }

    pub fn as_array(&self) -> [&Rational; 5] {
        [&self.a20, &self.a21, &self.a22, &self.a10, &self.a11]
    }

    pub fn to_f64(&self) -> [f64; 5] {
        self.as_array().map(Rational::to_f64)
    }

    /// Leading coefficient of the canonical degree-`n` solution,
    /// `prod_{k=n-1}^{2n-2} (a10 + k a20)` (empty product for `n = 0`).
    pub fn leading_coefficient(&self, n: usize) -> Rational {
        if n == 0 {
            return Rational::one();
        }
        (n - 1..=2 * n - 2)
            .map(|k| &self.a10 + Rational::from(k) * &self.a20)
            .product()
    }
}

impl fmt::Debug for EquationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?}, {:?}, {:?}, {:?}, {:?})",
            self.a20, self.a21, self.a22, self.a10, self.a11
        )
    }
}

/// Which of `a20`, `a21`, `a22` vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    General,
    /// `a20 = 0`
    I,
    /// `a22 = 0`
    II,
    /// `a21 = 0`
    III,
    /// `a20 = a21 = 0`
    IV,
    /// `a20 = a22 = 0`
    V,
    /// `a21 = a22 = 0`
    VI,
}

impl CaseTag {
    pub const ALL: [CaseTag; 7] = [
        CaseTag::General,
        CaseTag::I,
        CaseTag::II,
        CaseTag::III,
        CaseTag::IV,
        CaseTag::V,
        CaseTag::VI,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::General => "General",
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
            CaseTag::IV => "IV",
            CaseTag::V => "V",
            CaseTag::VI => "VI",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown case tag `{s}`")))
    }
}

/// `tau = n(n-1) a20 + n a10`.
pub fn eigenvalue(params: &EquationParams, n: usize) -> Rational {
    let n_q = Rational::from(n);
    let n_minus = Rational::integer(n as i64 - 1);
    &n_q * &n_minus * &params.a20 + &n_q * &params.a10
}

pub fn classify(params: &EquationParams) -> CaseTag {
    let z20 = params.a20.is_zero();
    let z21 = params.a21.is_zero();
    let z22 = params.a22.is_zero();
    match (z20, z21, z22) {
        (true, true, _) => CaseTag::IV,
        (true, _, true) => CaseTag::V,
        (_, true, true) => CaseTag::VI,
        (true, false, false) => CaseTag::I,
        (false, false, true) => CaseTag::II,
        (false, true, false) => CaseTag::III,
        (false, false, false) => CaseTag::General,
    }
}

/// `p2 y'' + p1 y' - tau y`.
pub fn residual(params: &EquationParams, tau: &Rational, y: &Polynomial) -> Polynomial {
    let dy = y.derivative();
    let ddy = dy.derivative();
    &(&(&params.p2() * &ddy) + &(&params.p1() * &dy)) - &y.scale(tau)
}

/// Scaling applied to a kernel vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Leading coefficient equals [`EquationParams::leading_coefficient`].
    Product,
    /// Leading coefficient one (degenerate degree or spectrum).
    Monic,
}

/// Polynomial kernel of the operator on polynomials of degree at most `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub basis: Vec<Polynomial>,
    pub normalization: Normalization,
}

impl Kernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The solution when the kernel is one-dimensional.
    pub fn unique(&self) -> Option<&Polynomial> {
        match self.basis.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.basis.len() != 1 || self.normalization == Normalization::Monic
    }
}

/// Matrix of `p2 y'' + p1 y' - tau y` on coefficient vectors `c_0..c_n`.
///
/// Row `k` collects the coefficient of `x^k`; the map is upper triangular.
fn operator_matrix(params: &EquationParams, tau: &Rational, n: usize) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![Rational::zero(); n + 1]; n + 1];
    for (k, row) in rows.iter_mut().enumerate() {
        let kq = Rational::from(k);
        let km = Rational::integer(k as i64 - 1);
        row[k] = &kq * &km * &params.a20 + &kq * &params.a10 - tau;
        if k < n {
            let k1 = Rational::from(k + 1);
            row[k + 1] = &k1 * (&kq * &params.a21 + &params.a11);
        }
        if k + 2 <= n {
            let k1 = Rational::from(k + 1);
            let k2 = Rational::from(k + 2);
            row[k + 2] = k2 * k1 * &params.a22;
        }
    }
    rows
}

/// Exact null space by reduced row echelon form with first-nonzero pivoting.
fn null_space(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect()
}

/// Polynomial solutions of degree at most `n` for an arbitrary `tau`.
///
/// Each basis vector is monic; the kernel is empty unless `tau` is one of the
/// eigenvalues of index at most `n`.
pub fn kernel_at(params: &EquationParams, tau: &Rational, n: usize) -> Vec<Polynomial> {
    null_space(operator_matrix(params, tau, n), n + 1)
        .into_iter()
        .map(|v| Polynomial::new(v).monic())
        .collect()
}

/// The oracle: solves the coefficient system at `tau = eigenvalue(params, n)`.
///
/// A one-dimensional kernel is scaled to the canonical leading coefficient
/// when that product is nonzero and returned monic otherwise. Degenerate
/// spectra return the whole (monic) basis.
pub fn series_solve(params: &EquationParams, n: usize) -> Result<Kernel> {
    let tau = eigenvalue(params, n);
    let basis = kernel_at(params, &tau, n);
    match basis.len() {
        0 => Err(Error::EmptyKernel { n }),
        1 => {
            let lead = params.leading_coefficient(n);
            let y = basis.into_iter().next().expect("one vector");
            if !lead.is_zero() && y.degree() == Some(n) {
                Ok(Kernel {
                    basis: vec![y.scale(&lead)],
                    normalization: Normalization::Product,
                })
            } else {
                Ok(Kernel {
                    basis: vec![y],
                    normalization: Normalization::Monic,
                })
            }
        }
        _ => Ok(Kernel {
            basis,
            normalization: Normalization::Monic,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn hermite() -> EquationParams {
        EquationParams::from_ints(0, 0, 1, -2, 0).unwrap()
    }

    #[test]
    fn eigenvalues_of_classical_rows() {
        let any = EquationParams::from_ints(3, 1, 2, 5, 7).unwrap();
        assert_eq!(eigenvalue(&any, 0), q(0, 1));
        assert_eq!(eigenvalue(&hermite(), 3), q(-6, 1));
        let legendre = EquationParams::from_ints(-1, 0, 1, -2, 0).unwrap();
        assert_eq!(eigenvalue(&legendre, 2), q(-6, 1));
    }

    #[test]
    fn classification() {
        let laguerre = EquationParams::new(q(0, 1), q(1, 1), q(0, 1), q(-1, 1), q(3, 2)).unwrap();
        assert_eq!(classify(&laguerre), CaseTag::V);
        assert_eq!(
            classify(&EquationParams::from_ints(1, 0, 0, 3, 2).unwrap()),
            CaseTag::VI
        );
        assert_eq!(
            classify(&EquationParams::from_ints(1, 1, 1, 1, 1).unwrap()),
            CaseTag::General
        );
        assert_eq!(
            classify(&EquationParams::from_ints(0, 2, 1, 1, 1).unwrap()),
            CaseTag::I
        );
        assert_eq!(
            classify(&EquationParams::from_ints(1, 2, 0, 1, 1).unwrap()),
            CaseTag::II
        );
        assert_eq!(
            classify(&EquationParams::from_ints(1, 0, 2, 1, 1).unwrap()),
            CaseTag::III
        );
        assert_eq!(classify(&hermite()), CaseTag::IV);
        assert!(EquationParams::from_ints(0, 0, 0, 1, 1).is_err());
        assert!(EquationParams::from_ints(0, 1, 1, 0, 1).is_err());
    }

    #[test]
    fn case_tag_parsing() {
        assert_eq!("v".parse::<CaseTag>().unwrap(), CaseTag::V);
        assert_eq!("general".parse::<CaseTag>().unwrap(), CaseTag::General);
        assert!("VII".parse::<CaseTag>().is_err());
    }

    #[test]
    fn oracle_small_cases() {
        let p = EquationParams::new(q(2, 3), q(-1, 1), q(5, 2), q(7, 4), q(-3, 1)).unwrap();
        let y0 = series_solve(&p, 0).unwrap();
        assert_eq!(y0.unique(), Some(&Polynomial::one()));
        let y1 = series_solve(&p, 1).unwrap();
        assert_eq!(y1.unique(), Some(&p.p1()));
        let h2 = series_solve(&hermite(), 2).unwrap();
        assert_eq!(h2.unique(), Some(&Polynomial::from_ints(&[-2, 0, 4])));
    }

    #[test]
    fn residuals_vanish() {
        let p = EquationParams::new(q(2, 3), q(-1, 1), q(5, 2), q(7, 4), q(-3, 1)).unwrap();
        assert!(residual(&p, &p.a10, &p.p1()).is_zero());
        assert!(residual(&p, &q(0, 1), &Polynomial::one()).is_zero());
        let h = Polynomial::from_ints(&[-2, 0, 4]);
        assert!(residual(&hermite(), &q(-4, 1), &h).is_zero());
    }

    #[test]
    fn degenerate_spectrum_returns_basis() {
        // a10 = -3 a20: the eigenvalues of index 1 and 3 coincide.
        let p = EquationParams::from_ints(1, 0, 1, -3, 0).unwrap();
        assert_eq!(eigenvalue(&p, 1), eigenvalue(&p, 3));
        assert!(p.leading_coefficient(3).is_zero());
        let k = series_solve(&p, 3).unwrap();
        assert_eq!(k.normalization, Normalization::Monic);
        assert!(k.is_degenerate());
        for y in &k.basis {
            assert!(residual(&p, &eigenvalue(&p, 3), y).is_zero());
        }
    }

    #[test]
    fn no_kernel_off_spectrum() {
        let p = EquationParams::from_ints(1, 2, 3, 4, 5).unwrap();
        assert!(kernel_at(&p, &q(1, 7), 5).is_empty());
    }
}
