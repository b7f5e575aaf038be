//! Three-term recurrences `y_{n+2} = (A_n x + B_n) y_{n+1} + C_n y_n`.

use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::ode::{classify, eigenvalue, residual, series_solve, CaseTag, EquationParams, Kernel};

/// Coefficients of one recurrence step.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoeffs {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl RecurrenceCoeffs {
    fn step(&self, next: &Polynomial, current: &Polynomial) -> Polynomial {
        let factor = Polynomial::linear(self.a.clone(), self.b.clone());
        &(&factor * next) + &current.scale(&self.c)
    }
}

fn int(v: usize) -> Rational {
    Rational::from(v)
}

/// `(n a20 + a10)` and `(2n a20 + a10)`, or the index at which one vanishes.
fn denominators(params: &EquationParams, n: usize) -> Result<(Rational, Rational)> {
    let d1 = int(n) * &params.a20 + &params.a10;
    let d2 = int(2 * n) * &params.a20 + &params.a10;
    if d1.is_zero() || d2.is_zero() {
        Err(Error::DegenerateDenominator { n })
    } else {
        Ok((d1, d2))
    }
}

/// Theorem-1 recurrence coefficients at index `n`.
pub fn general_coeffs(params: &EquationParams, n: usize) -> Result<RecurrenceCoeffs> {
    let (d1, d2) = denominators(params, n)?;
    let EquationParams {
        a20,
        a21,
        a22,
        a10,
        a11,
    } = params;
    let nn = int(n);
    let n1 = int(n + 1);
    let odd = int(2 * n + 1) * a20 + a10;
    let even = int(2 * (n + 1)) * a20 + a10;

    let a = &odd * &even / &d1;

    let b_inner = Rational::integer(2) * &nn * &n1 * a20 * a21
        + Rational::integer(2) * &n1 * a10 * a21
        - Rational::integer(2) * a11 * a20
        + a10 * a11;
    let b = &odd * b_inner / (&d1 * &d2);

    let quad = Rational::integer(4) * a22 * a20 * a20 - a20 * a21 * a21;
    let lin = Rational::integer(4) * a20 * a10 * a22 - a10 * a21 * a21;
    let cst = a10 * a10 * a22 - a11 * a10 * a21 + a20 * a11 * a11;
    let c_inner = quad * &nn * &nn + lin * &nn + cst;
    let c = n1 * even * c_inner / (d1 * d2);

    Ok(RecurrenceCoeffs { a, b, c })
}

/// `y_0 = 1`, `y_1 = a10 x + a11`.
fn seeds(params: &EquationParams) -> (Polynomial, Polynomial) {
    (Polynomial::one(), params.p1())
}

fn run<F>(y0: Polynomial, y1: Polynomial, n_max: usize, mut coeffs: F) -> Result<Vec<Polynomial>>
where
    F: FnMut(usize) -> Result<RecurrenceCoeffs>,
{
    let mut out = vec![y0];
    if n_max >= 1 {
        out.push(y1);
    }
    for n in 0..n_max.saturating_sub(1) {
        let c = coeffs(n)?;
        let next = c.step(&out[n + 1], &out[n]);
        out.push(next);
    }
    Ok(out)
}

/// `y_0 .. y_{n_max}` by the general recurrence.
pub fn generate(params: &EquationParams, n_max: usize) -> Result<Vec<Polynomial>> {
    let (y0, y1) = seeds(params);
    run(y0, y1, n_max, |n| general_coeffs(params, n))
}

/// Per-case coefficients exactly as each case's recurrence is written.
pub fn case_coeffs(params: &EquationParams, tag: CaseTag, n: usize) -> Result<RecurrenceCoeffs> {
    let EquationParams {
        a20,
        a21,
        a22,
        a10,
        a11,
    } = params;
    let nn = int(n);
    let n1 = int(n + 1);
    let two = Rational::integer(2);
    match tag {
        CaseTag::General => general_coeffs(params, n),
        CaseTag::I => {
            if a10.is_zero() {
                return Err(Error::DegenerateDenominator { n });
            }
            if (a21 * a11 - a22 * a10).is_zero() {
                let shift = a22 * a10 / a21;
                Ok(RecurrenceCoeffs {
                    a: a10.clone(),
                    b: &two * &n1 * a21 + shift,
                    c: -(&nn * &n1 * a21 * a21),
                })
            } else {
                Ok(RecurrenceCoeffs {
                    a: a10.clone(),
                    b: &two * &n1 * a21 + a11,
                    c: -(&n1 * (a21 * a21 * &nn + a11 * a21 - a10 * a22)),
                })
            }
        }
        CaseTag::II => {
            let (d1, d2) = denominators(params, n)?;
            let odd = int(2 * n + 1) * a20 + a10;
            let even = int(2 * (n + 1)) * a20 + a10;
            let a = &odd * &even / &d1;
            if (a10 * a21 - a20 * a11).is_zero() {
                let inner =
                    &two * a20 * a20 * &nn * &nn + &two * a20 * (a20 + a10) * &nn + a10 * a10;
                let b = a21 * &odd * inner / (a20 * &d1 * &d2);
                let c = -(a21 * a21 * &nn * &n1 * &even / &d2);
                Ok(RecurrenceCoeffs { a, b, c })
            } else {
                let inner = &two * a20 * a21 * &nn * &nn
                    + &two * a21 * (a20 + a10) * &nn
                    + &two * a10 * a21
                    - &two * a11 * a20
                    + a10 * a11;
                let b = &odd * inner / (&d1 * &d2);
                let quad = a20 * a21 * a21 * &nn * &nn + a10 * a21 * a21 * &nn + a21 * a11 * a10
                    - a20 * a11 * a11;
                let c = -(&n1 * &even * quad / (&d1 * &d2));
                Ok(RecurrenceCoeffs { a, b, c })
            }
        }
        CaseTag::III | CaseTag::VI => {
            let (d1, d2) = denominators(params, n)?;
            let odd = int(2 * n + 1) * a20 + a10;
            let even = int(2 * (n + 1)) * a20 + a10;
            let a = &odd * &even / &d1;
            let b = a11 * &odd * (a10 - &two * a20) / (&d1 * &d2);
            let inner = if tag == CaseTag::III {
                Rational::integer(4) * a22 * a20 * a20 * &nn * &nn
                    + Rational::integer(4) * a20 * a10 * a22 * &nn
                    + a10 * a10 * a22
                    + a20 * a11 * a11
            } else {
                a20 * a11 * a11
            };
            let c = &n1 * &even * inner / (&d1 * &d2);
            Ok(RecurrenceCoeffs { a, b, c })
        }
        CaseTag::IV => Ok(RecurrenceCoeffs {
            a: a10.clone(),
            b: a11.clone(),
            c: &n1 * a10 * a22,
        }),
        CaseTag::V => {
            if a10.is_zero() {
                return Err(Error::DegenerateDenominator { n });
            }
            Ok(RecurrenceCoeffs {
                a: a10.clone(),
                b: &two * &n1 * a21 + a11,
                c: -(a21 * &n1 * (a21 * &nn + a11)),
            })
        }
    }
}

/// `y_0 .. y_{n_max}` by the case-specific recurrence of `classify(params)`.
pub fn case_recurrence(params: &EquationParams, n_max: usize) -> Result<Vec<Polynomial>> {
    let tag = classify(params);
    let (y0, mut y1) = seeds(params);
    if tag == CaseTag::I && (&params.a21 * &params.a11 - &params.a22 * &params.a10).is_zero() {
        y1 = Polynomial::linear(params.a10.clone(), &params.a22 * &params.a10 / &params.a21);
    }
    run(y0, y1, n_max, |n| case_coeffs(params, tag, n))
}

/// Which engine produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    Recurrence,
    ClosedForm,
    SeriesOracle,
}

impl SolveMethod {
    pub fn label(self) -> &'static str {
        match self {
            SolveMethod::Recurrence => "recurrence",
            SolveMethod::ClosedForm => "closed_form",
            SolveMethod::SeriesOracle => "series_oracle",
        }
    }
}

/// A polynomial solution with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub n: usize,
    pub tau: Rational,
    pub polynomial: Polynomial,
    pub method: SolveMethod,
    pub residual_ok: bool,
    /// Set when the canonical product normalization was unavailable.
    pub monic: bool,
    pub diagnostics: Vec<String>,
}

fn from_kernel(
    params: &EquationParams,
    n: usize,
    kernel: Kernel,
    mut diagnostics: Vec<String>,
) -> Result<SolveReport> {
    let tau = eigenvalue(params, n);
    let monic = kernel.is_degenerate();
    let dimension = kernel.dimension();
    let polynomial = kernel
        .unique()
        .cloned()
        .ok_or(Error::DegenerateSpectrum { n, dimension })?;
    if monic {
        diagnostics.push(format!(
            "leading coefficient product vanishes at n = {n}; returned monic oracle solution"
        ));
    }
    let residual_ok = residual(params, &tau, &polynomial).is_zero();
    Ok(SolveReport {
        n,
        tau,
        polynomial,
        method: SolveMethod::SeriesOracle,
        residual_ok,
        monic,
        diagnostics,
    })
}

/// Degree-`n` solution by the series oracle.
pub fn solve_oracle(params: &EquationParams, n: usize) -> Result<SolveReport> {
    from_kernel(params, n, series_solve(params, n)?, Vec::new())
}

/// Degree-`n` solution by the general recurrence; with `allow_fallback`
/// vanishing denominators are answered by the series oracle instead.
pub fn solve(params: &EquationParams, n: usize, allow_fallback: bool) -> Result<SolveReport> {
    if params.leading_coefficient(n).is_zero() {
        if !allow_fallback {
            return Err(Error::DegenerateLeadingCoefficient { n });
        }
        return solve_oracle(params, n);
    }
    match generate(params, n) {
        Ok(mut ys) => {
            let polynomial = ys.pop().expect("n + 1 polynomials");
            let tau = eigenvalue(params, n);
            let residual_ok = residual(params, &tau, &polynomial).is_zero();
            Ok(SolveReport {
                n,
                tau,
                polynomial,
                method: SolveMethod::Recurrence,
                residual_ok,
                monic: false,
                diagnostics: Vec::new(),
            })
        }
        Err(Error::DegenerateDenominator { n: at }) if allow_fallback => {
            let note = format!("recurrence denominator vanishes at index {at}; used series oracle");
            from_kernel(params, n, series_solve(params, n)?, vec![note])
        }
        Err(e) => Err(e),
    }
}
