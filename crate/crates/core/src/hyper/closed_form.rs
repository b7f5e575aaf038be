use num_complex::Complex64;

use super::pfq::{pochhammer, termination_order};
use super::surd::Surd;
use crate::algebra::{Polynomial, Rational, Scalar};
use crate::error::{Error, Result};
use crate::ode::{classify, CaseTag, EquationParams};

/// Which hypergeometric series a form uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    F21,
    F11,
    F20,
}

impl SeriesKind {
    pub fn label(self) -> &'static str {
        match self {
            SeriesKind::F21 => "2F1",
            SeriesKind::F11 => "1F1",
            SeriesKind::F20 => "2F0",
        }
    }
}

/// The closed-form branch selected for a parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaBranch {
    /// Nonzero discriminant, nothing vanishes.
    General,
    /// Zero discriminant.
    DoubleRoot,
    CaseI,
    /// Case I with `a21 a11 = a22 a10`.
    CaseIDegenerate,
    CaseII,
    /// Case II with `a10 a21 = a20 a11`.
    CaseIIDegenerate,
    CaseIII,
    /// Case III with `a20 a11 = a10 a20 sqrt(-a22/a20)`.
    CaseIIIDegenerate,
    CaseIV,
    CaseV,
    CaseVI,
}

impl FormulaBranch {
    pub const ALL: [FormulaBranch; 11] = [
        FormulaBranch::General,
        FormulaBranch::DoubleRoot,
        FormulaBranch::CaseI,
        FormulaBranch::CaseIDegenerate,
        FormulaBranch::CaseII,
        FormulaBranch::CaseIIDegenerate,
        FormulaBranch::CaseIII,
        FormulaBranch::CaseIIIDegenerate,
        FormulaBranch::CaseIV,
        FormulaBranch::CaseV,
        FormulaBranch::CaseVI,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FormulaBranch::General => "general-2F1",
            FormulaBranch::DoubleRoot => "double-root-2F0",
            FormulaBranch::CaseI => "case-I-1F1",
            FormulaBranch::CaseIDegenerate => "case-I-degenerate-1F1",
            FormulaBranch::CaseII => "case-II-2F1",
            FormulaBranch::CaseIIDegenerate => "case-II-degenerate-2F1",
            FormulaBranch::CaseIII => "case-III-2F1",
            FormulaBranch::CaseIIIDegenerate => "case-III-degenerate-2F1",
            FormulaBranch::CaseIV => "case-IV-2F0",
            FormulaBranch::CaseV => "case-V-1F1",
            FormulaBranch::CaseVI => "case-VI-2F0",
        }
    }
}

/// Map from `x` to the series argument.
#[derive(Clone, Debug, PartialEq)]
pub enum Argument<T> {
    /// `z = slope x + intercept`.
    Affine { slope: T, intercept: T },
    /// `z = numer / (slope x + intercept)^2`; pairs with a linear factor of the
    /// same base so every term stays polynomial.
    ReciprocalSquare { numer: T, slope: T, intercept: T },
}

/// `(slope x + intercept)^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPower<T> {
    pub slope: T,
    pub intercept: T,
    pub power: usize,
}

/// `scale * [(lower_0)_order] * factor(x) * pFq(upper; lower; z(x))`.
///
/// When `absorbs_lower` is set the prefactor contains `(lower[0])_order`,
/// which is cancelled termwise against the series denominators so the form
/// stays finite when `lower[0]` is a nonpositive integer.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergeometricForm<T> {
    pub branch: FormulaBranch,
    pub kind: SeriesKind,
    pub scale: T,
    pub absorbs_lower: bool,
    pub factor: Option<LinearPower<T>>,
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub argument: Argument<T>,
}

impl<T: Scalar> HypergeometricForm<T> {
    /// Number of series terms minus one.
    pub fn order(&self) -> usize {
        termination_order(&self.upper).expect("forms terminate")
    }

    /// Constant prefactor, including the absorbed Pochhammer symbol.
    pub fn prefactor(&self) -> T {
        if self.absorbs_lower {
            self.scale.clone() * pochhammer(&self.lower[0], self.order())
        } else {
            self.scale.clone()
        }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> HypergeometricForm<U> {
        HypergeometricForm {
            branch: self.branch,
            kind: self.kind,
            scale: f(&self.scale),
            absorbs_lower: self.absorbs_lower,
            factor: self.factor.as_ref().map(|p| LinearPower {
                slope: f(&p.slope),
                intercept: f(&p.intercept),
                power: p.power,
            }),
            upper: self.upper.iter().map(&f).collect(),
            lower: self.lower.iter().map(&f).collect(),
            argument: match &self.argument {
                Argument::Affine { slope, intercept } => Argument::Affine {
                    slope: f(slope),
                    intercept: f(intercept),
                },
                Argument::ReciprocalSquare {
                    numer,
                    slope,
                    intercept,
                } => Argument::ReciprocalSquare {
                    numer: f(numer),
                    slope: f(slope),
                    intercept: f(intercept),
                },
            },
        }
    }

    /// Series coefficients `c_k` so that the form equals `scale * sum_k c_k z^k`
    /// (before the linear factor), with the absorbed Pochhammer folded in.
    fn coefficients(&self) -> Result<Vec<T>> {
        let order = self.order();
        let (absorbed, rest) = if self.absorbs_lower {
            (Some(&self.lower[0]), &self.lower[1..])
        } else {
            (None, &self.lower[..])
        };
        let mut out = Vec::with_capacity(order + 1);
        let mut ratio = T::one();
        for k in 0..=order {
            if k > 0 {
                let kk = T::from_int(k as i64 - 1);
                let mut num = T::one();
                for a in &self.upper {
                    num = num * (a.clone() + kk.clone());
                }
                let mut den = T::from_int(k as i64);
                for (i, b) in rest.iter().enumerate() {
                    let f = b.clone() + kk.clone();
                    if f.is_zero() {
                        let index = if self.absorbs_lower { i + 1 } else { i };
                        return Err(Error::ZeroLowerParameter { index });
                    }
                    den = den * f;
                }
                ratio = ratio * num / den;
            }
            let c = match absorbed {
                Some(mu) => {
                    ratio.clone() * pochhammer(&(mu.clone() + T::from_int(k as i64)), order - k)
                }
                None => ratio.clone(),
            };
            out.push(c);
        }
        Ok(out)
    }

    /// Value at `x` in any scalar field.
    pub fn eval(&self, x: &T) -> Result<T> {
        let coeffs = self.coefficients()?;
        let sum = match &self.argument {
            Argument::Affine { slope, intercept } => {
                let z = slope.clone() * x.clone() + intercept.clone();
                let mut acc = T::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * z.clone() + c.clone();
                }
                acc
            }
            Argument::ReciprocalSquare {
                numer,
                slope,
                intercept,
            } => {
                let base = slope.clone() * x.clone() + intercept.clone();
                let power = self.factor.as_ref().map_or(0, |f| f.power);
                let mut acc = T::zero();
                for (k, c) in coeffs.iter().enumerate() {
                    acc = acc + c.clone() * numer.powi(k) * base.powi(power - 2 * k);
                }
                return Ok(self.scale.clone() * acc);
            }
        };
        let factor = match &self.factor {
            Some(p) => (p.slope.clone() * x.clone() + p.intercept.clone()).powi(p.power),
            None => T::one(),
        };
        Ok(self.scale.clone() * factor * sum)
    }
}

impl HypergeometricForm<Complex64> {
    /// Real value at `x`; errors if the imaginary part is not negligible.
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        let v = self.eval(&Complex64::new(x, 0.0))?;
        if v.im.abs() > 1e-9 * v.norm().max(1.0) {
            return Err(Error::ImaginaryResidue {
                real: v.re,
                imag: v.im,
            });
        }
        Ok(v.re)
    }

    /// Value at `x` with the sum of the absolute values of all series terms,
    /// which bounds the rounding error of the float evaluation.
    pub fn eval_with_magnitude(&self, x: f64) -> Result<(Complex64, f64)> {
        let x = Complex64::new(x, 0.0);
        let coeffs = self.coefficients()?;
        let value = self.eval(&x)?;
        let terms: f64 = match &self.argument {
            Argument::Affine { slope, intercept } => {
                let z = (slope * x + intercept).norm();
                let factor = self.factor.as_ref().map_or(1.0, |p| {
                    (p.slope * x + p.intercept).norm().powi(p.power as i32)
                });
                coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c.norm()) * factor
            }
            Argument::ReciprocalSquare {
                numer,
                slope,
                intercept,
            } => {
                let base = slope * x + intercept;
                let power = self.factor.as_ref().map_or(0, |f| f.power);
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        (c * numer.powi(k as i32) * base.powi(power as i32 - 2 * k as i32)).norm()
                    })
                    .sum()
            }
        };
        Ok((value, terms * self.scale.norm()))
    }
}

fn r(v: &Rational) -> Surd {
    Surd::rational(v.clone())
}

fn int(v: i64) -> Surd {
    Surd::from_int(v)
}

fn factorial(n: usize) -> Surd {
    Surd::rational((1..=n).map(Rational::from).product())
}

fn sign(n: usize) -> Surd {
    int(if n.is_multiple_of(2) { 1 } else { -1 })
}

fn affine(slope: Surd, intercept: Surd) -> Argument<Surd> {
    Argument::Affine { slope, intercept }
}

/// Exact closed form in `Q(sqrt d)` for the branch matching `params`.
pub fn closed_form_exact(params: &EquationParams, n: usize) -> Result<HypergeometricForm<Surd>> {
    let EquationParams {
        a20,
        a21,
        a22,
        a10,
        a11,
    } = params;
    let nn = n as i64;
    let minus_n = int(-nn);
    let tag = classify(params);
    let ratio = || r(&(a10 / a20));
    let base = |branch, kind, scale, absorbs_lower, upper, lower, argument| HypergeometricForm {
        branch,
        kind,
        scale,
        absorbs_lower,
        factor: None,
        upper,
        lower,
        argument,
    };

    let form = match tag {
        CaseTag::General => {
            let disc = params.discriminant();
            if disc.is_zero() {
                let c = Rational::integer(2) * a20 * a11 - a10 * a21;
                if c.is_zero() {
                    return Err(Error::UnsupportedBranch(
                        "zero discriminant with 2 a20 a11 = a10 a21: no hypergeometric form".into(),
                    ));
                }
                let scale = r(&(&c / (Rational::integer(2) * a20))).powi(n);
                let slope = r(&(-(Rational::integer(2) * a20 * a20) / &c));
                let intercept = r(&(-(a20 * a21) / &c));
                base(
                    FormulaBranch::DoubleRoot,
                    SeriesKind::F20,
                    scale,
                    false,
                    vec![minus_n, int(nn - 1) + ratio()],
                    vec![],
                    affine(slope, intercept),
                )
            } else {
                let d = Surd::sqrt(&disc);
                let num = r(&(Rational::integer(2) * a20 * a11 - a10 * a21)) - r(a10) * d.clone();
                let mu = num / (int(-2) * r(a20) * d.clone());
                let scale = sign(n) * d.powi(n);
                let slope = r(a20) / d.clone();
                let intercept = (r(a21) + d.clone()) / (int(2) * d);
                base(
                    FormulaBranch::General,
                    SeriesKind::F21,
                    scale,
                    true,
                    vec![minus_n, int(nn - 1) + ratio()],
                    vec![mu],
                    affine(slope, intercept),
                )
            }
        }
        CaseTag::I => {
            let shift = a22 * a10 / (a21 * a21);
            let degenerate = (a21 * a11 - a22 * a10).is_zero();
            if degenerate && n >= 1 {
                // a21^n n! z 1F1(1-n; 2; -z), z = a10 x/a21 + a22 a10/a21^2
                let z_slope = r(&(a10 / a21));
                let z_icpt = r(&shift);
                HypergeometricForm {
                    branch: FormulaBranch::CaseIDegenerate,
                    kind: SeriesKind::F11,
                    scale: r(a21).powi(n) * factorial(n),
                    absorbs_lower: false,
                    factor: Some(LinearPower {
                        slope: z_slope.clone(),
                        intercept: z_icpt.clone(),
                        power: 1,
                    }),
                    upper: vec![int(1 - nn)],
                    lower: vec![int(2)],
                    argument: affine(-z_slope, -z_icpt),
                }
            } else {
                let mu = r(&((a21 * a11 - a22 * a10) / (a21 * a21)));
                base(
                    FormulaBranch::CaseI,
                    SeriesKind::F11,
                    r(a21).powi(n),
                    true,
                    vec![minus_n],
                    vec![mu],
                    affine(r(&(-(a10 / a21))), r(&(-shift))),
                )
            }
        }
        CaseTag::II => {
            let degenerate = (a10 * a21 - a20 * a11).is_zero();
            let slope = r(&(a20 / a21));
            if degenerate && n >= 1 {
                // (-1)^{n+1} n! a21^n (n-1+r) z 2F1(1-n, n+r; 2; z), z = a20 x/a21 + 1
                let scale = sign(n + 1) * factorial(n) * r(a21).powi(n) * (int(nn - 1) + ratio());
                HypergeometricForm {
                    branch: FormulaBranch::CaseIIDegenerate,
                    kind: SeriesKind::F21,
                    scale,
                    absorbs_lower: false,
                    factor: Some(LinearPower {
                        slope: slope.clone(),
                        intercept: int(1),
                        power: 1,
                    }),
                    upper: vec![int(1 - nn), int(nn) + ratio()],
                    lower: vec![int(2)],
                    argument: affine(slope, int(1)),
                }
            } else {
                let mu = r(&((a10 * a21 - a20 * a11) / (a20 * a21)));
                base(
                    FormulaBranch::CaseII,
                    SeriesKind::F21,
                    sign(n) * r(a21).powi(n),
                    true,
                    vec![minus_n, int(nn - 1) + ratio()],
                    vec![mu],
                    affine(slope, int(1)),
                )
            }
        }
        CaseTag::III => {
            let s = Surd::sqrt(&(-(a20 * a22)));
            // a20 sqrt(-a22/a20) = sign(a20) sqrt(-a20 a22)
            let t = if a20.is_negative() {
                -s.clone()
            } else {
                s.clone()
            };
            let degenerate = Scalar::is_zero(&(r(&(a20 * a11)) - r(a10) * t.clone()));
            if degenerate && n >= 1 {
                // -n! (-2T)^n (n-1+r) z 2F1(1-n, n+r; 2; z), z = (a20 x + T)/(2T)
                let scale =
                    -(factorial(n) * (int(-2) * t.clone()).powi(n) * (int(nn - 1) + ratio()));
                let slope = r(a20) / (int(2) * t.clone());
                let icpt = Surd::rational(Rational::new(1, 2));
                HypergeometricForm {
                    branch: FormulaBranch::CaseIIIDegenerate,
                    kind: SeriesKind::F21,
                    scale,
                    absorbs_lower: false,
                    factor: Some(LinearPower {
                        slope: slope.clone(),
                        intercept: icpt.clone(),
                        power: 1,
                    }),
                    upper: vec![int(1 - nn), int(nn) + ratio()],
                    lower: vec![int(2)],
                    argument: affine(slope, icpt),
                }
            } else {
                let mu = (r(&(a20 * a11)) - r(a10) * s.clone()) / (int(-2) * r(a20) * s.clone());
                let slope = r(a20) / (int(2) * s.clone());
                base(
                    FormulaBranch::CaseIII,
                    SeriesKind::F21,
                    (int(-2) * s).powi(n),
                    true,
                    vec![minus_n, int(nn - 1) + ratio()],
                    vec![mu],
                    affine(slope, Surd::rational(Rational::new(1, 2))),
                )
            }
        }
        CaseTag::IV => HypergeometricForm {
            branch: FormulaBranch::CaseIV,
            kind: SeriesKind::F20,
            scale: int(1),
            absorbs_lower: false,
            factor: Some(LinearPower {
                slope: r(a10),
                intercept: r(a11),
                power: n,
            }),
            upper: vec![
                Surd::rational(Rational::new(-nn, 2)),
                Surd::rational(Rational::new(1 - nn, 2)),
            ],
            lower: vec![],
            argument: Argument::ReciprocalSquare {
                numer: r(&(Rational::integer(2) * a22 * a10)),
                slope: r(a10),
                intercept: r(a11),
            },
        },
        CaseTag::V => base(
            FormulaBranch::CaseV,
            SeriesKind::F11,
            r(a21).powi(n),
            true,
            vec![minus_n],
            vec![r(&(a11 / a21))],
            affine(r(&(-(a10 / a21))), int(0)),
        ),
        CaseTag::VI => {
            if a11.is_zero() {
                return Err(Error::UnsupportedBranch(
                    "Case VI with a11 = 0: argument is singular".into(),
                ));
            }
            base(
                FormulaBranch::CaseVI,
                SeriesKind::F20,
                r(a11).powi(n),
                false,
                vec![minus_n, int(nn - 1) + ratio()],
                vec![],
                affine(r(&(-(a20 / a11))), int(0)),
            )
        }
    };
    Ok(form)
}

/// Closed form with complex-float components.
pub fn closed_form(params: &EquationParams, n: usize) -> Result<HypergeometricForm<Complex64>> {
    Ok(closed_form_exact(params, n)?.map(Surd::to_complex))
}

/// Evaluates `form` at real `x`, rejecting a non-negligible imaginary part.
pub fn closed_form_eval(form: &HypergeometricForm<Complex64>, x: f64) -> Result<f64> {
    form.eval_real(x)
}

/// Relative accuracy targeted by [`closed_form_value`].
pub const CLOSED_FORM_ACCURACY: f64 = 1e-13;

/// `y_n(x)` from the closed form, accurate to [`CLOSED_FORM_ACCURACY`]:
/// evaluated in floats when the term magnitudes allow it, otherwise in exact
/// `Q(sqrt d)` arithmetic at the binary value of `x` and rounded once.
pub fn closed_form_value(params: &EquationParams, n: usize, x: f64) -> Result<f64> {
    let exact = closed_form_exact(params, n)?;
    let form = exact.map(Surd::to_complex);
    let bound = (form.order() as f64 + 4.0) * 8.0 * f64::EPSILON;
    if let Ok((v, terms)) = form.eval_with_magnitude(x) {
        if terms * bound <= CLOSED_FORM_ACCURACY * v.norm() && v.im.abs() <= terms * bound {
            return Ok(v.re);
        }
    }
    let xq = Rational::from_f64_exact(x).ok_or(Error::SingularPoint { x })?;
    let v = exact.eval(&Surd::rational(xq))?;
    match v.as_rational() {
        Some(q) => Ok(q.to_f64()),
        None => {
            let c = v.to_complex();
            Err(Error::ImaginaryResidue {
                real: c.re,
                imag: c.im,
            })
        }
    }
}

/// Coefficients of `y_n` recovered from the exact closed form by
/// interpolation at `n + 1` integer points where the form is defined.
pub fn closed_form_polynomial(params: &EquationParams, n: usize) -> Result<Polynomial> {
    let form = closed_form_exact(params, n)?;
    let mut points = Vec::with_capacity(n + 1);
    for k in 0i64.. {
        if points.len() == n + 1 || k > 4 * n as i64 + 16 {
            break;
        }
        for x in [k, -k - 1] {
            if points.len() == n + 1 {
                break;
            }
            let xq = Rational::integer(x);
            let Ok(v) = form.eval(&Surd::rational(xq.clone())) else {
                continue;
            };
            match v.as_rational() {
                Some(r) => points.push((xq, r.clone())),
                None => {
                    let c = v.to_complex();
                    return Err(Error::ImaginaryResidue {
                        real: c.re,
                        imag: c.im,
                    });
                }
            }
        }
    }
    if points.len() < n + 1 {
        return Err(Error::InvalidParams(format!(
            "closed form undefined at the interpolation points for n = {n}"
        )));
    }
    Ok(Polynomial::interpolate(&points))
}
