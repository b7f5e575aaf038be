//! Pearson weights, their validity constraints, inner products and norms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{horner, Rational};
use crate::error::{Error, Result};
use crate::ode::{classify, CaseTag, EquationParams};
use crate::quadrature::{integrate_de, QuadConfig, QuadPoint, QuadResult};
use crate::recurrence::generate;
use crate::special::{factorial, gamma, gamma_complex};

/// Closed-form weight with concrete float constants.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightFormula {
    /// `scale |x - r1|^e1 |x - r2|^e2` between two real roots of `p2`.
    TwoRoots {
        scale: f64,
        r1: f64,
        e1: f64,
        r2: f64,
        e2: f64,
    },
    /// `scale ((x - center)^2 + width^2)^exponent exp(kappa atan((x - center) / width))`.
    Arctan {
        scale: f64,
        center: f64,
        width: f64,
        exponent: f64,
        kappa: f64,
    },
    /// `scale |x - center|^exponent exp(-rho / (x - center))` on one side of a double root.
    DoubleRoot {
        scale: f64,
        center: f64,
        exponent: f64,
        rho: f64,
        right: bool,
    },
    /// `(a22 + a21 x)^exponent exp(rate x)`.
    W1 {
        a21: f64,
        a22: f64,
        exponent: f64,
        rate: f64,
    },
    /// `(a21 + a20 x)^e_line x^e_origin`.
    W2 {
        a20: f64,
        a21: f64,
        e_line: f64,
        e_origin: f64,
    },
    /// `(1/a20) (s - x)^e_minus (s + x)^e_plus`.
    W31 {
        a20: f64,
        s: f64,
        e_minus: f64,
        e_plus: f64,
    },
    /// `(1/a22) (1 - q x)^e_minus (1 + q x)^e_plus`.
    W32 {
        a22: f64,
        q: f64,
        e_minus: f64,
        e_plus: f64,
    },
    /// `(a20 x^2 + a22)^exponent exp(kappa atan(omega x))`.
    W33 {
        a20: f64,
        a22: f64,
        exponent: f64,
        kappa: f64,
        omega: f64,
    },
    /// `(1/a22) exp(x (a10 x + 2 a11) / (2 a22))`.
    W4 { a22: f64, a10: f64, a11: f64 },
    /// `(1/a21) exp(rate x) x^exponent`.
    W5 { a21: f64, rate: f64, exponent: f64 },
    /// `(1/a20) exp(-rho / x) x^exponent`.
    W6 { a20: f64, rho: f64, exponent: f64 },
}

fn log_pow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * base.ln()
    }
}

impl WeightFormula {
    pub fn label(&self) -> &'static str {
        match self {
            WeightFormula::TwoRoots { .. }
            | WeightFormula::Arctan { .. }
            | WeightFormula::DoubleRoot { .. } => "W",
            WeightFormula::W1 { .. } => "W1",
            WeightFormula::W2 { .. } => "W2",
            WeightFormula::W31 { .. } => "W3^1",
            WeightFormula::W32 { .. } => "W3^2",
            WeightFormula::W33 { .. } => "W3^3",
            WeightFormula::W4 { .. } => "W4",
            WeightFormula::W5 { .. } => "W5",
            WeightFormula::W6 { .. } => "W6",
        }
    }

    /// Human-readable formula with the constants substituted.
    pub fn describe(&self) -> String {
        match self {
            WeightFormula::TwoRoots { scale, r1, e1, r2, e2 } => {
                format!("{scale:e} * |x - {r1:e}|^{e1:e} * |x - {r2:e}|^{e2:e}")
            }
            WeightFormula::Arctan { scale, center, width, exponent, kappa } => format!(
                "{scale:e} * ((x - {center:e})^2 + {width:e}^2)^{exponent:e} * exp({kappa:e} * atan((x - {center:e}) / {width:e}))"
            ),
            WeightFormula::DoubleRoot { scale, center, exponent, rho, .. } => {
                format!("{scale:e} * |x - {center:e}|^{exponent:e} * exp(-{rho:e} / (x - {center:e}))")
            }
            WeightFormula::W1 { a21, a22, exponent, rate } => {
                format!("({a22:e} + {a21:e} x)^{exponent:e} * exp({rate:e} x)")
            }
            WeightFormula::W2 { a20, a21, e_line, e_origin } => {
                format!("({a21:e} + {a20:e} x)^{e_line:e} * x^{e_origin:e}")
            }
            WeightFormula::W31 { a20, s, e_minus, e_plus } => {
                format!("(1/{a20:e}) * ({s:e} - x)^{e_minus:e} * ({s:e} + x)^{e_plus:e}")
            }
            WeightFormula::W32 { a22, q, e_minus, e_plus } => {
                format!("(1/{a22:e}) * (1 - {q:e} x)^{e_minus:e} * (1 + {q:e} x)^{e_plus:e}")
            }
            WeightFormula::W33 { a20, a22, exponent, kappa, omega } => {
                format!("({a20:e} x^2 + {a22:e})^{exponent:e} * exp({kappa:e} * atan({omega:e} x))")
            }
            WeightFormula::W4 { a22, a10, a11 } => {
                format!("(1/{a22:e}) * exp(x ({a10:e} x + 2 * {a11:e}) / (2 * {a22:e}))")
            }
            WeightFormula::W5 { a21, rate, exponent } => {
                format!("(1/{a21:e}) * exp({rate:e} x) * x^{exponent:e}")
            }
            WeightFormula::W6 { a20, rho, exponent } => {
                format!("(1/{a20:e}) * exp(-{rho:e} / x) * x^{exponent:e}")
            }
        }
    }

    /// Power-law exponents of the weight at the lower and upper support ends,
    /// zero where there is no algebraic factor. Evaluating with that end's
    /// distance set to one divides the factor out.
    pub fn endpoint_exponents(&self) -> (f64, f64) {
        match *self {
            WeightFormula::TwoRoots { e1, e2, .. } => (e1, e2),
            WeightFormula::W1 { a21, exponent, .. } => {
                if a21 > 0.0 {
                    (exponent, 0.0)
                } else {
                    (0.0, exponent)
                }
            }
            WeightFormula::W2 {
                e_line, e_origin, ..
            } => (e_origin, e_line),
            WeightFormula::W31 {
                e_minus, e_plus, ..
            }
            | WeightFormula::W32 {
                e_minus, e_plus, ..
            } => (e_plus, e_minus),
            WeightFormula::W5 { exponent, .. } => (exponent, 0.0),
            _ => (0.0, 0.0),
        }
    }

    /// Value at a quadrature point; factors vanishing at an endpoint use the
    /// point's endpoint distance.
    pub fn value(&self, p: QuadPoint) -> f64 {
        let x = p.x;
        match *self {
            WeightFormula::TwoRoots { scale, e1, e2, .. } => {
                scale * (log_pow(p.dist_lo, e1) + log_pow(p.dist_hi, e2)).exp()
            }
            WeightFormula::Arctan {
                scale,
                center,
                width,
                exponent,
                kappa,
            } => {
                let t = x - center;
                scale
                    * (log_pow(t * t + width * width, exponent) + kappa * (t / width).atan()).exp()
            }
            WeightFormula::DoubleRoot {
                scale,
                exponent,
                rho,
                right,
                ..
            } => {
                let (d, signed) = if right {
                    (p.dist_lo, p.dist_lo)
                } else {
                    (p.dist_hi, -p.dist_hi)
                };
                scale * (log_pow(d, exponent) - rho / signed).exp()
            }
            WeightFormula::W1 {
                a21,
                exponent,
                rate,
                ..
            } => {
                let d = if a21 > 0.0 { p.dist_lo } else { p.dist_hi };
                (log_pow(a21.abs() * d, exponent) + rate * x).exp()
            }
            WeightFormula::W2 {
                a20,
                e_line,
                e_origin,
                ..
            } => (log_pow(a20.abs() * p.dist_hi, e_line) + log_pow(p.dist_lo, e_origin)).exp(),
            WeightFormula::W31 {
                a20,
                e_minus,
                e_plus,
                ..
            } => (log_pow(p.dist_hi, e_minus) + log_pow(p.dist_lo, e_plus)).exp() / a20,
            WeightFormula::W32 {
                a22,
                q,
                e_minus,
                e_plus,
            } => (log_pow(q * p.dist_hi, e_minus) + log_pow(q * p.dist_lo, e_plus)).exp() / a22,
            WeightFormula::W33 {
                a20,
                a22,
                exponent,
                kappa,
                omega,
            } => (log_pow(a20 * x * x + a22, exponent) + kappa * (omega * x).atan()).exp(),
            WeightFormula::W4 { a22, a10, a11 } => {
                (x * (a10 * x + 2.0 * a11) / (2.0 * a22)).exp() / a22
            }
            WeightFormula::W5 {
                a21,
                rate,
                exponent,
            } => (rate * x + log_pow(p.dist_lo, exponent)).exp() / a21,
            WeightFormula::W6 { a20, rho, exponent } => {
                (-rho / p.dist_lo + log_pow(p.dist_lo, exponent)).exp() / a20
            }
        }
    }
}

/// A named inequality and whether the parameters satisfy it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub description: String,
    pub satisfied: bool,
}

impl Constraint {
    fn new(description: impl Into<String>, satisfied: bool) -> Self {
        Constraint {
            description: description.into(),
            satisfied,
        }
    }
}

/// Pearson weight for a parameter set, with its support and constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub case: CaseTag,
    pub formula: WeightFormula,
    pub lo: f64,
    pub hi: f64,
    pub constraints: Vec<Constraint>,
    /// Length scale used for sampling and infinite quadrature rules.
    pub scale: f64,
    /// Split point for doubly infinite supports.
    pub center: f64,
    /// `a10/a20` when the weight decays like `|x|^(a10/a20 - 2)`; the inner
    /// product of degrees `n`, `m` then needs `a10/a20 < 1 - n - m`.
    pub algebraic_tail: Option<Rational>,
}

impl WeightSpec {
    pub fn satisfied(&self) -> bool {
        self.constraints.iter().all(|c| c.satisfied)
    }

    /// `Ok` when every constraint holds, else the failed descriptions.
    pub fn check(&self) -> Result<()> {
        let failed: Vec<String> = self
            .constraints
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.description.clone())
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::ConstraintViolated(failed))
        }
    }

    /// Checks integrability of `y_n y_m W` beyond the base constraints.
    pub fn check_degrees(&self, n: usize, m: usize) -> Result<()> {
        if let Some(r) = &self.algebraic_tail {
            let bound = Rational::from(1i64 - (n + m) as i64);
            if r >= &bound {
                return Err(Error::NonIntegrable(format!(
                    "a10/a20 = {} must be below 1 - n - m = {} for n = {n}, m = {m}",
                    r.to_fraction_string(),
                    bound.to_fraction_string()
                )));
            }
        }
        Ok(())
    }

    pub fn point(&self, x: f64) -> QuadPoint {
        QuadPoint {
            x,
            dist_lo: if self.lo.is_finite() {
                x - self.lo
            } else {
                f64::INFINITY
            },
            dist_hi: if self.hi.is_finite() {
                self.hi - x
            } else {
                f64::INFINITY
            },
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.formula.value(self.point(x))
    }

    /// Maps `u` in `(0, 1)` monotonically onto the support.
    pub fn from_unit(&self, u: f64) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => self.lo + (self.hi - self.lo) * u,
            (true, false) => self.lo + self.scale * u / (1.0 - u),
            (false, true) => self.hi - self.scale * (1.0 - u) / u,
            (false, false) => self.center + self.scale * (PI * (u - 0.5)).tan(),
        }
    }

    /// `count` evenly spread interior points.
    pub fn interior_points(&self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|k| self.from_unit(0.05 + 0.9 * (k as f64 + 0.5) / count as f64))
            .collect()
    }

    /// `count` random interior points.
    pub fn random_interior_points<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        (0..count)
            .map(|_| self.from_unit(rng.gen_range(0.02..0.98)))
            .collect()
    }

    /// Integrates `f(x) W(x)` over the support.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, cfg: &QuadConfig) -> Result<QuadResult> {
        let g = |p: QuadPoint| {
            let w = self.formula.value(p);
            if w == 0.0 {
                0.0
            } else {
                f(p.x) * w
            }
        };
        let (e_lo, e_hi) = self.formula.endpoint_exponents();
        let sing_lo = self.lo.is_finite() && e_lo < 0.0;
        let sing_hi = self.hi.is_finite() && e_hi < 0.0;
        if sing_lo || sing_hi {
            return self.integrate_singular(&g, (sing_lo, e_lo), (sing_hi, e_hi), cfg);
        }
        if self.lo.is_finite() || self.hi.is_finite() {
            return integrate_de(g, self.lo, self.hi, self.scale, cfg);
        }
        let left = integrate_de(
            |p: QuadPoint| {
                g(QuadPoint {
                    dist_hi: f64::INFINITY,
                    ..p
                })
            },
            f64::NEG_INFINITY,
            self.center,
            self.scale,
            cfg,
        )?;
        let right = integrate_de(
            |p: QuadPoint| {
                g(QuadPoint {
                    dist_lo: f64::INFINITY,
                    ..p
                })
            },
            self.center,
            f64::INFINITY,
            self.scale,
            cfg,
        )?;
        Ok(add_results(left, right))
    }

    /// Splits off a piece next to each end with a negative exponent and
    /// integrates it after `d = h u^(1 / (1 + e))`, which absorbs `d^e`.
    fn integrate_singular<G: Fn(QuadPoint) -> f64>(
        &self,
        g: &G,
        (sing_lo, e_lo): (bool, f64),
        (sing_hi, e_hi): (bool, f64),
        cfg: &QuadConfig,
    ) -> Result<QuadResult> {
        let (lo, hi) = (self.lo, self.hi);
        let width = hi - lo;
        let h = if width.is_finite() {
            0.5 * width
        } else {
            self.scale
        };
        let lower = |cut: f64| -> Result<QuadResult> {
            if sing_lo {
                power_piece(
                    |d| QuadPoint {
                        x: lo + d,
                        dist_lo: 1.0,
                        dist_hi: width - d,
                    },
                    g,
                    h,
                    e_lo,
                    cfg,
                )
            } else {
                integrate_de(
                    |p: QuadPoint| {
                        g(QuadPoint {
                            dist_hi: p.dist_hi + (hi - cut),
                            ..p
                        })
                    },
                    lo,
                    cut,
                    h,
                    cfg,
                )
            }
        };
        let upper = |cut: f64| -> Result<QuadResult> {
            if sing_hi {
                power_piece(
                    |d| QuadPoint {
                        x: hi - d,
                        dist_lo: width - d,
                        dist_hi: 1.0,
                    },
                    g,
                    h,
                    e_hi,
                    cfg,
                )
            } else {
                integrate_de(
                    |p: QuadPoint| {
                        g(QuadPoint {
                            dist_lo: p.dist_lo + (cut - lo),
                            ..p
                        })
                    },
                    cut,
                    hi,
                    h,
                    cfg,
                )
            }
        };
        let cut = if lo.is_finite() { lo + h } else { hi - h };
        Ok(add_results(lower(cut)?, upper(cut)?))
    }
}

fn add_results(a: QuadResult, b: QuadResult) -> QuadResult {
    QuadResult {
        value: a.value + b.value,
        error: a.error + b.error,
        l1: a.l1 + b.l1,
    }
}

/// `integral_0^h g(at(d)) d^e dd` with `g` already free of the `d^e` factor.
fn power_piece<A: Fn(f64) -> QuadPoint, G: Fn(QuadPoint) -> f64>(
    at: A,
    g: &G,
    h: f64,
    e: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let power = 1.0 / (1.0 + e);
    let jacobian = h.powf(1.0 + e) / (1.0 + e);
    integrate_de(
        |p: QuadPoint| jacobian * g(at(h * p.dist_lo.powf(power))),
        0.0,
        1.0,
        1.0,
        cfg,
    )
}

fn f(v: &Rational) -> f64 {
    v.to_f64()
}

fn positive(v: &Rational) -> bool {
    v.is_positive()
}

/// Pearson weight `W` with `(p2 W)' = p1 W`, using the case forms where the
/// family has one.
pub fn pearson_weight(params: &EquationParams) -> Result<WeightSpec> {
    let EquationParams {
        a20,
        a21,
        a22,
        a10,
        a11,
    } = params;
    let [f20, f21, f22, f10, f11] = params.to_f64();
    let case = classify(params);
    let zero = Rational::zero();
    let spec = |formula, lo, hi, constraints, scale, center, algebraic_tail| WeightSpec {
        case,
        formula,
        lo,
        hi,
        constraints,
        scale,
        center,
        algebraic_tail,
    };
    let out = match case {
        CaseTag::I => {
            let mu = (a21 * a11 - a22 * a10) / (a21 * a21);
            let formula = WeightFormula::W1 {
                a21: f21,
                a22: f22,
                exponent: f(&mu) - 1.0,
                rate: f10 / f21,
            };
            let edge = -f22 / f21;
            let scale = (f21 / f10).abs().min(1e6);
            if a21.is_positive() {
                let constraints = vec![
                    Constraint::new("a10 < 0", a10.is_negative()),
                    Constraint::new("a11 > a22 a10 / a21", positive(&mu)),
                ];
                spec(formula, edge, f64::INFINITY, constraints, scale, edge, None)
            } else {
                let constraints = vec![
                    Constraint::new("a22 > 0", a22.is_positive()),
                    Constraint::new("a10 < 0", a10.is_negative()),
                    Constraint::new("a11 < a10 a22 / a21", positive(&mu)),
                ];
                spec(
                    formula,
                    f64::NEG_INFINITY,
                    edge,
                    constraints,
                    scale,
                    edge,
                    None,
                )
            }
        }
        CaseTag::II => {
            let ratio = a10 / a20;
            let origin = a11 / a21;
            let formula = WeightFormula::W2 {
                a20: f20,
                a21: f21,
                e_line: f(&(&ratio - &origin)) - 1.0,
                e_origin: f(&origin) - 1.0,
            };
            let constraints = vec![
                Constraint::new("a20 < 0", a20.is_negative()),
                Constraint::new("a21 > 0", a21.is_positive()),
                Constraint::new("a10 < 0", a10.is_negative()),
                Constraint::new("a11 > 0", a11.is_positive()),
                Constraint::new("a11 < a10 a21 / a20", a11 < &(a10 * a21 / a20)),
            ];
            let hi = -f21 / f20;
            spec(formula, 0.0, hi, constraints, hi.abs(), 0.5 * hi, None)
        }
        CaseTag::III => {
            let ratio = a10 / a20;
            let bound = a11 * a11 < -(a10 * a10 * a22 / a20);
            if (a20 * a22).is_negative() {
                let s = (-f22 / f20).sqrt();
                let q = 1.0 / s;
                let e_minus = (f10 + f11 * q) / (2.0 * f20) - 1.0;
                let e_plus = (f10 - f11 * q) / (2.0 * f20) - 1.0;
                if a20.is_positive() {
                    let constraints = vec![
                        Constraint::new("a10 > 0", a10.is_positive()),
                        Constraint::new("|a11| < sqrt(-a10^2 a22 / a20)", bound),
                    ];
                    let formula = WeightFormula::W31 {
                        a20: f20,
                        s,
                        e_minus,
                        e_plus,
                    };
                    spec(formula, -s, s, constraints, s, 0.0, None)
                } else {
                    let constraints = vec![
                        Constraint::new("a10 < 0", a10.is_negative()),
                        Constraint::new("|a11| < sqrt(-a10^2 a22 / a20)", bound),
                    ];
                    let formula = WeightFormula::W32 {
                        a22: f22,
                        q,
                        e_minus,
                        e_plus,
                    };
                    spec(formula, -s, s, constraints, s, 0.0, None)
                }
            } else {
                let omega = (f20 / f22).sqrt();
                let formula = WeightFormula::W33 {
                    a20: f20,
                    a22: f22,
                    exponent: f10 / (2.0 * f20) - 1.0,
                    kappa: f11 / f20 * omega,
                    omega,
                };
                let constraints = vec![
                    Constraint::new("a20 > 0", a20.is_positive()),
                    Constraint::new("a10 / a20 < 1", ratio < Rational::one()),
                ];
                spec(
                    formula,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    constraints,
                    1.0 / omega,
                    0.0,
                    Some(ratio),
                )
            }
        }
        CaseTag::IV => {
            let constraints = vec![
                Constraint::new("a22 > 0", a22.is_positive()),
                Constraint::new("a10 < 0", a10.is_negative()),
            ];
            let formula = WeightFormula::W4 {
                a22: f22,
                a10: f10,
                a11: f11,
            };
            let scale = (f22 / f10).abs().sqrt();
            spec(
                formula,
                f64::NEG_INFINITY,
                f64::INFINITY,
                constraints,
                scale,
                -f11 / f10,
                None,
            )
        }
        CaseTag::V => {
            let constraints = vec![
                Constraint::new("a10 / a21 < 0", (a10 / a21).is_negative()),
                Constraint::new("a11 / a21 > 0", (a11 / a21).is_positive()),
                Constraint::new("a21 > 0", a21.is_positive()),
            ];
            let formula = WeightFormula::W5 {
                a21: f21,
                rate: f10 / f21,
                exponent: f11 / f21 - 1.0,
            };
            spec(
                formula,
                0.0,
                f64::INFINITY,
                constraints,
                (f21 / f10).abs(),
                0.0,
                None,
            )
        }
        CaseTag::VI => {
            let ratio = a10 / a20;
            let constraints = vec![
                Constraint::new("a20 > 0", a20.is_positive()),
                Constraint::new("a11 / a20 > 0", (a11 / a20).is_positive()),
                Constraint::new("a10 / a20 < 1", ratio < Rational::one()),
            ];
            let formula = WeightFormula::W6 {
                a20: f20,
                rho: f11 / f20,
                exponent: f(&ratio) - 2.0,
            };
            spec(
                formula,
                0.0,
                f64::INFINITY,
                constraints,
                (f11 / f20).abs(),
                0.0,
                Some(ratio),
            )
        }
        CaseTag::General => {
            let disc = params.discriminant();
            let ratio = a10 / a20;
            let scale = 1.0 / f20.abs();
            if disc.is_positive() {
                let root = f(&disc).sqrt();
                let (mut r1, mut r2) = ((-f21 - root) / (2.0 * f20), (-f21 + root) / (2.0 * f20));
                if r1 > r2 {
                    std::mem::swap(&mut r1, &mut r2);
                }
                let e1 = (f10 * r1 + f11) / (f20 * (r1 - r2));
                let e2 = (f10 * r2 + f11) / (f20 * (r2 - r1));
                let constraints = vec![
                    Constraint::new(
                        "p1(r1) / (a20 (r1 - r2)) > 0 at the smaller root r1",
                        e1 > 0.0,
                    ),
                    Constraint::new(
                        "p1(r2) / (a20 (r2 - r1)) > 0 at the larger root r2",
                        e2 > 0.0,
                    ),
                ];
                let formula = WeightFormula::TwoRoots {
                    scale,
                    r1,
                    e1: e1 - 1.0,
                    r2,
                    e2: e2 - 1.0,
                };
                spec(formula, r1, r2, constraints, r2 - r1, 0.5 * (r1 + r2), None)
            } else if disc.is_negative() {
                let center = -f21 / (2.0 * f20);
                let width = (-f(&disc)).sqrt() / (2.0 * f20.abs());
                let kappa = (f10 * center + f11) / (f20 * width);
                let formula = WeightFormula::Arctan {
                    scale,
                    center,
                    width,
                    exponent: f(&ratio) / 2.0 - 1.0,
                    kappa,
                };
                let constraints = vec![Constraint::new("a10 / a20 < 1", ratio < Rational::one())];
                spec(
                    formula,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    constraints,
                    width,
                    center,
                    Some(ratio),
                )
            } else {
                let c = -(a21 / (Rational::integer(2) * a20));
                let rho = params.p1().eval_rational(&c) / a20;
                if rho == zero {
                    return Err(Error::UnsupportedBranch(
                        "double root with p1 vanishing there: no integrable Pearson weight".into(),
                    ));
                }
                let fc = f(&c);
                let frho = f(&rho);
                let right = rho.is_positive();
                let formula = WeightFormula::DoubleRoot {
                    scale,
                    center: fc,
                    exponent: f(&ratio) - 2.0,
                    rho: frho,
                    right,
                };
                let constraints = vec![Constraint::new("a10 / a20 < 1", ratio < Rational::one())];
                let (lo, hi) = if right {
                    (fc, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, fc)
                };
                spec(formula, lo, hi, constraints, frho.abs(), fc, Some(ratio))
            }
        }
    };
    Ok(out)
}

/// Relative Pearson residual `|(p2 W)' - p1 W| / (|(p2 W)'| + |p1 W|)` at `x`,
/// with the derivative from a Richardson-extrapolated central difference.
pub fn pearson_residual(params: &EquationParams, spec: &WeightSpec, x: f64) -> f64 {
    let p2 = params.p2().to_f64();
    let p1 = params.p1().to_f64();
    let base = spec.point(x);
    // Steps move the distance to the nearer finite end, so the weight and
    // the factored `p2` see the same perturbed point.
    let at = |t: f64| {
        if base.dist_lo.is_finite() && base.dist_lo <= base.dist_hi {
            let d = base.dist_lo + t;
            QuadPoint {
                x: spec.lo + d,
                dist_lo: d,
                dist_hi: base.dist_hi - t,
            }
        } else if base.dist_hi.is_finite() {
            let d = base.dist_hi - t;
            QuadPoint {
                x: spec.hi - d,
                dist_lo: base.dist_lo + t,
                dist_hi: d,
            }
        } else {
            spec.point(x + t)
        }
    };
    let g = |t: f64| {
        let p = at(t);
        p2_at(&p2, spec, p) * spec.formula.value(p)
    };
    let local = (horner(&p1, x) / horner(&p2, x)).abs();
    let mut h = 1e-3 * x.abs().max(1.0);
    if local > 0.0 {
        h = h.min(1e-3 / local);
    }
    for d in [base.dist_lo, base.dist_hi] {
        if d.is_finite() {
            h = h.min(1e-3 * d);
        }
    }
    let diff = |h: f64| (g(h) - g(-h)) / (2.0 * h);
    let d1 = diff(h);
    let d2 = diff(h / 2.0);
    let d3 = diff(h / 4.0);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let derivative = (16.0 * r2 - r1) / 15.0;
    let rhs = horner(&p1, x) * spec.formula.value(base);
    let denom = derivative.abs() + rhs.abs();
    if denom == 0.0 {
        0.0
    } else {
        (derivative - rhs).abs() / denom
    }
}

/// `p2` at a point, with each root at a finite support end factored out and
/// replaced by the point's distance to that end.
fn p2_at(p2: &[f64], spec: &WeightSpec, p: QuadPoint) -> f64 {
    let mut rest = p2.to_vec();
    let mut factor = 1.0;
    for (root, dist, sign) in [(spec.lo, p.dist_lo, 1.0), (spec.hi, p.dist_hi, -1.0)] {
        if !root.is_finite() {
            continue;
        }
        while rest.len() > 1 && is_root(&rest, root) {
            rest = deflate(&rest, root);
            factor *= sign * dist;
        }
    }
    factor * horner(&rest, p.x)
}

fn is_root(c: &[f64], r: f64) -> bool {
    let size: f64 = c.iter().rev().fold(0.0, |acc, v| acc * r.abs() + v.abs());
    horner(c, r).abs() <= 1e-10 * size
}

/// Quotient of `c` (ascending) by `x - r`.
fn deflate(c: &[f64], r: f64) -> Vec<f64> {
    let mut out = vec![0.0; c.len() - 1];
    let mut carry = 0.0;
    for k in (1..c.len()).rev() {
        carry = c[k] + carry * r;
        out[k - 1] = carry;
    }
    out
}

/// Largest Pearson residual over `points`.
pub fn pearson_check(params: &EquationParams, spec: &WeightSpec, points: &[f64]) -> f64 {
    points
        .iter()
        .map(|&x| pearson_residual(params, spec, x))
        .fold(0.0, f64::max)
}

/// Numerical inner product with its quadrature diagnostics.
pub fn inner_product_detailed(
    params: &EquationParams,
    n: usize,
    m: usize,
    spec: &WeightSpec,
    quad: &QuadConfig,
) -> Result<QuadResult> {
    spec.check()?;
    spec.check_degrees(n, m)?;
    let ys = generate(params, n.max(m))?;
    let yn = ys[n].to_f64();
    let ym = ys[m].to_f64();
    spec.integrate(|x| horner(&yn, x) * horner(&ym, x), quad)
}

/// `integral y_n y_m W` over the support.
pub fn inner_product(
    params: &EquationParams,
    n: usize,
    m: usize,
    spec: &WeightSpec,
    quad: &QuadConfig,
) -> Result<f64> {
    inner_product_detailed(params, n, m, spec, quad).map(|r| r.value)
}

/// Numeric inner product against its closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormResult {
    pub n: usize,
    pub m: usize,
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

/// Compares the quadrature inner product with the closed form. On the
/// diagonal `rel_err` is relative to the norm; off the diagonal it is
/// `|<y_n, y_m>| / sqrt(norm_n norm_m)`.
pub fn orthogonality(
    params: &EquationParams,
    n: usize,
    m: usize,
    quad: &QuadConfig,
) -> Result<NormResult> {
    let spec = pearson_weight(params)?;
    let numeric = inner_product(params, n, m, &spec, quad)?;
    let (closed_form, rel_err) = if n == m {
        let norm = norm_closed_form(params, n)?;
        (norm, (numeric - norm).abs() / norm.abs())
    } else {
        let scale = (norm_closed_form(params, n)? * norm_closed_form(params, m)?)
            .abs()
            .sqrt();
        (0.0, numeric.abs() / scale)
    };
    Ok(NormResult {
        n,
        m,
        numeric,
        closed_form,
        rel_err,
    })
}

fn poch(a: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

/// Diagonal norm `integral y_n^2 W` from the closed forms.
pub fn norm_closed_form(params: &EquationParams, n: usize) -> Result<f64> {
    let spec = pearson_weight(params)?;
    spec.check()?;
    spec.check_degrees(n, n)?;
    let [a20, a21, a22, a10, a11] = params.to_f64();
    let nf = n as f64;
    let fact = factorial(n);
    let ratio = || {
        if n == 0 {
            1.0
        } else {
            (a10 + (nf - 1.0) * a20) / (a10 + (2.0 * nf - 1.0) * a20)
        }
    };
    let value = match spec.formula {
        WeightFormula::W1 { .. } => {
            let mu = (a21 * a11 - a22 * a10) / (a21 * a21);
            let base = fact
                * a21.powi(2 * n as i32 - 1)
                * gamma(mu + nf)
                * (-a10 * a22 / (a21 * a21)).exp()
                * (-a21 * a21 / a10).powf(mu);
            if a21 > 0.0 {
                base
            } else {
                -base
            }
        }
        WeightFormula::W2 { .. } => {
            let r = a10 / a20;
            let o = a11 / a21;
            fact * (-a20).powf(-o)
                * a21.powf(2.0 * nf - 1.0 + r)
                * ratio()
                * gamma(nf + r - o)
                * gamma(nf + o)
                / gamma(nf + r)
        }
        WeightFormula::W31 { s, .. } => {
            let r = a10 / a20;
            let q = 1.0 / s;
            let up = (a10 + a11 * q) / (2.0 * a20);
            let um = (a10 - a11 * q) / (2.0 * a20);
            2f64.powf(2.0 * nf + r - 1.0)
                * (-a20 * a22).powi(n as i32)
                * gamma(nf + up)
                * gamma(nf + um)
                / (a20 * gamma(nf + r) * s.powf(1.0 - r))
                * ratio()
                * fact
        }
        WeightFormula::W32 { q, .. } => {
            let r = a10 / a20;
            let s = 1.0 / q;
            let up = (a10 + a11 * q) / (2.0 * a20);
            let um = (a10 - a11 * q) / (2.0 * a20);
            2f64.powf(2.0 * nf + r - 1.0) * s * (-a20 * a22).powi(n as i32) / a22
                * gamma(nf + um)
                * gamma(nf + up)
                * fact
                / gamma(nf + r)
                * ratio()
        }
        WeightFormula::W33 { .. } => {
            let r = a10 / a20;
            let q = Complex64::new(0.0, (a20 / a22).sqrt());
            let up = (a10 + a11 * q) / (2.0 * a20);
            let um = (a10 - a11 * q) / (2.0 * a20);
            let one = Complex64::new(1.0, 0.0);
            let v = poch(up, n) * poch(um, n)
                / (gamma_complex(one - up) * gamma_complex(one - um))
                / poch(Complex64::new(r, 0.0), n);
            2f64.powf(2.0 * nf + r)
                * (-a20 * a22).powi(n as i32)
                * PI
                * a20.powf(r / 2.0 - 1.0)
                * (a22 / a20).powf(r / 2.0 - 0.5)
                * gamma(1.0 - r)
                * v.re
                * ratio()
                * fact
        }
        WeightFormula::W4 { .. } => {
            fact * (2.0 * PI).sqrt()
                * (-a11 * a11 / (2.0 * a22 * a10)).exp()
                * (-a10 * a22).powf(nf - 0.5)
        }
        WeightFormula::W5 { .. } => {
            fact * a21.powi(2 * n as i32 - 1)
                * (-a10 / a21).powf(-a11 / a21)
                * gamma(nf + a11 / a21)
        }
        WeightFormula::W6 { .. } => {
            let r = a10 / a20;
            fact * a11.powf(2.0 * nf - 1.0 + r) * a20.powf(-r) * ratio() * gamma(1.0 - nf - r)
        }
        WeightFormula::TwoRoots { .. }
        | WeightFormula::Arctan { .. }
        | WeightFormula::DoubleRoot { .. } => {
            return Err(Error::UnsupportedBranch(
                "no closed-form norm for the general weight".into(),
            ));
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn params(v: [(i64, i64); 5]) -> EquationParams {
        EquationParams::new(
            q(v[0].0, v[0].1),
            q(v[1].0, v[1].1),
            q(v[2].0, v[2].1),
            q(v[3].0, v[3].1),
            q(v[4].0, v[4].1),
        )
        .unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn laguerre_weight() {
        let p = params([(0, 1), (1, 1), (0, 1), (-1, 1), (3, 2)]);
        let spec = pearson_weight(&p).unwrap();
        assert_eq!(spec.formula.label(), "W5");
        assert_eq!((spec.lo, spec.hi), (0.0, f64::INFINITY));
        assert!(spec.satisfied());
        for x in [0.1f64, 1.0, 4.0] {
            let expected = x.sqrt() * (-x).exp();
            assert!((spec.eval(x) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn hermite_weight_and_norm() {
        let p = EquationParams::from_ints(0, 0, 1, -2, 0).unwrap();
        let spec = pearson_weight(&p).unwrap();
        assert_eq!(spec.formula.label(), "W4");
        assert!((spec.eval(1.5) - (-2.25f64).exp()).abs() < 1e-15);
        let norm = norm_closed_form(&p, 2).unwrap();
        assert!((norm - 8.0 * PI.sqrt()).abs() < 1e-12);
        let r = orthogonality(&p, 2, 2, &cfg()).unwrap();
        assert!(r.rel_err < 1e-9, "{r:?}");
    }

    #[test]
    fn laguerre_norms() {
        let p = EquationParams::from_ints(0, 1, 0, -1, 1).unwrap();
        assert!((norm_closed_form(&p, 1).unwrap() - 1.0).abs() < 1e-14);
        let alpha = 0.5;
        let pa = params([(0, 1), (1, 1), (0, 1), (-1, 1), (3, 2)]);
        for n in 0..4 {
            let expected = factorial(n) * gamma(n as f64 + alpha + 1.0);
            assert!((norm_closed_form(&pa, n).unwrap() - expected).abs() < 1e-12 * expected);
        }
        let off = inner_product(&p, 1, 2, &pearson_weight(&p).unwrap(), &cfg()).unwrap();
        assert!(off.abs() < 1e-8);
    }

    #[test]
    fn exponent_near_minus_one_integrates() {
        let p = params([(9, 1), (0, 1), (-9, 1), (1, 2), (7, 16)]);
        let spec = pearson_weight(&p).unwrap();
        assert_eq!(spec.formula.label(), "W3^1");
        let (e_lo, e_hi) = spec.formula.endpoint_exponents();
        assert!(e_lo.min(e_hi) < -0.99);
        for n in 0..3 {
            let r = orthogonality(&p, n, n, &cfg()).unwrap();
            assert!(r.rel_err < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn pearson_near_singular_end() {
        let p = params([(18, 1), (0, 1), (-18, 1), (9, 1), (-135, 16)]);
        let spec = pearson_weight(&p).unwrap();
        let points: Vec<f64> = [1e-6, 1e-4, 0.5, 1.0 - 1e-4, 1.0 - 1e-6]
            .iter()
            .map(|&u| spec.from_unit(u))
            .collect();
        assert!(pearson_check(&p, &spec, &points) < 1e-9);
    }

    #[test]
    fn arctan_weight_sample() {
        let p = EquationParams::from_ints(1, 0, 2, -9, 3).unwrap();
        let spec = pearson_weight(&p).unwrap();
        assert_eq!(spec.formula.label(), "W3^3");
        assert!(spec.satisfied());
        assert!(pearson_check(&p, &spec, &spec.interior_points(20)) < 1e-8);
    }

    #[test]
    fn every_case_satisfies_pearson() {
        let sets = [
            params([(0, 1), (2, 1), (1, 1), (-1, 1), (3, 2)]),
            params([(0, 1), (-2, 1), (1, 1), (-1, 1), (-3, 2)]),
            params([(-1, 1), (2, 1), (0, 1), (-5, 1), (3, 1)]),
            params([(2, 1), (0, 1), (-3, 1), (5, 1), (1, 1)]),
            params([(-2, 1), (0, 1), (3, 1), (-5, 1), (1, 1)]),
            params([(1, 1), (0, 1), (2, 1), (-9, 1), (3, 1)]),
            params([(0, 1), (0, 1), (3, 1), (-2, 1), (1, 1)]),
            params([(0, 1), (2, 1), (0, 1), (-3, 1), (5, 1)]),
            params([(2, 1), (0, 1), (0, 1), (-20, 1), (3, 1)]),
            params([(-1, 1), (1, 1), (2, 1), (-3, 1), (1, 2)]),
            params([(1, 1), (1, 1), (1, 1), (-5, 1), (1, 1)]),
            params([(1, 1), (2, 1), (1, 1), (-5, 1), (7, 1)]),
            params([(1, 1), (2, 1), (1, 1), (-5, 1), (-7, 1)]),
        ];
        for p in &sets {
            let spec = pearson_weight(p).unwrap();
            assert!(spec.satisfied(), "{p:?} {:?}", spec.constraints);
            let pts = spec.interior_points(20);
            assert!(
                pts.iter().all(|&x| spec.contains(x) && spec.eval(x) > 0.0),
                "{p:?}"
            );
            let worst = pearson_check(p, &spec, &pts);
            assert!(
                worst < 1e-8,
                "{p:?} {} residual {worst}",
                spec.formula.label()
            );
        }
    }

    #[test]
    fn printed_norms_match_quadrature() {
        let sets = [
            params([(0, 1), (2, 1), (1, 1), (-1, 1), (3, 2)]),
            params([(0, 1), (-2, 1), (1, 1), (-1, 1), (-3, 2)]),
            params([(-1, 1), (2, 1), (0, 1), (-5, 1), (3, 1)]),
            params([(2, 1), (0, 1), (-3, 1), (5, 1), (1, 1)]),
            params([(-2, 1), (0, 1), (3, 1), (-5, 1), (1, 1)]),
            params([(1, 1), (0, 1), (2, 1), (-9, 1), (3, 1)]),
            params([(0, 1), (0, 1), (3, 1), (-2, 1), (1, 1)]),
            params([(0, 1), (2, 1), (0, 1), (-3, 1), (5, 1)]),
            params([(2, 1), (0, 1), (0, 1), (-20, 1), (3, 1)]),
        ];
        for p in &sets {
            for n in 0..3 {
                for m in 0..3 {
                    let r = orthogonality(p, n, m, &cfg()).unwrap();
                    assert!(r.rel_err < 1e-8, "{p:?} {r:?}");
                }
            }
        }
    }

    #[test]
    fn constraint_failures_are_reported() {
        let p = EquationParams::from_ints(0, 1, 0, 1, 1).unwrap();
        let spec = pearson_weight(&p).unwrap();
        assert!(!spec.satisfied());
        match spec.check() {
            Err(Error::ConstraintViolated(list)) => {
                assert_eq!(list, vec!["a10 / a21 < 0".to_string()])
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            inner_product(&p, 0, 0, &spec, &cfg()),
            Err(Error::ConstraintViolated(_))
        ));
    }

    #[test]
    fn degree_bound_for_algebraic_tails() {
        let p = EquationParams::from_ints(1, 0, 0, -2, 1).unwrap();
        assert!(norm_closed_form(&p, 1).is_ok());
        assert!(matches!(
            norm_closed_form(&p, 2),
            Err(Error::NonIntegrable(_))
        ));
        let general = EquationParams::from_ints(1, 1, 1, -5, 1).unwrap();
        assert!(matches!(
            norm_closed_form(&general, 1),
            Err(Error::UnsupportedBranch(_))
        ));
    }
}
