//! Equations built from an arbitrary coefficient `Q(x)` whose solutions are
//! `y_n = f_n exp(int phi)`, `phi = (-Q + p1) / (2 p2)`.
//!
//! The equation is `y'' + P y' - V y = 0` with `P = Q/p2` and
//! `V = tau/p2 + phi' + (p1^2 - Q^2) / (4 p2^2)`.

use crate::algebra::{horner, horner_with_derivatives, Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::ode::{classify, eigenvalue, CaseTag, EquationParams};
use crate::quadrature::{gauss_legendre, QuadConfig};
use crate::recurrence::solve;

/// Antiderivative of the phase integrand.
#[derive(Clone, Debug, PartialEq)]
pub enum Phase {
    /// `poly(x) + sum c ln|x - r| + sum d / (x - r)`.
    Exact {
        poly: Polynomial,
        logs: Vec<(Rational, Rational)>,
        poles: Vec<(Rational, Rational)>,
    },
    /// Gauss-Legendre from an integer base point in the same component.
    Numeric { poles: Vec<f64> },
}

/// Theorem-2 equation for a polynomial `Q` and its exact solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvableClassSpec {
    pub params: EquationParams,
    pub q: Polynomial,
    pub n: usize,
    pub tau: Rational,
    pub f_n: Polynomial,
    /// `(-Q + p1) / (2 p2)`.
    pub phase_integrand: RationalFunction,
    /// `Q / p2`.
    pub p_coeff: RationalFunction,
    /// `V` as above.
    pub potential: RationalFunction,
    pub phase: Phase,
}

fn integral(p: &Polynomial) -> Polynomial {
    let mut coeffs = vec![Rational::zero()];
    for (k, c) in p.coeffs().iter().enumerate() {
        coeffs.push(c / &Rational::from(k + 1));
    }
    Polynomial::new(coeffs)
}

fn real_roots_f64(p2: &Polynomial) -> Vec<f64> {
    let c = p2.to_f64();
    match p2.degree() {
        Some(1) => vec![-c[0] / c[1]],
        Some(2) => {
            let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
            if disc < 0.0 {
                Vec::new()
            } else {
                let s = disc.sqrt();
                let mut r = vec![(-c[1] - s) / (2.0 * c[2]), (-c[1] + s) / (2.0 * c[2])];
                r.sort_by(f64::total_cmp);
                r
            }
        }
        _ => Vec::new(),
    }
}

/// Exact antiderivative of `num / den` when `den` (degree <= 2) splits over Q.
fn exact_phase(num: &Polynomial, den: &Polynomial) -> Result<Option<Phase>> {
    let roots = match den.rational_roots_low_degree() {
        Some(r) => r,
        None => return Ok(None),
    };
    let (quot, rem) = num.div_rem(den)?;
    let poly = integral(&quot);
    let lead = den.leading().cloned().ok_or(Error::DivisionByZero)?;
    let mut logs = Vec::new();
    let mut poles = Vec::new();
    if !rem.is_zero() {
        match (den.degree(), roots.as_slice()) {
            (Some(1), [a]) => logs.push((a.clone(), rem.coeff(0) / &lead)),
            (Some(2), [a, b]) => {
                logs.push((a.clone(), rem.eval_rational(a) / (&lead * &(a - b))));
                logs.push((b.clone(), rem.eval_rational(b) / (&lead * &(b - a))));
            }
            (Some(2), [a]) => {
                logs.push((a.clone(), rem.coeff(1) / &lead));
                poles.push((a.clone(), -(rem.eval_rational(a) / &lead)));
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(Phase::Exact { poly, logs, poles }))
}

/// Builds the equation and solution for `params`, `Q` and degree `n`.
pub fn build_class(params: &EquationParams, q: &Polynomial, n: usize) -> Result<SolvableClassSpec> {
    let p2 = params.p2();
    let p1 = params.p1();
    let tau = eigenvalue(params, n);
    let f_n = solve(params, n, true)?.polynomial;
    let num = &p1 - q;
    let phase_integrand = RationalFunction::new(num.clone(), p2.scale(&Rational::integer(2)))?;
    let p_coeff = RationalFunction::new(q.clone(), p2.clone())?;
    let p2_sq = &p2 * &p2;
    let quartic =
        RationalFunction::new(&(&p1 * &p1) - &(q * q), p2_sq.scale(&Rational::integer(4)))?;
    let potential = &(&RationalFunction::new(Polynomial::constant(tau.clone()), p2.clone())?
        + &phase_integrand.derivative())
        + &quartic;
    let phase = match exact_phase(&num, &p2.scale(&Rational::integer(2)))? {
        Some(phase) => phase,
        None => Phase::Numeric {
            poles: real_roots_f64(&p2),
        },
    };
    Ok(SolvableClassSpec {
        params: params.clone(),
        q: q.clone(),
        n,
        tau,
        f_n,
        phase_integrand,
        p_coeff,
        potential,
        phase,
    })
}

/// Integer base point for the numerical phase: the first of `0, 1, 2, ...`
/// then `-1, -2, ...` lying in the same pole-free component as `x`.
fn base_point(poles: &[f64], x: f64) -> Result<f64> {
    let same_side = |b: f64| {
        poles
            .iter()
            .all(|&r| (r - b).abs() > 1e-9 && (r < b.min(x) || r > b.max(x)))
    };
    let bound = x.abs().ceil() as i64 + 2;
    (0..=bound)
        .chain((1..=bound).map(|k| -k))
        .map(|k| k as f64)
        .find(|&b| same_side(b))
        .or_else(|| same_side(x).then_some(x))
        .ok_or(Error::SingularPoint { x })
}

fn log_abs_phase(spec: &SolvableClassSpec, x: f64, quad: &QuadConfig) -> Result<f64> {
    match &spec.phase {
        Phase::Exact { poly, logs, poles } => {
            let mut v = poly.eval_f64(x);
            for (r, c) in logs {
                v += c.to_f64() * (x - r.to_f64()).abs().ln();
            }
            for (r, d) in poles {
                v += d.to_f64() / (x - r.to_f64());
            }
            Ok(v)
        }
        Phase::Numeric { poles } => {
            let base = base_point(poles, x)?;
            let phi = &spec.phase_integrand;
            Ok(gauss_legendre(|t| phi.eval_f64(t), base, x, quad)?.value)
        }
    }
}

/// `ln |v(x)|` for `v = exp(int phi)`.
pub fn log_exp_factor(spec: &SolvableClassSpec, x: f64) -> Result<f64> {
    log_abs_phase(spec, x, &QuadConfig::default())
}

fn check_point(p2: &Polynomial, x: f64) -> Result<()> {
    let c = p2.to_f64();
    let scale = c.iter().map(|v| v.abs()).fold(0.0, f64::max) * x.abs().max(1.0).powi(2);
    if !x.is_finite() || horner(&c, x).abs() <= 1e-12 * scale {
        return Err(Error::SingularPoint { x });
    }
    Ok(())
}

/// Largest scaled residual of `y_n = f_n exp(int phi)` over `points`.
pub fn verify_class(spec: &SolvableClassSpec, points: &[f64]) -> Result<f64> {
    let p2 = spec.params.p2();
    let f = spec.f_n.to_f64();
    let dphi = spec.phase_integrand.derivative();
    let mut worst: f64 = 0.0;
    for &x in points {
        check_point(&p2, x)?;
        let (f0, f1, f2) = horner_with_derivatives(&f, x);
        let phi = spec.phase_integrand.eval_f64(x);
        let r = product_residual(
            (f0, f1, f2),
            phi,
            dphi.eval_f64(x),
            spec.p_coeff.eval_f64(x),
            spec.potential.eval_f64(x),
            log_exp_factor(spec, x)?,
        );
        worst = worst.max(r);
    }
    Ok(worst)
}

fn product_residual(f: (f64, f64, f64), phi: f64, dphi: f64, p: f64, v: f64, log_v: f64) -> f64 {
    let (f0, f1, f2) = f;
    // y = f e^L, y' = (f' + f phi) e^L, y'' = (f'' + 2 f' phi + f (phi^2 + phi')) e^L
    let d1 = f1 + f0 * phi;
    let d2 = f2 + 2.0 * f1 * phi + f0 * (phi * phi + dphi);
    let r = (d2 + p * d1 - v * f0).abs();
    let log_y = f0.abs().ln() + log_v;
    if f0 != 0.0 && log_y > 0.0 {
        r / f0.abs()
    } else {
        r * log_v.exp()
    }
}

/// Residual check for a caller-supplied `Q`: `q(x)` returns `(Q(x), Q'(x))`.
/// The phase integral is computed numerically.
pub fn verify_callable<F: Fn(f64) -> (f64, f64)>(
    params: &EquationParams,
    n: usize,
    q: F,
    points: &[f64],
    quad: &QuadConfig,
) -> Result<f64> {
    let p2 = params.p2();
    let c2 = p2.to_f64();
    let c1 = params.p1().to_f64();
    let tau = eigenvalue(params, n).to_f64();
    let f = solve(params, n, true)?.polynomial.to_f64();
    let poles = real_roots_f64(&p2);
    let phi_at = |t: f64| {
        let (qv, _) = q(t);
        (horner(&c1, t) - qv) / (2.0 * horner(&c2, t))
    };
    let mut worst: f64 = 0.0;
    for &x in points {
        check_point(&p2, x)?;
        let (a, da, _) = horner_with_derivatives(&c2, x);
        let (b, db, _) = horner_with_derivatives(&c1, x);
        let (qv, dq) = q(x);
        let phi = (b - qv) / (2.0 * a);
        let dphi = ((db - dq) * a - (b - qv) * da) / (2.0 * a * a);
        let p = qv / a;
        let v = tau / a + dphi + (b * b - qv * qv) / (4.0 * a * a);
        let base = base_point(&poles, x)?;
        let log_v = gauss_legendre(phi_at, base, x, quad)?.value;
        worst = worst.max(product_residual(
            horner_with_derivatives(&f, x),
            phi,
            dphi,
            p,
            v,
            log_v,
        ));
    }
    Ok(worst)
}

/// The potential as displayed for each case family, assembled from the
/// case's own form of `p2` (and, for Case IV, the expanded derivative).
pub fn specialized_potential(
    params: &EquationParams,
    q: &Polynomial,
    n: usize,
) -> Result<RationalFunction> {
    let EquationParams {
        a20, a21, a22, a10, ..
    } = params;
    let p1 = params.p1();
    let nr = Rational::from(n);
    let two = Rational::integer(2);
    let four = Rational::integer(4);
    let diff = &(&p1 * &p1) - &(q * q);
    let template = |p2: Polynomial, lead: Rational| -> Result<RationalFunction> {
        let first = RationalFunction::new(Polynomial::constant(lead), p2.clone())?;
        let second = RationalFunction::new(&p1 - q, p2.scale(&two))?.derivative();
        let third = RationalFunction::new(diff.clone(), (&p2 * &p2).scale(&four))?;
        Ok(&(&first + &second) + &third)
    };
    let quadratic_lead = &nr * &(&nr - Rational::one()) * a20 + &nr * a10;
    match classify(params) {
        CaseTag::I => template(Polynomial::linear(a21.clone(), a22.clone()), &nr * a10),
        CaseTag::II => template(
            &Polynomial::x() * &Polynomial::linear(a20.clone(), a21.clone()),
            quadratic_lead,
        ),
        CaseTag::III => {
            if !(a20 * a22).is_negative() {
                return Err(Error::UnsupportedBranch(
                    "the Case III specialization requires a20 a22 < 0".into(),
                ));
            }
            template(
                Polynomial::new(vec![a22.clone(), Rational::zero(), a20.clone()]),
                quadratic_lead,
            )
        }
        CaseTag::IV => {
            let first =
                Polynomial::constant((&(&two * &nr) + &Rational::one()) * a10 / (&two * a22));
            let second = q.derivative().scale(&(&two * a22).recip());
            let poly = &first - &second;
            let third = RationalFunction::new(diff, Polynomial::constant(&four * a22 * a22))?;
            Ok(&RationalFunction::from_polynomial(poly) + &third)
        }
        CaseTag::V => template(Polynomial::monomial(a21.clone(), 1), &nr * a10),
        CaseTag::VI => template(Polynomial::monomial(a20.clone(), 2), quadratic_lead),
        CaseTag::General => Err(Error::UnsupportedBranch(
            "no specialization for the general case".into(),
        )),
    }
}
