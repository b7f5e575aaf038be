//! Named classical equations and cross-validation against textbook families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::ode::{classify, CaseTag, EquationParams};
use crate::recurrence::solve;

/// The eleven catalog rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicalName {
    Hypergeometric,
    Legendre,
    Chebyshev1,
    Chebyshev2,
    Gegenbauer,
    Jacobi,
    Romanovski,
    Hermite,
    Laguerre,
    Confluent,
    Bessel,
}

impl ClassicalName {
    pub const ALL: [ClassicalName; 11] = [
        ClassicalName::Hypergeometric,
        ClassicalName::Legendre,
        ClassicalName::Chebyshev1,
        ClassicalName::Chebyshev2,
        ClassicalName::Gegenbauer,
        ClassicalName::Jacobi,
        ClassicalName::Romanovski,
        ClassicalName::Hermite,
        ClassicalName::Laguerre,
        ClassicalName::Confluent,
        ClassicalName::Bessel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassicalName::Hypergeometric => "hypergeometric",
            ClassicalName::Legendre => "legendre",
            ClassicalName::Chebyshev1 => "chebyshev1",
            ClassicalName::Chebyshev2 => "chebyshev2",
            ClassicalName::Gegenbauer => "gegenbauer",
            ClassicalName::Jacobi => "jacobi",
            ClassicalName::Romanovski => "romanovski",
            ClassicalName::Hermite => "hermite",
            ClassicalName::Laguerre => "laguerre",
            ClassicalName::Confluent => "confluent",
            ClassicalName::Bessel => "bessel",
        }
    }

    /// Arguments the row needs.
    pub fn required_args(self) -> &'static [&'static str] {
        match self {
            ClassicalName::Hypergeometric => &["a", "b", "c"],
            ClassicalName::Gegenbauer => &["k"],
            ClassicalName::Jacobi | ClassicalName::Romanovski | ClassicalName::Bessel => {
                &["alpha", "beta"]
            }
            ClassicalName::Laguerre => &["alpha"],
            ClassicalName::Confluent => &["b", "c"],
            _ => &[],
        }
    }

    /// Case tag printed for the row.
    pub fn case(self) -> CaseTag {
        match self {
            ClassicalName::Hypergeometric => CaseTag::II,
            ClassicalName::Hermite => CaseTag::IV,
            ClassicalName::Laguerre | ClassicalName::Confluent => CaseTag::V,
            ClassicalName::Bessel => CaseTag::VI,
            _ => CaseTag::III,
        }
    }

    pub fn interval(self) -> (f64, f64) {
        match self {
            ClassicalName::Hypergeometric => (0.0, 1.0),
            ClassicalName::Romanovski | ClassicalName::Hermite => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            ClassicalName::Laguerre | ClassicalName::Confluent | ClassicalName::Bessel => {
                (0.0, f64::INFINITY)
            }
            _ => (-1.0, 1.0),
        }
    }
}

impl fmt::Display for ClassicalName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassicalName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ClassicalName::ALL
            .into_iter()
            .find(|name| name.as_str() == lower)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// A catalog row with its arguments bound.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: ClassicalName,
    pub args: BTreeMap<String, Rational>,
    pub params: EquationParams,
    pub case: CaseTag,
    pub interval: (f64, f64),
}

fn arg(name: ClassicalName, args: &BTreeMap<String, Rational>, key: &str) -> Result<Rational> {
    args.iter()
        .find(|(k, _)| k.eq_ignore_ascii_case(key))
        .map(|(_, v)| v.clone())
        .ok_or_else(|| Error::MissingArg {
            name: name.to_string(),
            arg: key.to_string(),
        })
}

/// Binds a catalog row to concrete parameters. Names and argument keys are
/// case-insensitive.
pub fn lookup(name: &str, args: &BTreeMap<String, Rational>) -> Result<CatalogEntry> {
    let row: ClassicalName = name.parse()?;
    let get = |key: &str| arg(row, args, key);
    let int = Rational::integer;
    let [a20, a21, a22, a10, a11] = match row {
        ClassicalName::Hypergeometric => {
            let sum = get("a")? + get("b")? + int(1);
            [int(-1), int(1), int(0), -sum, get("c")?]
        }
        ClassicalName::Legendre => [int(-1), int(0), int(1), int(-2), int(0)],
        ClassicalName::Chebyshev1 => [int(-1), int(0), int(1), int(-1), int(0)],
        ClassicalName::Chebyshev2 => [int(-1), int(0), int(1), int(-3), int(0)],
        ClassicalName::Gegenbauer => [
            int(-1),
            int(0),
            int(1),
            int(-2) * (int(1) + get("k")?),
            int(0),
        ],
        ClassicalName::Jacobi => [int(-1), int(0), int(1), get("alpha")?, get("beta")?],
        ClassicalName::Romanovski => [int(1), int(0), int(1), get("alpha")?, get("beta")?],
        ClassicalName::Hermite => [int(0), int(0), int(1), int(-2), int(0)],
        ClassicalName::Laguerre => [int(0), int(1), int(0), int(-1), get("alpha")? + int(1)],
        ClassicalName::Confluent => [int(0), int(1), int(0), -get("b")?, get("c")?],
        ClassicalName::Bessel => [int(1), int(0), int(0), get("alpha")? + int(2), get("beta")?],
    };
    let params = EquationParams::new(a20, a21, a22, a10, a11)?;
    let bound = row
        .required_args()
        .iter()
        .map(|key| Ok((key.to_string(), get(key)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(CatalogEntry {
        name: row,
        args: bound,
        case: classify(&params),
        params,
        interval: row.interval(),
    })
}

fn three_term(
    n_max: usize,
    y0: Polynomial,
    y1: Polynomial,
    step: impl Fn(usize, &Polynomial, &Polynomial) -> Polynomial,
) -> Vec<Polynomial> {
    let mut out = vec![y0, y1];
    for k in 1..n_max {
        let next = step(k, &out[k], &out[k - 1]);
        out.push(next);
    }
    out.truncate(n_max + 1);
    out
}

fn r(v: i64) -> Rational {
    Rational::integer(v)
}

fn x_times(p: &Polynomial, c: Rational) -> Polynomial {
    &Polynomial::monomial(c, 1) * p
}

/// Legendre `P_n`.
pub fn legendre(n_max: usize) -> Vec<Polynomial> {
    three_term(n_max, Polynomial::one(), Polynomial::x(), |k, a, b| {
        let kk = Rational::from(k);
        (&x_times(a, &(r(2) * &kk) + r(1)) - &b.scale(&kk)).scale(&(kk + r(1)).recip())
    })
}

/// Chebyshev `T_n`.
pub fn chebyshev_t(n_max: usize) -> Vec<Polynomial> {
    three_term(n_max, Polynomial::one(), Polynomial::x(), |_, a, b| {
        &x_times(a, r(2)) - b
    })
}

/// Chebyshev `U_n`.
pub fn chebyshev_u(n_max: usize) -> Vec<Polynomial> {
    three_term(
        n_max,
        Polynomial::one(),
        Polynomial::from_ints(&[0, 2]),
        |_, a, b| &x_times(a, r(2)) - b,
    )
}

/// Physicists' Hermite `H_n`.
pub fn hermite(n_max: usize) -> Vec<Polynomial> {
    three_term(
        n_max,
        Polynomial::one(),
        Polynomial::from_ints(&[0, 2]),
        |k, a, b| &x_times(a, r(2)) - &b.scale(&Rational::from(2 * k)),
    )
}

/// Generalized Laguerre `L_n^alpha`.
pub fn laguerre(alpha: &Rational, n_max: usize) -> Vec<Polynomial> {
    let y1 = Polynomial::linear(r(-1), alpha + &r(1));
    three_term(n_max, Polynomial::one(), y1, |k, a, b| {
        let kk = Rational::from(k);
        let lin = Polynomial::linear(r(-1), &(&(r(2) * &kk) + &r(1)) + alpha);
        (&(&lin * a) - &b.scale(&(&kk + alpha))).scale(&(kk + r(1)).recip())
    })
}

/// Gegenbauer `C_n^lambda`.
pub fn gegenbauer(lambda: &Rational, n_max: usize) -> Vec<Polynomial> {
    let y1 = Polynomial::monomial(r(2) * lambda, 1);
    three_term(n_max, Polynomial::one(), y1, |k, a, b| {
        let kk = Rational::from(k);
        let up = x_times(a, r(2) * (&kk + lambda));
        let down = b.scale(&(&(&kk + &(r(2) * lambda)) - &r(1)));
        (&up - &down).scale(&(kk + r(1)).recip())
    })
}

/// Bessel polynomials `y_n` solving `x^2 y'' + 2(x + 1) y' = n(n + 1) y`.
pub fn bessel(n_max: usize) -> Vec<Polynomial> {
    three_term(
        n_max,
        Polynomial::one(),
        Polynomial::from_ints(&[1, 1]),
        |k, a, b| &x_times(a, Rational::from(2 * k + 1)) + b,
    )
}

/// Rodrigues-type construction `W^{-1} (d/dx)^n (p2^n W)` using only the
/// Pearson relation `(p2 W)' = p1 W`; exact for any parameters.
pub fn rodrigues(params: &EquationParams, n: usize) -> Polynomial {
    let p2 = params.p2();
    let p1 = params.p1();
    let dp2 = p2.derivative();
    let mut acc = Polynomial::one();
    for k in 0..n {
        let shift = dp2.scale(&Rational::from(n - k - 1));
        acc = &(&acc.derivative() * &p2) + &(&acc * &(&p1 + &shift));
    }
    acc
}

/// Textbook family for a catalog entry, if the module carries one.
fn textbook(entry: &CatalogEntry, n_max: usize) -> Option<Vec<Polynomial>> {
    let get = |k: &str| entry.args.get(k).cloned();
    let family = match entry.name {
        ClassicalName::Legendre => legendre(n_max),
        ClassicalName::Chebyshev1 => chebyshev_t(n_max),
        ClassicalName::Chebyshev2 => chebyshev_u(n_max),
        ClassicalName::Hermite => hermite(n_max),
        ClassicalName::Laguerre => laguerre(&get("alpha")?, n_max),
        ClassicalName::Gegenbauer => gegenbauer(&(get("k")? + Rational::new(1, 2)), n_max),
        ClassicalName::Bessel if get("alpha")?.is_zero() && get("beta")? == r(2) => bessel(n_max),
        _ => return None,
    };
    Some(family)
}

/// Which reference produced the comparison polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceKind {
    Textbook,
    Rodrigues,
}

impl ReferenceKind {
    pub fn label(self) -> &'static str {
        match self {
            ReferenceKind::Textbook => "textbook-recurrence",
            ReferenceKind::Rodrigues => "rodrigues",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProportionalityRow {
    pub n: usize,
    pub solver: Polynomial,
    pub reference: Polynomial,
    pub reference_kind: ReferenceKind,
    /// `solver = ratio * reference`.
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub entry: CatalogEntry,
    pub rows: Vec<ProportionalityRow>,
}

/// Exact ratio `a / b` when `a` is a rational multiple of `b`; otherwise
/// the index of the first offending coefficient.
pub fn proportionality(a: &Polynomial, b: &Polynomial) -> std::result::Result<Rational, usize> {
    let len = a.coeffs().len().max(b.coeffs().len());
    let pivot = (0..len)
        .rev()
        .find(|&k| !b.coeff(k).is_zero())
        .ok_or(0usize)?;
    let ratio = a.coeff(pivot) / b.coeff(pivot);
    if ratio.is_zero() {
        return Err(pivot);
    }
    match (0..len).find(|&k| a.coeff(k) != &ratio * &b.coeff(k)) {
        Some(k) => Err(k),
        None => Ok(ratio),
    }
}

/// Compares solver output with the textbook family (or the Rodrigues
/// construction for rows without one) for every `n <= n_max`.
pub fn cross_validate(
    name: &str,
    args: &BTreeMap<String, Rational>,
    n_max: usize,
) -> Result<CrossValidation> {
    let entry = lookup(name, args)?;
    let family = textbook(&entry, n_max);
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let solver = solve(&entry.params, n, true)?.polynomial;
        let (reference, reference_kind) = match family.as_ref().map(|f| f[n].clone()) {
            Some(p) if !p.is_zero() => (p, ReferenceKind::Textbook),
            _ => (rodrigues(&entry.params, n), ReferenceKind::Rodrigues),
        };
        let ratio = proportionality(&solver, &reference)
            .map_err(|index| Error::ProportionalityFailure { n, index })?;
        rows.push(ProportionalityRow {
            n,
            solver,
            reference,
            reference_kind,
            ratio,
        });
    }
    Ok(CrossValidation { entry, rows })
}
