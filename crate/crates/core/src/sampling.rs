//! Seeded random parameter sets targeting each case, closed-form branch and
//! weight family.

use rand::Rng;

use crate::algebra::{Polynomial, Rational};
use crate::hyper::{closed_form_exact, FormulaBranch};
use crate::ode::{classify, CaseTag, EquationParams};
use crate::weights::{norm_closed_form, pearson_weight, WeightFormula, WeightSpec};

const MAX_ATTEMPTS: usize = 10_000;

/// `p/q` with `|p| <= num`, `1 <= q <= den`.
pub fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn nonzero<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    loop {
        let v = rational(rng, num, den);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn positive<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    nonzero(rng, num, den).abs()
}

fn negative<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    -positive(rng, num, den)
}

/// A rational in `(0, 1)`.
fn fraction<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..=15), 16)
}

fn signed<R: Rng>(rng: &mut R, v: Rational) -> Rational {
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn params(c: [Rational; 5]) -> Option<EquationParams> {
    let [a20, a21, a22, a10, a11] = c;
    EquationParams::new(a20, a21, a22, a10, a11).ok()
}

/// Leading product nonzero for every `n <= n_max`.
pub fn is_regular(p: &EquationParams, n_max: usize) -> bool {
    (0..=n_max).all(|n| !p.leading_coefficient(n).is_zero())
}

/// Any zero pattern, `p2` not identically zero.
pub fn sample_params<R: Rng>(rng: &mut R) -> EquationParams {
    loop {
        let mut c: [Rational; 5] = std::array::from_fn(|_| rational(rng, 9, 4));
        for v in c.iter_mut() {
            if rng.gen_bool(0.25) {
                *v = Rational::zero();
            }
        }
        if let Some(p) = params(c) {
            return p;
        }
    }
}

/// Parameters in `case` with a nonzero leading product up to `n_max`.
pub fn sample_case<R: Rng>(case: CaseTag, n_max: usize, rng: &mut R) -> EquationParams {
    for _ in 0..MAX_ATTEMPTS {
        let z = Rational::zero();
        let mut nz = || nonzero(rng, 9, 4);
        let (a20, a21, a22) = match case {
            CaseTag::General => (nz(), nz(), nz()),
            CaseTag::I => (z, nz(), nz()),
            CaseTag::II => (nz(), nz(), z),
            CaseTag::III => (nz(), z, nz()),
            CaseTag::IV => (z.clone(), z, nz()),
            CaseTag::V => (z.clone(), nz(), z),
            CaseTag::VI => (nz(), z.clone(), z),
        };
        let c = [a20, a21, a22, nonzero(rng, 9, 4), rational(rng, 9, 4)];
        if let Some(p) = params(c) {
            if classify(&p) == case && is_regular(&p, n_max) {
                return p;
            }
        }
    }
    unreachable!("case sampler exhausted")
}

/// Candidate coefficients aimed at `branch`; the caller confirms the branch.
fn branch_candidate<R: Rng>(branch: FormulaBranch, rng: &mut R) -> [Rational; 5] {
    let z = Rational::zero;
    let a10 = nonzero(rng, 9, 4);
    let a11 = rational(rng, 9, 4);
    match branch {
        FormulaBranch::General => [
            nonzero(rng, 9, 4),
            nonzero(rng, 9, 4),
            nonzero(rng, 9, 4),
            a10,
            a11,
        ],
        FormulaBranch::DoubleRoot => {
            let (s, u, v) = (nonzero(rng, 3, 2), nonzero(rng, 4, 2), nonzero(rng, 4, 2));
            let a20 = &s * &u * &u;
            let a21 = Rational::integer(2) * &s * &u * &v;
            let a22 = &s * &v * &v;
            [a20, a21, a22, a10, a11]
        }
        FormulaBranch::CaseI => [z(), nonzero(rng, 9, 4), nonzero(rng, 9, 4), a10, a11],
        FormulaBranch::CaseIDegenerate => {
            let (a21, a22) = (nonzero(rng, 9, 4), nonzero(rng, 9, 4));
            let a11 = &a22 * &a10 / &a21;
            [z(), a21, a22, a10, a11]
        }
        FormulaBranch::CaseII => [nonzero(rng, 9, 4), nonzero(rng, 9, 4), z(), a10, a11],
        FormulaBranch::CaseIIDegenerate => {
            let (a20, a21) = (nonzero(rng, 9, 4), nonzero(rng, 9, 4));
            let a11 = &a10 * &a21 / &a20;
            [a20, a21, z(), a10, a11]
        }
        FormulaBranch::CaseIII => [nonzero(rng, 9, 4), z(), nonzero(rng, 9, 4), a10, a11],
        FormulaBranch::CaseIIIDegenerate => {
            let (s, u, v) = (nonzero(rng, 3, 2), nonzero(rng, 4, 2), nonzero(rng, 4, 2));
            let a20 = &s * &u * &u;
            let a22 = -(&s * &v * &v);
            let t = if a20.is_negative() {
                -(&u * &v).abs() * s.abs()
            } else {
                (&u * &v).abs() * s.abs()
            };
            let a11 = &a10 * &t / &a20;
            [a20, z(), a22, a10, a11]
        }
        FormulaBranch::CaseIV => [z(), z(), nonzero(rng, 9, 4), a10, a11],
        FormulaBranch::CaseV => [z(), nonzero(rng, 9, 4), z(), a10, a11],
        FormulaBranch::CaseVI => [nonzero(rng, 9, 4), z(), z(), a10, nonzero(rng, 9, 4)],
    }
}

/// Parameters whose closed form uses `branch` (checked at `n = 1`) with a
/// nonzero leading product up to `n_max`.
pub fn sample_branch<R: Rng>(branch: FormulaBranch, n_max: usize, rng: &mut R) -> EquationParams {
    for _ in 0..MAX_ATTEMPTS {
        let Some(p) = params(branch_candidate(branch, rng)) else {
            continue;
        };
        if !is_regular(&p, n_max) {
            continue;
        }
        if matches!(closed_form_exact(&p, 1), Ok(form) if form.branch == branch) {
            return p;
        }
    }
    unreachable!("branch sampler exhausted for {}", branch.label())
}

/// Weight families: one per printed weight/norm formula plus the three
/// general-case forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightFamily {
    CaseIRight,
    CaseILeft,
    CaseII,
    CaseIIIFinite,
    CaseIIIFiniteNegative,
    CaseIIIWholeLine,
    CaseIV,
    CaseV,
    CaseVI,
    GeneralTwoRoots,
    GeneralArctan,
    GeneralDoubleRoot,
}

impl WeightFamily {
    pub const ALL: [WeightFamily; 12] = [
        WeightFamily::CaseIRight,
        WeightFamily::CaseILeft,
        WeightFamily::CaseII,
        WeightFamily::CaseIIIFinite,
        WeightFamily::CaseIIIFiniteNegative,
        WeightFamily::CaseIIIWholeLine,
        WeightFamily::CaseIV,
        WeightFamily::CaseV,
        WeightFamily::CaseVI,
        WeightFamily::GeneralTwoRoots,
        WeightFamily::GeneralArctan,
        WeightFamily::GeneralDoubleRoot,
    ];

    pub fn label(self) -> &'static str {
        match self {
            WeightFamily::CaseIRight => "W1 (a21 > 0)",
            WeightFamily::CaseILeft => "W1 (a21 < 0)",
            WeightFamily::CaseII => "W2",
            WeightFamily::CaseIIIFinite => "W3^1",
            WeightFamily::CaseIIIFiniteNegative => "W3^2",
            WeightFamily::CaseIIIWholeLine => "W3^3",
            WeightFamily::CaseIV => "W4",
            WeightFamily::CaseV => "W5",
            WeightFamily::CaseVI => "W6",
            WeightFamily::GeneralTwoRoots => "W (two real roots)",
            WeightFamily::GeneralArctan => "W (complex roots)",
            WeightFamily::GeneralDoubleRoot => "W (double root)",
        }
    }

    pub fn case(self) -> CaseTag {
        match self {
            WeightFamily::CaseIRight | WeightFamily::CaseILeft => CaseTag::I,
            WeightFamily::CaseII => CaseTag::II,
            WeightFamily::CaseIIIFinite
            | WeightFamily::CaseIIIFiniteNegative
            | WeightFamily::CaseIIIWholeLine => CaseTag::III,
            WeightFamily::CaseIV => CaseTag::IV,
            WeightFamily::CaseV => CaseTag::V,
            WeightFamily::CaseVI => CaseTag::VI,
            _ => CaseTag::General,
        }
    }

    /// Whether a closed-form norm exists.
    pub fn has_norm(self) -> bool {
        self.case() != CaseTag::General
    }

    pub fn of(spec: &WeightSpec) -> WeightFamily {
        match spec.formula {
            WeightFormula::W1 { .. } if spec.hi.is_infinite() => WeightFamily::CaseIRight,
            WeightFormula::W1 { .. } => WeightFamily::CaseILeft,
            WeightFormula::W2 { .. } => WeightFamily::CaseII,
            WeightFormula::W31 { .. } => WeightFamily::CaseIIIFinite,
            WeightFormula::W32 { .. } => WeightFamily::CaseIIIFiniteNegative,
            WeightFormula::W33 { .. } => WeightFamily::CaseIIIWholeLine,
            WeightFormula::W4 { .. } => WeightFamily::CaseIV,
            WeightFormula::W5 { .. } => WeightFamily::CaseV,
            WeightFormula::W6 { .. } => WeightFamily::CaseVI,
            WeightFormula::TwoRoots { .. } => WeightFamily::GeneralTwoRoots,
            WeightFormula::Arctan { .. } => WeightFamily::GeneralArctan,
            WeightFormula::DoubleRoot { .. } => WeightFamily::GeneralDoubleRoot,
        }
    }
}

/// `a10 / a20` small enough for degree sums up to `2 n_max`.
fn tail_ratio<R: Rng>(rng: &mut R, n_max: usize) -> Rational {
    let bound = 1 - 2 * n_max as i64;
    Rational::integer(bound) - Rational::new(rng.gen_range(1..=24), 4)
}

fn weight_candidate<R: Rng>(family: WeightFamily, n_max: usize, rng: &mut R) -> [Rational; 5] {
    let z = Rational::zero;
    let two = Rational::integer(2);
    match family {
        WeightFamily::CaseIRight | WeightFamily::CaseILeft => {
            let a21 = if family == WeightFamily::CaseIRight {
                positive(rng, 6, 2)
            } else {
                negative(rng, 6, 2)
            };
            let a22 = if family == WeightFamily::CaseIRight {
                nonzero(rng, 6, 2)
            } else {
                positive(rng, 6, 2)
            };
            let a10 = negative(rng, 6, 2);
            let mu = positive(rng, 8, 2);
            let a11 = (&mu * &a21 * &a21 + &a22 * &a10) / &a21;
            [z(), a21, a22, a10, a11]
        }
        WeightFamily::CaseII => {
            let (a20, a21, a10) = (
                negative(rng, 6, 2),
                positive(rng, 6, 2),
                negative(rng, 9, 2),
            );
            let a11 = fraction(rng) * &a10 * &a21 / &a20;
            [a20, a21, z(), a10, a11]
        }
        WeightFamily::CaseIIIFinite | WeightFamily::CaseIIIFiniteNegative => {
            let (u, v) = (positive(rng, 4, 2), positive(rng, 4, 2));
            let s = positive(rng, 3, 2);
            let sign = if family == WeightFamily::CaseIIIFinite {
                Rational::one()
            } else {
                -Rational::one()
            };
            let a20 = &sign * &s * &u * &u;
            let a22 = -(&sign * &s * &v * &v);
            let a10 = &sign * &positive(rng, 9, 2);
            let t = fraction(rng);
            let a11 = signed(rng, t) * a10.abs() * &v / &u;
            [a20, z(), a22, a10, a11]
        }
        WeightFamily::CaseIIIWholeLine => {
            let a20 = positive(rng, 4, 2);
            let a10 = &a20 * &tail_ratio(rng, n_max);
            [a20, z(), positive(rng, 4, 2), a10, rational(rng, 6, 2)]
        }
        WeightFamily::CaseIV => [
            z(),
            z(),
            positive(rng, 4, 2),
            negative(rng, 4, 2),
            rational(rng, 4, 2),
        ],
        WeightFamily::CaseV => [
            z(),
            positive(rng, 4, 2),
            z(),
            negative(rng, 4, 2),
            positive(rng, 8, 2),
        ],
        WeightFamily::CaseVI => {
            let a20 = positive(rng, 4, 2);
            let a10 = &a20 * &tail_ratio(rng, n_max);
            [a20, z(), z(), a10, positive(rng, 6, 2)]
        }
        WeightFamily::GeneralTwoRoots => {
            let r1 = nonzero(rng, 6, 2);
            let r2 = &r1 + &positive(rng, 8, 2);
            let a20 = nonzero(rng, 3, 2);
            let (e1, e2) = (positive(rng, 8, 2), positive(rng, 8, 2));
            let p1_r1 = &e1 * &a20 * (&r1 - &r2);
            let p1_r2 = &e2 * &a20 * (&r2 - &r1);
            let a10 = (&p1_r2 - &p1_r1) / (&r2 - &r1);
            let a11 = &p1_r1 - &(&a10 * &r1);
            [
                a20.clone(),
                -(&a20 * &(&r1 + &r2)),
                &a20 * &r1 * &r2,
                a10,
                a11,
            ]
        }
        WeightFamily::GeneralArctan | WeightFamily::GeneralDoubleRoot => {
            let a20 = positive(rng, 3, 2);
            let c = nonzero(rng, 4, 2);
            let w2 = if family == WeightFamily::GeneralArctan {
                positive(rng, 4, 2)
            } else {
                z()
            };
            let a10 = &a20 * &tail_ratio(rng, n_max);
            let a21 = -(&two * &a20 * &c);
            let a22 = &a20 * &(&c * &c + &w2);
            [a20, a21, a22, a10, rational(rng, 6, 2)]
        }
    }
}

/// Parameters whose Pearson weight belongs to `family`, satisfies its
/// constraints and integrates products up to degree `2 n_max`.
pub fn sample_weight<R: Rng>(
    family: WeightFamily,
    n_max: usize,
    rng: &mut R,
) -> (EquationParams, WeightSpec) {
    for _ in 0..MAX_ATTEMPTS {
        let Some(p) = params(weight_candidate(family, n_max, rng)) else {
            continue;
        };
        if !is_regular(&p, n_max) {
            continue;
        }
        let Ok(spec) = pearson_weight(&p) else {
            continue;
        };
        if WeightFamily::of(&spec) != family
            || !spec.satisfied()
            || spec.check_degrees(n_max, n_max).is_err()
        {
            continue;
        }
        if family.has_norm() && (0..=n_max).any(|n| norm_closed_form(&p, n).is_err()) {
            continue;
        }
        return (p, spec);
    }
    unreachable!("weight sampler exhausted for {}", family.label())
}

/// Polynomial of degree at most `max_degree`.
pub fn sample_q<R: Rng>(max_degree: usize, rng: &mut R) -> Polynomial {
    let degree = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=degree).map(|_| rational(rng, 6, 3)).collect())
}

/// Real roots of `p2` as floats.
pub fn p2_real_roots(p: &EquationParams) -> Vec<f64> {
    let [a20, a21, a22, ..] = p.to_f64();
    if a20 == 0.0 {
        return if a21 == 0.0 {
            Vec::new()
        } else {
            vec![-a22 / a21]
        };
    }
    let disc = a21 * a21 - 4.0 * a20 * a22;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    vec![(-a21 - s) / (2.0 * a20), (-a21 + s) / (2.0 * a20)]
}

/// `count` points in `[-span, span]` at distance at least `gap` from the real
/// roots of `p2`, rounded to multiples of `1/64`.
pub fn generic_points<R: Rng>(
    p: &EquationParams,
    count: usize,
    span: f64,
    gap: f64,
    rng: &mut R,
) -> Vec<f64> {
    let roots = p2_real_roots(p);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = (rng.gen_range(-span..span) * 64.0).round() / 64.0;
        if roots.iter().all(|r| (x - r).abs() >= gap) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Points where evaluating `poly` loses at most a factor `1/ratio` to
/// cancellation: `|poly(x)| >= ratio * sum |c_k| |x|^k`.
pub fn well_conditioned_points<R: Rng>(
    poly: &Polynomial,
    count: usize,
    span: f64,
    ratio: f64,
    rng: &mut R,
) -> Vec<f64> {
    let c = poly.to_f64();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        let x = (rng.gen_range(-span..span) * 64.0).round() / 64.0;
        let value = poly.eval_f64(x).abs();
        let magnitude: f64 = c.iter().rev().fold(0.0, |acc, v| acc * x.abs() + v.abs());
        if (value >= ratio * magnitude || attempts > 10_000) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
