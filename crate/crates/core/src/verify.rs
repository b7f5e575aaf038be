//! Seeded randomized suites exercising every module invariant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aim::{delta_factorization_check, DEFAULT_CAP};
use crate::algebra::{Polynomial, Rational};
use crate::catalog::proportionality;
use crate::error::Result;
use crate::hyper::{closed_form_value, FormulaBranch};
use crate::ode::{eigenvalue, kernel_at, series_solve, CaseTag, EquationParams};
use crate::quadrature::QuadConfig;
use crate::recurrence::{generate, solve};
use crate::sampling::{
    generic_points, is_regular, sample_branch, sample_case, sample_params, sample_q, sample_weight,
    well_conditioned_points, WeightFamily,
};
use crate::solvable::{build_class, verify_class};
use crate::weights::{orthogonality, pearson_check};

pub const CLOSED_FORM_TOL: f64 = 1e-9;
pub const DIAGONAL_TOL: f64 = 1e-6;
pub const OFF_DIAGONAL_TOL: f64 = 1e-7;
pub const PEARSON_TOL: f64 = 1e-8;
pub const THEOREM2_TOL: f64 = 1e-8;

/// Suites in run order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    OracleEquivalence,
    ClosedForm,
    Orthogonality,
    Pearson,
    Aim,
    Theorem2,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::OracleEquivalence,
        Suite::ClosedForm,
        Suite::Orthogonality,
        Suite::Pearson,
        Suite::Aim,
        Suite::Theorem2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::ClosedForm => "closed-form",
            Suite::Orthogonality => "orthogonality",
            Suite::Pearson => "pearson",
            Suite::Aim => "aim",
            Suite::Theorem2 => "theorem2",
        }
    }

    fn seed_offset(self) -> u64 {
        self as u64 + 1
    }
}

/// Case tag whose parameters select `branch`.
pub fn branch_case(branch: FormulaBranch) -> CaseTag {
    match branch {
        FormulaBranch::General | FormulaBranch::DoubleRoot => CaseTag::General,
        FormulaBranch::CaseI | FormulaBranch::CaseIDegenerate => CaseTag::I,
        FormulaBranch::CaseII | FormulaBranch::CaseIIDegenerate => CaseTag::II,
        FormulaBranch::CaseIII | FormulaBranch::CaseIIIDegenerate => CaseTag::III,
        FormulaBranch::CaseIV => CaseTag::IV,
        FormulaBranch::CaseV => CaseTag::V,
        FormulaBranch::CaseVI => CaseTag::VI,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub case: Option<CaseTag>,
    pub trials: usize,
    pub n_max: usize,
    pub seed: u64,
    pub quad: QuadConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            case: None,
            trials: 10,
            n_max: 4,
            seed: 0,
            quad: QuadConfig::default(),
        }
    }
}

/// Everything needed to reproduce one failing trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialFailure {
    pub suite: Suite,
    pub trial: usize,
    pub seed: u64,
    pub params: EquationParams,
    pub n: usize,
    pub m: Option<usize>,
    pub label: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub checks: usize,
    /// Largest float error seen; `None` for exact suites.
    pub max_error: Option<f64>,
    pub failures: Vec<TrialFailure>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            trials: 0,
            checks: 0,
            max_error: None,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record_error(&mut self, e: f64) {
        self.max_error = Some(self.max_error.map_or(e, |m: f64| m.max(e)));
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn first_failure(&self) -> Option<&TrialFailure> {
        self.suites.iter().flat_map(|s| s.failures.iter()).next()
    }
}

struct Ctx<'a> {
    opts: &'a VerifyOptions,
    report: SuiteReport,
    trial: usize,
}

impl Ctx<'_> {
    fn fail(
        &mut self,
        params: &EquationParams,
        n: usize,
        m: Option<usize>,
        label: &str,
        detail: String,
    ) {
        self.report.failures.push(TrialFailure {
            suite: self.report.suite,
            trial: self.trial,
            seed: self.opts.seed,
            params: params.clone(),
            n,
            m,
            label: label.to_string(),
            detail,
        });
    }
}

fn rng_for(opts: &VerifyOptions, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        opts.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(suite.seed_offset()),
    )
}

fn pick<T: Copy, R: Rng>(items: &[T], rng: &mut R) -> T {
    items[rng.gen_range(0..items.len())]
}

fn run_suite(
    opts: &VerifyOptions,
    suite: Suite,
    body: impl Fn(&mut Ctx, &mut ChaCha8Rng),
) -> SuiteReport {
    let mut rng = rng_for(opts, suite);
    let mut ctx = Ctx {
        opts,
        report: SuiteReport::new(suite),
        trial: 0,
    };
    for trial in 0..opts.trials {
        ctx.trial = trial;
        ctx.report.trials += 1;
        body(&mut ctx, &mut rng);
    }
    ctx.report
}

/// Checks the series oracle against the recurrence at one parameter set:
/// a kernel exists at the eigenvalue, none at a non-eigenvalue, and the two
/// solutions agree (exactly when regular, up to a ratio otherwise).
pub fn oracle_check<R: Rng>(
    params: &EquationParams,
    n: usize,
    rng: &mut R,
) -> std::result::Result<(), String> {
    let kernel = series_solve(params, n).map_err(|e| format!("oracle: {e}"))?;
    let spectrum: Vec<Rational> = (0..=n).map(|k| eigenvalue(params, k)).collect();
    let outside = loop {
        let t = Rational::new(rng.gen_range(-500..=500), rng.gen_range(1..=7));
        if !spectrum.contains(&t) {
            break t;
        }
    };
    if !kernel_at(params, &outside, n).is_empty() {
        return Err(format!("nonzero kernel at non-eigenvalue tau = {outside}"));
    }
    if is_regular(params, n) {
        let ys = generate(params, n).map_err(|e| format!("recurrence: {e}"))?;
        match kernel.unique() {
            Some(y) if y == &ys[n] => Ok(()),
            Some(y) => Err(format!("recurrence {} != oracle {}", ys[n], y)),
            None => Err(format!("kernel dimension {}", kernel.dimension())),
        }
    } else {
        match solve(params, n, true) {
            Ok(report) if kernel.dimension() == 1 => {
                let y = kernel.unique().expect("one-dimensional");
                proportionality(&report.polynomial, y)
                    .map(|_| ())
                    .map_err(|i| format!("fallback solution not proportional at index {i}"))
            }
            Ok(_) => Err("solve succeeded on a degenerate spectrum".into()),
            Err(_) if kernel.dimension() > 1 => Ok(()),
            Err(e) => Err(format!("solve: {e}")),
        }
    }
}

fn oracle_suite(opts: &VerifyOptions) -> SuiteReport {
    run_suite(opts, Suite::OracleEquivalence, |ctx, rng| {
        let params = match ctx.opts.case {
            Some(case) => sample_case(case, 0, rng),
            None => sample_params(rng),
        };
        for n in 0..=ctx.opts.n_max {
            ctx.report.checks += 1;
            if let Err(detail) = oracle_check(&params, n, rng) {
                ctx.fail(&params, n, None, "oracle", detail);
            }
        }
    })
}

/// Largest relative deviation of the closed form from `y` at `points`.
pub fn closed_form_error(
    params: &EquationParams,
    n: usize,
    y: &Polynomial,
    points: &[f64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in points {
        let exact = y.eval_f64(x);
        let value = closed_form_value(params, n, x)?;
        worst = worst.max((value - exact).abs() / exact.abs());
    }
    Ok(worst)
}

fn closed_form_suite(opts: &VerifyOptions) -> SuiteReport {
    let branches: Vec<FormulaBranch> = FormulaBranch::ALL
        .into_iter()
        .filter(|b| opts.case.is_none_or(|c| branch_case(*b) == c))
        .collect();
    run_suite(opts, Suite::ClosedForm, |ctx, rng| {
        let branch = pick(&branches, rng);
        let params = sample_branch(branch, ctx.opts.n_max, rng);
        let ys = match generate(&params, ctx.opts.n_max) {
            Ok(ys) => ys,
            Err(e) => return ctx.fail(&params, 0, None, branch.label(), e.to_string()),
        };
        for (n, y) in ys.iter().enumerate() {
            ctx.report.checks += 1;
            let points = well_conditioned_points(y, 5, 2.0, 1e-3, rng);
            match closed_form_error(&params, n, y, &points) {
                Ok(e) => {
                    ctx.report.record_error(e);
                    if e.is_nan() || e > CLOSED_FORM_TOL {
                        ctx.fail(
                            &params,
                            n,
                            None,
                            branch.label(),
                            format!("relative error {e:e} at {points:?}"),
                        );
                    }
                }
                Err(e) => ctx.fail(&params, n, None, branch.label(), e.to_string()),
            }
        }
    })
}

fn families(opts: &VerifyOptions, with_norm: bool) -> Vec<WeightFamily> {
    WeightFamily::ALL
        .into_iter()
        .filter(|f| !with_norm || f.has_norm())
        .filter(|f| opts.case.is_none_or(|c| f.case() == c))
        .collect()
}

/// Orthogonality errors over `n, m <= n_max` for one parameter set:
/// `(n, m, error, tolerance)` rows.
pub fn orthogonality_grid(
    params: &EquationParams,
    n_max: usize,
    quad: &QuadConfig,
) -> Result<Vec<(usize, usize, f64, f64)>> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for m in n..=n_max {
            let r = orthogonality(params, n, m, quad)?;
            let tol = if n == m {
                DIAGONAL_TOL
            } else {
                OFF_DIAGONAL_TOL
            };
            rows.push((n, m, r.rel_err, tol));
        }
    }
    Ok(rows)
}

fn orthogonality_suite(opts: &VerifyOptions) -> SuiteReport {
    let fams = families(opts, true);
    let n_max = opts.n_max.min(4);
    run_suite(opts, Suite::Orthogonality, |ctx, rng| {
        if fams.is_empty() {
            return;
        }
        let family = pick(&fams, rng);
        let (params, _) = sample_weight(family, n_max, rng);
        match orthogonality_grid(&params, n_max, &ctx.opts.quad) {
            Ok(rows) => {
                for (n, m, e, tol) in rows {
                    ctx.report.checks += 1;
                    ctx.report.record_error(e);
                    if e.is_nan() || e > tol {
                        ctx.fail(
                            &params,
                            n,
                            Some(m),
                            family.label(),
                            format!("error {e:e} exceeds {tol:e}"),
                        );
                    }
                }
            }
            Err(e) => ctx.fail(&params, 0, None, family.label(), e.to_string()),
        }
    })
}

fn pearson_suite(opts: &VerifyOptions) -> SuiteReport {
    let fams = families(opts, false);
    run_suite(opts, Suite::Pearson, |ctx, rng| {
        let family = pick(&fams, rng);
        let (params, spec) = sample_weight(family, ctx.opts.n_max.min(4), rng);
        let points = spec.random_interior_points(20, rng);
        ctx.report.checks += 1;
        let e = pearson_check(&params, &spec, &points);
        let positive = points.iter().all(|&x| spec.eval(x) > 0.0);
        ctx.report.record_error(e);
        if e.is_nan() || e > PEARSON_TOL || !positive {
            ctx.fail(
                &params,
                0,
                None,
                family.label(),
                format!("pearson residual {e:e}, positive weight {positive}"),
            );
        }
    })
}

fn aim_suite(opts: &VerifyOptions) -> SuiteReport {
    let n_max = opts.n_max.min(DEFAULT_CAP);
    run_suite(opts, Suite::Aim, |ctx, rng| {
        let case = ctx.opts.case.unwrap_or_else(|| pick(&CaseTag::ALL, rng));
        let params = sample_case(case, 0, rng);
        for n in 0..=n_max {
            ctx.report.checks += 1;
            match delta_factorization_check(&params, n, 10, DEFAULT_CAP, rng) {
                Ok(r) if r.passed() => {}
                Ok(r) => ctx.fail(&params, n, None, "aim", format!("{r:?}")),
                Err(e) => ctx.fail(&params, n, None, "aim", e.to_string()),
            }
        }
    })
}

fn theorem2_suite(opts: &VerifyOptions) -> SuiteReport {
    run_suite(opts, Suite::Theorem2, |ctx, rng| {
        let case = ctx.opts.case.unwrap_or_else(|| pick(&CaseTag::ALL, rng));
        let params = sample_case(case, ctx.opts.n_max, rng);
        let q = sample_q(4, rng);
        let n = rng.gen_range(0..=ctx.opts.n_max);
        let points = generic_points(&params, 5, 2.0, 0.25, rng);
        ctx.report.checks += 1;
        match build_class(&params, &q, n).and_then(|spec| verify_class(&spec, &points)) {
            Ok(e) => {
                ctx.report.record_error(e);
                if e.is_nan() || e > THEOREM2_TOL {
                    ctx.fail(
                        &params,
                        n,
                        None,
                        "theorem2",
                        format!("Q = {q}, residual {e:e} at {points:?}"),
                    );
                }
            }
            Err(e) => ctx.fail(&params, n, None, "theorem2", format!("Q = {q}: {e}")),
        }
    })
}

pub fn run_suite_by_name(opts: &VerifyOptions, suite: Suite) -> SuiteReport {
    match suite {
        Suite::OracleEquivalence => oracle_suite(opts),
        Suite::ClosedForm => closed_form_suite(opts),
        Suite::Orthogonality => orthogonality_suite(opts),
        Suite::Pearson => pearson_suite(opts),
        Suite::Aim => aim_suite(opts),
        Suite::Theorem2 => theorem2_suite(opts),
    }
}

/// Runs every suite with the options' seed.
pub fn run_all(opts: &VerifyOptions) -> VerifyReport {
    let suites = Suite::ALL
        .into_iter()
        .map(|s| run_suite_by_name(opts, s))
        .collect();
    VerifyReport {
        options: opts.clone(),
        suites,
    }
}
