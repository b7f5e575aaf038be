//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyode::aim::{delta_factorization_check, DEFAULT_CAP};
use polyode::algebra::{Polynomial, RationalFunction};
use polyode::catalog::{cross_validate, lookup, ClassicalName, ReferenceKind};
use polyode::hyper::FormulaBranch;
use polyode::ode::CaseTag;
use polyode::quadrature::QuadConfig;
use polyode::recurrence::generate;
use polyode::sampling::{
    generic_points, sample_branch, sample_case, sample_params, sample_q, sample_weight,
    well_conditioned_points, WeightFamily,
};
use polyode::solvable::{build_class, verify_class};
use polyode::verify::{
    closed_form_error, oracle_check, orthogonality_grid, CLOSED_FORM_TOL, DIAGONAL_TOL,
    OFF_DIAGONAL_TOL, PEARSON_TOL, THEOREM2_TOL,
};
use polyode::weights::pearson_check;

use common::{poly_q, printed_table, trim};

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            summary: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn eigenvalue_condition() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    let mut checks = 0;
    for _ in 0..1000 {
        let p = sample_params(&mut rng);
        for n in 0..=8 {
            checks += 1;
            let result = oracle_check(&p, n, &mut rng);
            out.check(result.is_ok(), || {
                format!("{p:?} n={n}: {}", result.unwrap_err())
            });
        }
    }
    let elapsed = start.elapsed();
    out.check(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    });
    out.summary = format!(
        "1000 parameter sets, {checks} (set, n) checks in {:.2} s",
        elapsed.as_secs_f64()
    );
    out
}

fn coefficient_tables() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let cases = [
        CaseTag::I,
        CaseTag::II,
        CaseTag::III,
        CaseTag::IV,
        CaseTag::V,
        CaseTag::VI,
    ];
    for case in cases {
        for _ in 0..50 {
            let p = sample_case(case, 4, &mut rng);
            let table = printed_table(case, &p).expect("special case");
            let ys = generate(&p, 4).expect("regular parameters");
            for (n, (y, printed)) in ys.iter().zip(table).enumerate() {
                out.check(poly_q(y) == trim(printed.clone()), || {
                    format!("case {case:?} {p:?} n={n}: {y} vs {printed:?}")
                });
            }
        }
    }
    out.summary = "6 cases x 50 instances, n <= 4, exact".into();
    out
}

fn closed_form_agreement() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst: f64 = 0.0;
    for branch in FormulaBranch::ALL {
        for _ in 0..100 {
            let p = sample_branch(branch, 6, &mut rng);
            let ys = generate(&p, 6).expect("regular parameters");
            for (n, y) in ys.iter().enumerate() {
                let points = well_conditioned_points(y, 5, 2.0, 1e-3, &mut rng);
                match closed_form_error(&p, n, y, &points) {
                    Ok(e) => {
                        worst = worst.max(e);
                        out.check(e <= CLOSED_FORM_TOL, || {
                            format!("{} {p:?} n={n}: {e:e}", branch.label())
                        });
                    }
                    Err(e) => out.check(false, || format!("{} {p:?} n={n}: {e}", branch.label())),
                }
            }
        }
    }
    out.summary = format!("11 branches x 100 sets, n <= 6, 5 points, max rel err {worst:.2e}");
    out
}

fn orthogonality_criterion() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let quad = QuadConfig::from_env();
    let start = Instant::now();
    let mut details = Vec::new();
    for family in WeightFamily::ALL.into_iter().filter(|f| f.has_norm()) {
        let mut diag: f64 = 0.0;
        let mut off: f64 = 0.0;
        for _ in 0..10 {
            let (p, _) = sample_weight(family, 4, &mut rng);
            match orthogonality_grid(&p, 4, &quad) {
                Ok(rows) => {
                    for (n, m, e, tol) in rows {
                        if n == m {
                            diag = diag.max(e);
                        } else {
                            off = off.max(e);
                        }
                        out.check(e <= tol, || {
                            format!("{} {p:?} ({n},{m}): {e:e}", family.label())
                        });
                    }
                }
                Err(e) => out.check(false, || format!("{} {p:?}: {e}", family.label())),
            }
        }
        details.push(format!("{} {diag:.1e}/{off:.1e}", family.label()));
    }
    let elapsed = start.elapsed();
    out.check(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    });
    out.summary = format!(
        "10 sets per norm formula, n,m <= 4, diag tol {DIAGONAL_TOL:e}, off tol {OFF_DIAGONAL_TOL:e} x geometric-mean norm, {:.1} s; max diag/off: {}",
        elapsed.as_secs_f64(),
        details.join(", ")
    );
    out
}

fn classical_cross_check() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for name in ClassicalName::ALL {
        let args: BTreeMap<String, _> = name
            .required_args()
            .iter()
            .map(|k| (k.to_string(), polyode::sampling::nonzero(&mut rng, 9, 4)))
            .collect();
        match lookup(name.as_str(), &args) {
            Ok(entry) => out.check(entry.case == name.case(), || {
                format!("{name}: {:?}", entry.case)
            }),
            Err(e) => out.check(false, || format!("{name}: {e}")),
        }
    }
    let q = polyode::algebra::q;
    let rows: Vec<(&str, Vec<(&str, _)>)> = vec![
        ("legendre", vec![]),
        ("chebyshev1", vec![]),
        ("chebyshev2", vec![]),
        ("hermite", vec![]),
        ("laguerre", vec![("alpha", q(0, 1))]),
        ("laguerre", vec![("alpha", q(3, 2))]),
        ("gegenbauer", vec![("k", q(1, 2))]),
        ("bessel", vec![("alpha", q(0, 1)), ("beta", q(2, 1))]),
    ];
    for (name, args) in rows {
        let args: BTreeMap<String, _> = args.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        match cross_validate(name, &args, 6) {
            Ok(report) => {
                let textbook = report
                    .rows
                    .iter()
                    .all(|r| r.reference_kind == ReferenceKind::Textbook);
                out.check(textbook && report.rows.len() == 7, || {
                    format!("{name}: reference was not textbook")
                });
            }
            Err(e) => out.check(false, || format!("{name}: {e}")),
        }
    }
    out.summary = "11 rows classify; 7 textbook families exactly proportional for n <= 6".into();
    out
}

fn aim_factorization() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for trial in 0..20 {
        let case = CaseTag::ALL[trial % CaseTag::ALL.len()];
        let p = sample_case(case, 0, &mut rng);
        for n in 0..=5 {
            match delta_factorization_check(&p, n, 10, DEFAULT_CAP, &mut rng) {
                Ok(r) => out.check(r.passed(), || format!("{p:?} n={n}: {r:?}")),
                Err(e) => out.check(false, || format!("{p:?} n={n}: {e}")),
            }
        }
    }
    out.summary = "20 sets, n <= 5, 10 outside points each, exact".into();
    out
}

fn theorem2() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let case = CaseTag::ALL[trial % CaseTag::ALL.len()];
        let p = sample_case(case, 4, &mut rng);
        let q = sample_q(4, &mut rng);
        let n = rng.gen_range(0..=4);
        let points = generic_points(&p, 5, 2.0, 0.25, &mut rng);
        match build_class(&p, &q, n).and_then(|spec| verify_class(&spec, &points)) {
            Ok(e) => {
                worst = worst.max(e);
                out.check(e <= THEOREM2_TOL, || format!("{p:?} Q={q} n={n}: {e:e}"));
            }
            Err(e) => out.check(false, || format!("{p:?} Q={q} n={n}: {e}")),
        }
        match build_class(&p, &p.p1(), n) {
            Ok(spec) => {
                let tau = RationalFunction::new(Polynomial::constant(spec.tau.clone()), p.p2())
                    .expect("p2 nonzero");
                let p_coeff = RationalFunction::new(p.p1(), p.p2()).expect("p2 nonzero");
                let exact = spec.phase_integrand.is_zero()
                    && spec.potential == tau
                    && spec.p_coeff == p_coeff;
                out.check(exact, || {
                    format!("{p:?} n={n}: Q = p1 does not reduce exactly")
                });
            }
            Err(e) => out.check(false, || format!("{p:?} n={n}: {e}")),
        }
    }
    out.summary = format!(
        "50 (params, Q, n) draws, 5 points, max residual {worst:.2e}; Q = p1 reduces exactly"
    );
    out
}

fn pearson_property() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst: f64 = 0.0;
    for family in WeightFamily::ALL {
        for _ in 0..20 {
            let (p, spec) = sample_weight(family, 4, &mut rng);
            let points = spec.random_interior_points(20, &mut rng);
            let e = pearson_check(&p, &spec, &points);
            worst = worst.max(e);
            out.check(e <= PEARSON_TOL, || {
                format!("{} {p:?}: {e:e}", family.label())
            });
        }
    }
    out.summary =
        format!("12 weight formulas x 20 sets, 20 interior points, max rel residual {worst:.2e}");
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("eigenvalue condition", eigenvalue_condition),
        ("printed coefficient tables", coefficient_tables),
        ("closed-form agreement", closed_form_agreement),
        ("orthogonality", orthogonality_criterion),
        ("classical cross-check", classical_cross_check),
        ("AIM factorization", aim_factorization),
        ("solvable classes", theorem2),
        ("Pearson property", pearson_property),
    ];
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let ok = outcome.failures.is_empty();
        all_ok &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {status} ({})", i + 1, outcome.summary);
        for f in outcome.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
