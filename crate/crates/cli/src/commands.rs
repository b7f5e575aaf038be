//! Subcommand implementations. Each fills the document and reports whether
//! its checks passed; library errors propagate to the exit-code mapping.

use std::collections::BTreeMap;

use polyode::aim::delta_factorization_check;
use polyode::algebra::{Polynomial, Rational};
use polyode::catalog::{cross_validate, lookup, proportionality, ClassicalName};
use polyode::hyper::{closed_form_exact, closed_form_polynomial};
use polyode::ode::{classify, eigenvalue, CaseTag, EquationParams};
use polyode::quadrature::QuadConfig;
use polyode::recurrence::{solve, solve_oracle};
use polyode::sampling::generic_points;
use polyode::solvable::{build_class, verify_class, Phase};
use polyode::verify::{
    run_all, run_suite_by_name, Suite, VerifyOptions, VerifyReport, DIAGONAL_TOL, OFF_DIAGONAL_TOL,
    PEARSON_TOL, THEOREM2_TOL,
};
use polyode::weights::{inner_product, norm_closed_form, pearson_check, pearson_weight};
use polyode::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::output::{self, csv_rows, float, floats, latex_rows, poly, rat, ratfun, OutputDocument};

/// Whether the command's own checks passed, plus any non-JSON rendering.
pub struct Outcome {
    pub passed: bool,
    pub text: Option<String>,
}

impl Outcome {
    fn checked(passed: bool) -> Self {
        Outcome { passed, text: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Recurrence,
    Closed,
    Oracle,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

pub fn solve_cmd(
    p: &EquationParams,
    n: usize,
    method: Method,
    format: Format,
    allow_fallback: bool,
    doc: &mut OutputDocument,
) -> Result<Outcome> {
    let all = method == Method::All;
    let mut methods = Map::new();
    let mut found: Vec<(String, Polynomial)> = Vec::new();
    if all || method == Method::Recurrence {
        let report = solve(p, n, allow_fallback)?;
        doc.diagnostics.extend(report.diagnostics.iter().cloned());
        methods.insert(
            "recurrence".into(),
            json!({
                "coefficients": poly(&report.polynomial),
                "engine": report.method.label(),
                "monic": report.monic,
                "residual_zero": report.residual_ok,
            }),
        );
        found.push(("recurrence".into(), report.polynomial));
    }
    if all || method == Method::Closed {
        match closed_form_exact(p, n)
            .and_then(|form| Ok((form.branch, closed_form_polynomial(p, n)?)))
        {
            Ok((branch, y)) => {
                methods.insert(
                    "closed".into(),
                    json!({"branch": branch.label(), "coefficients": poly(&y)}),
                );
                found.push(("closed".into(), y));
            }
            Err(e) if all => {
                doc.diagnostics
                    .push(format!("closed form unavailable: {e}"));
                methods.insert("closed".into(), json!({"error": e.to_string()}));
            }
            Err(e) => return Err(e),
        }
    }
    if all || method == Method::Oracle {
        match solve_oracle(p, n) {
            Ok(report) => {
                doc.diagnostics.extend(report.diagnostics.iter().cloned());
                methods.insert(
                    "oracle".into(),
                    json!({
                        "coefficients": poly(&report.polynomial),
                        "engine": report.method.label(),
                        "monic": report.monic,
                        "residual_zero": report.residual_ok,
                    }),
                );
                found.push(("oracle".into(), report.polynomial));
            }
            Err(e) if all => {
                doc.diagnostics
                    .push(format!("series oracle unavailable: {e}"));
                methods.insert("oracle".into(), json!({"error": e.to_string()}));
            }
            Err(e) => return Err(e),
        }
    }
    let equal = found.windows(2).all(|w| w[0].1 == w[1].1);
    let proportional = found
        .iter()
        .all(|(_, y)| proportionality(y, &found[0].1).is_ok());
    doc.results = json!({
        "n": n,
        "tau": rat(&eigenvalue(p, n)),
        "case": classify(p).label(),
        "leading_product": rat(&p.leading_coefficient(n)),
        "methods": methods,
        "agreement": {"equal": equal, "proportional": proportional, "compared": found.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>()},
    });
    let text = match format {
        Format::Json => None,
        Format::Csv => Some(csv_rows(n, &found)),
        Format::Latex => Some(latex_rows(n, &found)),
    };
    Ok(Outcome {
        passed: proportional,
        text,
    })
}

pub fn classify_cmd(p: &EquationParams, n: usize, doc: &mut OutputDocument) -> Result<Outcome> {
    let branch = match closed_form_exact(p, n) {
        Ok(form) => Value::String(form.branch.label().into()),
        Err(e) => {
            doc.diagnostics
                .push(format!("closed form unavailable at n = {n}: {e}"));
            Value::Null
        }
    };
    let weight = match pearson_weight(p) {
        Ok(spec) => Value::String(spec.formula.label().into()),
        Err(e) => {
            doc.diagnostics.push(format!("no weight: {e}"));
            Value::Null
        }
    };
    doc.results = json!({
        "case": classify(p).label(),
        "discriminant": rat(&p.discriminant()),
        "p2": poly(&p.p2()),
        "p1": poly(&p.p1()),
        "closed_form_branch": branch,
        "weight_formula": weight,
    });
    Ok(Outcome::checked(true))
}

fn bound(x: f64) -> Value {
    if x.is_finite() {
        float(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn weight_cmd(
    p: &EquationParams,
    n_max: usize,
    quad: &QuadConfig,
    doc: &mut OutputDocument,
) -> Result<Outcome> {
    let spec = pearson_weight(p)?;
    let points = spec.interior_points(20);
    let pearson = pearson_check(p, &spec, &points);
    let constraints: Vec<Value> = spec
        .constraints
        .iter()
        .map(|c| json!({"description": c.description, "satisfied": c.satisfied}))
        .collect();
    for c in spec.constraints.iter().filter(|c| !c.satisfied) {
        doc.diagnostics
            .push(format!("constraint violated: {}", c.description));
    }
    let mut results = json!({
        "case": spec.case.label(),
        "formula": spec.formula.label(),
        "expression": spec.formula.describe(),
        "support": [bound(spec.lo), bound(spec.hi)],
        "constraints": constraints,
        "pearson_residual": float(pearson),
        "pearson_tolerance": float(PEARSON_TOL),
    });
    doc.results = results.clone();
    spec.check()?;

    let mut gram: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut norms: Vec<Option<f64>> = Vec::new();
    let mut top = n_max;
    for n in 0..=n_max {
        if let Err(e) = spec.check_degrees(n, n) {
            doc.diagnostics.push(format!(
                "degrees above {} skipped: {e}",
                n.saturating_sub(1)
            ));
            top = n.saturating_sub(1);
            if n == 0 {
                return Err(e);
            }
            break;
        }
        norms.push(match norm_closed_form(p, n) {
            Ok(v) => Some(v),
            Err(Error::UnsupportedBranch(_)) => None,
            Err(e) => return Err(e),
        });
    }
    for n in 0..=top {
        for m in n..=top {
            gram.insert((n, m), inner_product(p, n, m, &spec, quad)?);
        }
    }
    let mut rows = Vec::new();
    let mut passed = pearson <= PEARSON_TOL;
    for (&(n, m), &numeric) in &gram {
        let norm_of = |k: usize| norms[k].unwrap_or(gram[&(k, k)]);
        let (closed, err, tol) = if n == m {
            match norms[n] {
                Some(v) => (float(v), Some((numeric - v).abs() / v.abs()), DIAGONAL_TOL),
                None => (Value::Null, None, DIAGONAL_TOL),
            }
        } else {
            (
                float(0.0),
                Some(numeric.abs() / (norm_of(n) * norm_of(m)).abs().sqrt()),
                OFF_DIAGONAL_TOL,
            )
        };
        let ok = err.is_none_or(|e| e <= tol);
        passed &= ok;
        rows.push(json!({
            "n": n,
            "m": m,
            "numeric": float(numeric),
            "closed_form": closed,
            "rel_err": err.map_or(Value::Null, float),
            "tolerance": float(tol),
            "passed": ok,
        }));
    }
    if norms.iter().any(Option::is_none) {
        doc.diagnostics
            .push("no closed-form norm for this weight; diagonal entries are numeric only".into());
    }
    results["inner_products"] = Value::Array(rows);
    results["passed"] = json!(passed);
    doc.results = results;
    Ok(Outcome::checked(passed))
}

pub fn aim_cmd(
    p: &EquationParams,
    n_max: usize,
    samples: usize,
    cap: usize,
    seed: u64,
    doc: &mut OutputDocument,
) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut passed = true;
    let mut zero_set = Vec::new();
    for n in 0..=n_max {
        let r = delta_factorization_check(p, n, samples, cap, &mut rng)?;
        passed &= r.passed();
        let list = |v: &[Rational]| Value::Array(v.iter().map(rat).collect());
        rows.push(json!({
            "n": n,
            "eigenvalues": list(&r.eigenvalues),
            "zeros": list(&r.zeros),
            "outside": list(&r.outside),
            "spurious": list(&r.spurious),
            "factorization": r.factorization,
            "passed": r.passed(),
        }));
        if n == n_max {
            zero_set = r.zeros;
        }
    }
    zero_set.sort();
    zero_set.reverse();
    doc.results = json!({
        "rows": rows,
        "zero_set": zero_set.iter().map(rat).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok(Outcome::checked(passed))
}

pub fn theorem2_cmd(
    p: &EquationParams,
    q: &Polynomial,
    n: usize,
    points: Option<Vec<f64>>,
    seed: u64,
    doc: &mut OutputDocument,
) -> Result<Outcome> {
    let spec = build_class(p, q, n)?;
    let points = points
        .unwrap_or_else(|| generic_points(p, 5, 2.0, 0.25, &mut ChaCha8Rng::seed_from_u64(seed)));
    let residual = verify_class(&spec, &points)?;
    let passed = residual <= THEOREM2_TOL;
    let phase = match &spec.phase {
        Phase::Exact { .. } => "exact",
        Phase::Numeric { .. } => "numeric",
    };
    doc.results = json!({
        "n": n,
        "tau": rat(&spec.tau),
        "Q": poly(&spec.q),
        "f_n": poly(&spec.f_n),
        "phase_integrand": ratfun(&spec.phase_integrand),
        "p_coefficient": ratfun(&spec.p_coeff),
        "potential": ratfun(&spec.potential),
        "phase": phase,
        "points": floats(&points),
        "residual": float(residual),
        "tolerance": float(THEOREM2_TOL),
        "passed": passed,
    });
    Ok(Outcome::checked(passed))
}

pub fn catalog_cmd(
    name: Option<&str>,
    args: &BTreeMap<String, Rational>,
    n_max: usize,
    doc: &mut OutputDocument,
) -> Result<Outcome> {
    let Some(name) = name else {
        let rows: Vec<Value> = ClassicalName::ALL
            .iter()
            .map(|c| {
                let (lo, hi) = c.interval();
                json!({
                    "name": c.as_str(),
                    "args": c.required_args(),
                    "case": c.case().label(),
                    "interval": [bound(lo), bound(hi)],
                })
            })
            .collect();
        doc.results = json!({"entries": rows});
        return Ok(Outcome::checked(true));
    };
    let entry = lookup(name, args)?;
    doc.results = json!({
        "name": entry.name.as_str(),
        "args": entry.args.iter().map(|(k, v)| (k.clone(), rat(v))).collect::<Map<_, _>>(),
        "params": output::params(&entry.params),
        "case": entry.case.label(),
    });
    let report = cross_validate(name, args, n_max)?;
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "solver": poly(&r.solver),
                "reference": poly(&r.reference),
                "reference_kind": r.reference_kind.label(),
                "ratio": rat(&r.ratio),
            })
        })
        .collect();
    doc.results["rows"] = Value::Array(rows);
    doc.results["passed"] = json!(true);
    Ok(Outcome::checked(true))
}

pub fn verify_cmd(
    opts: &VerifyOptions,
    suites: &[Suite],
    doc: &mut OutputDocument,
) -> Result<Outcome> {
    let report = if suites.is_empty() {
        run_all(opts)
    } else {
        VerifyReport {
            options: opts.clone(),
            suites: suites.iter().map(|&s| run_suite_by_name(opts, s)).collect(),
        }
    };
    let rows: Vec<Value> = report
        .suites
        .iter()
        .map(|s| {
            json!({
                "suite": s.suite.label(),
                "trials": s.trials,
                "checks": s.checks,
                "max_error": s.max_error.map_or(Value::Null, float),
                "failures": s.failures.len(),
                "passed": s.passed(),
            })
        })
        .collect();
    let failure = report.first_failure().map(|f| {
        let case = opts.case.map_or("auto".to_string(), |c| c.label().to_string());
        json!({
            "suite": f.suite.label(),
            "trial": f.trial,
            "seed": f.seed,
            "params": output::params(&f.params),
            "n": f.n,
            "m": f.m,
            "label": f.label,
            "detail": f.detail,
            "reproduce": format!(
                "polyode verify --case {case} --trials {} --nmax {} --seed {} --suite {} --quad-points {} --quad-max-depth {} --quad-tol {:e}",
                opts.trials,
                opts.n_max,
                opts.seed,
                f.suite.label(),
                opts.quad.points,
                opts.quad.max_depth,
                opts.quad.tol
            ),
        })
    });
    if let Some(f) = report.first_failure() {
        doc.diagnostics.push(format!(
            "{} trial {} failed: {}",
            f.suite.label(),
            f.trial,
            f.detail
        ));
    }
    doc.results = json!({
        "passed": report.passed(),
        "suites": rows,
        "first_failure": failure,
    });
    Ok(Outcome::checked(report.passed()))
}

pub fn case_filter(text: &str) -> Result<Option<CaseTag>> {
    if text.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        text.parse().map(Some)
    }
}
