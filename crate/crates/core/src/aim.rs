//! Asymptotic iteration method: the `(lambda_k, s_k)` iteration and its
//! termination quantity `delta_n`.

use rand::Rng;

use crate::algebra::{Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::ode::{eigenvalue, EquationParams};

/// Default upper bound on `n` for factorization checks.
pub const DEFAULT_CAP: usize = 6;

/// Iterates `(lambda_k, s_k)` over the common denominator `p2^(k+1)`:
/// `lambda_k = A_k / p2^(k+1)`, `s_k = B_k / p2^(k+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AimState {
    pub k: usize,
    p2: Polynomial,
    p1: Polynomial,
    tau: Rational,
    lambda_num: Polynomial,
    s_num: Polynomial,
    /// `(A_{k-1}, B_{k-1})` over `p2^k`, with `(1, 0)` over `1` before the seeds.
    previous: (Polynomial, Polynomial),
}

impl AimState {
    /// Seeds `lambda_0 = -p1/p2`, `s_0 = tau/p2`.
    pub fn seed(params: &EquationParams, tau: &Rational) -> Self {
        AimState {
            k: 0,
            p2: params.p2(),
            p1: params.p1(),
            tau: tau.clone(),
            lambda_num: -params.p1(),
            s_num: Polynomial::constant(tau.clone()),
            previous: (Polynomial::one(), Polynomial::zero()),
        }
    }

    /// One step `lambda_k = lambda_{k-1}' + s_{k-1} + lambda_0 lambda_{k-1}`,
    /// `s_k = s_{k-1}' + s_0 lambda_{k-1}`.
    pub fn step(&self) -> Self {
        let m = Rational::from(self.k + 1);
        let dp2 = self.p2.derivative();
        let (a, b) = (&self.lambda_num, &self.s_num);
        let lambda_num = &(&(&a.derivative() * &self.p2) - &(&dp2 * a).scale(&m))
            + &(&(b * &self.p2) - &(&self.p1 * a));
        let s_num = &(&(&b.derivative() * &self.p2) - &(&dp2 * b).scale(&m)) + &a.scale(&self.tau);
        AimState {
            k: self.k + 1,
            p2: self.p2.clone(),
            p1: self.p1.clone(),
            tau: self.tau.clone(),
            lambda_num,
            s_num,
            previous: (a.clone(), b.clone()),
        }
    }

    fn denominator(&self, power: usize) -> Polynomial {
        self.p2.pow(power)
    }

    pub fn lambda(&self) -> RationalFunction {
        RationalFunction::new(self.lambda_num.clone(), self.denominator(self.k + 1))
            .expect("p2 is nonzero")
    }

    pub fn s(&self) -> RationalFunction {
        RationalFunction::new(self.s_num.clone(), self.denominator(self.k + 1))
            .expect("p2 is nonzero")
    }

    /// Numerator of `delta_k` over `p2^(2k+1)`.
    pub fn delta_numerator(&self) -> Polynomial {
        let (a_prev, b_prev) = &self.previous;
        &(&self.lambda_num * b_prev) - &(a_prev * &self.s_num)
    }

    /// `delta_k = lambda_k s_{k-1} - lambda_{k-1} s_k`.
    pub fn delta(&self) -> RationalFunction {
        RationalFunction::new(self.delta_numerator(), self.denominator(2 * self.k + 1))
            .expect("p2 is nonzero")
    }
}

/// State after `n` iterations from the seeds.
pub fn aim_iterate(params: &EquationParams, tau: &Rational, n: usize) -> AimState {
    let mut state = AimState::seed(params, tau);
    for _ in 0..n {
        state = state.step();
    }
    state
}

/// `delta_n` as an exact rational function of `x`.
pub fn aim_delta(params: &EquationParams, tau: &Rational, n: usize) -> RationalFunction {
    aim_iterate(params, tau, n).delta()
}

/// Whether `delta_n` vanishes identically at `tau`.
pub fn delta_vanishes(params: &EquationParams, tau: &Rational, n: usize) -> bool {
    aim_iterate(params, tau, n).delta_numerator().is_zero()
}

/// `delta_n(x0; tau)` as a polynomial in `tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaPolynomial {
    pub n: usize,
    pub x0: Rational,
    pub in_tau: Polynomial,
}

/// Interpolates `delta_n` in `tau` at the first integer `x0 >= 0` that is not a
/// root of `p2` and gives a nonzero result. Uses `n + 3` nodes so a degree
/// above `n + 1` would show up in the result.
pub fn delta_polynomial_in_tau(params: &EquationParams, n: usize) -> Result<DeltaPolynomial> {
    let p2 = params.p2();
    let taus: Vec<Rational> = (0..n as i64 + 3)
        .map(|k| Rational::new(2 * k + 1, 3))
        .collect();
    let deltas: Vec<RationalFunction> = taus.iter().map(|t| aim_delta(params, t, n)).collect();
    for x in 0..64 {
        let x0 = Rational::integer(x);
        if p2.eval_rational(&x0).is_zero() {
            continue;
        }
        let mut points = Vec::with_capacity(taus.len());
        for (t, d) in taus.iter().zip(&deltas) {
            match d.eval_rational(&x0) {
                Some(v) => points.push((t.clone(), v)),
                None => break,
            }
        }
        if points.len() != taus.len() {
            continue;
        }
        let in_tau = Polynomial::interpolate(&points);
        if !in_tau.is_zero() {
            return Ok(DeltaPolynomial { n, x0, in_tau });
        }
    }
    Err(Error::InvalidParams(
        "delta_n vanishes at every sample point".into(),
    ))
}

/// Outcome of checking that `delta_n` vanishes exactly on the eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub n: usize,
    /// Distinct eigenvalues `k(k-1) a20 + k a10`, `k <= n`, ascending.
    pub eigenvalues: Vec<Rational>,
    /// Eigenvalues where `delta_n` vanished identically.
    pub zeros: Vec<Rational>,
    /// Random values of `tau` outside the eigenvalue set.
    pub outside: Vec<Rational>,
    /// Outside values where `delta_n` vanished (should be empty).
    pub spurious: Vec<Rational>,
    /// `delta_n(x0; tau) = c prod_k (tau - tau_k)` with each distinct
    /// eigenvalue counted once and degree at most `n + 1`.
    pub factorization: bool,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.zeros == self.eigenvalues && self.spurious.is_empty() && self.factorization
    }
}

/// Random rational `p/q` with `|p| <= 60`, `1 <= q <= 12`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-60..=60), rng.gen_range(1..=12))
}

/// Checks that `delta_n(tau)` vanishes exactly on the eigenvalue set and at
/// none of `samples` random points outside it.
pub fn delta_factorization_check<R: Rng>(
    params: &EquationParams,
    n: usize,
    samples: usize,
    cap: usize,
    rng: &mut R,
) -> Result<FactorizationReport> {
    if n > cap {
        return Err(Error::InvalidParams(format!(
            "n = {n} exceeds the iteration cap {cap}"
        )));
    }
    let mut eigenvalues: Vec<Rational> = (0..=n).map(|k| eigenvalue(params, k)).collect();
    eigenvalues.sort();
    eigenvalues.dedup();
    let zeros: Vec<Rational> = eigenvalues
        .iter()
        .filter(|t| delta_vanishes(params, t, n))
        .cloned()
        .collect();
    let mut outside = Vec::with_capacity(samples);
    while outside.len() < samples {
        let t = random_rational(rng);
        if !eigenvalues.contains(&t) && !outside.contains(&t) {
            outside.push(t);
        }
    }
    let spurious: Vec<Rational> = outside
        .iter()
        .filter(|t| delta_vanishes(params, t, n))
        .cloned()
        .collect();
    let poly = delta_polynomial_in_tau(params, n)?;
    let product = eigenvalues.iter().fold(Polynomial::one(), |acc, t| {
        &acc * &Polynomial::linear(Rational::one(), -t)
    });
    let factorization = poly.in_tau.degree().is_some_and(|d| d <= n + 1)
        && poly
            .in_tau
            .div_rem(&product)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false);
    Ok(FactorizationReport {
        n,
        eigenvalues,
        zeros,
        outside,
        spurious,
        factorization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeds_and_first_step() {
        let p = EquationParams::from_ints(1, 2, 3, 4, 5).unwrap();
        let tau = q(7, 2);
        let s0 = aim_iterate(&p, &tau, 0);
        let (lambda0, sigma0) = (s0.lambda(), s0.s());
        assert_eq!(lambda0, RationalFunction::new(-p.p1(), p.p2()).unwrap());
        assert_eq!(
            sigma0,
            RationalFunction::new(Polynomial::constant(tau.clone()), p.p2()).unwrap()
        );
        let mut lambda = lambda0.clone();
        let mut sigma = sigma0.clone();
        for k in 1..=3 {
            let next_lambda = &(&lambda.derivative() + &sigma) + &(&lambda0 * &lambda);
            let next_sigma = &sigma.derivative() + &(&sigma0 * &lambda);
            let delta = &(&next_lambda * &sigma) - &(&lambda * &next_sigma);
            let state = aim_iterate(&p, &tau, k);
            assert_eq!(state.lambda(), next_lambda);
            assert_eq!(state.s(), next_sigma);
            assert_eq!(state.delta(), delta);
            lambda = next_lambda;
            sigma = next_sigma;
        }
        assert_eq!(s0.delta(), -&sigma0);
    }

    #[test]
    fn low_order_zeros() {
        let p = EquationParams::from_ints(2, -1, 3, 5, 1).unwrap();
        assert!(delta_vanishes(&p, &q(0, 1), 0));
        assert!(!delta_vanishes(&p, &q(1, 1), 0));
        assert!(delta_vanishes(&p, &q(5, 1), 1));
        assert!(delta_vanishes(&p, &q(14, 1), 2));
        for n in 0..4 {
            assert!(delta_vanishes(&p, &q(0, 1), n));
        }
        assert!(!delta_vanishes(&p, &q(13, 1), 2));
    }

    #[test]
    fn zeros_persist_at_higher_order() {
        let p = EquationParams::from_ints(1, 1, -2, 3, 1).unwrap();
        for k in 0..=3 {
            let tau = eigenvalue(&p, k);
            for n in k..=5 {
                assert!(delta_vanishes(&p, &tau, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn hermite_factorization() {
        let p = EquationParams::from_ints(0, 0, 1, -2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let report = delta_factorization_check(&p, 3, 10, DEFAULT_CAP, &mut rng).unwrap();
        assert_eq!(report.zeros, vec![q(-6, 1), q(-4, 1), q(-2, 1), q(0, 1)]);
        assert!(report.passed());
        let general = EquationParams::from_ints(1, 1, 1, 1, 1).unwrap();
        let report = delta_factorization_check(&general, 2, 10, DEFAULT_CAP, &mut rng).unwrap();
        assert_eq!(report.zeros, vec![q(0, 1), q(1, 1), q(4, 1)]);
        assert!(report.passed());
        let zero = delta_factorization_check(&general, 0, 10, DEFAULT_CAP, &mut rng).unwrap();
        assert_eq!(zero.zeros, vec![q(0, 1)]);
    }

    #[test]
    fn degree_in_tau_is_bounded() {
        let p = EquationParams::from_ints(3, -2, 1, 7, -4).unwrap();
        for n in 0..5 {
            let d = delta_polynomial_in_tau(&p, n).unwrap();
            assert_eq!(d.in_tau.degree(), Some(n + 1));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = EquationParams::from_ints(1, 0, 0, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(delta_factorization_check(&p, 3, 1, 2, &mut rng).is_err());
    }

    #[test]
    fn degrees_grow_linearly() {
        let p = EquationParams::from_ints(1, 2, -3, 1, 2).unwrap();
        let tau = q(1, 3);
        let mut state = AimState::seed(&p, &tau);
        for k in 1..=6 {
            state = state.step();
            let deg = state.lambda().num().degree().unwrap();
            assert!(deg <= k + 1, "k={k} deg={deg}");
        }
    }
}
