//! Numerical integration: double-exponential rules for weighted inner products
//! and adaptive Gauss-Legendre for smooth finite integrals.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Environment variable overriding the default relative tolerance.
pub const TOL_ENV: &str = "POLYODE_QUAD_TOL";

/// Integration controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Gauss-Legendre nodes per panel.
    pub points: usize,
    /// Maximum bisection depth (Gauss-Legendre) or refinement level cap.
    pub max_depth: usize,
    /// Relative tolerance against the L1 scale of the integrand.
    pub tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            points: 64,
            max_depth: 30,
            tol: 1e-10,
        }
    }
}

impl QuadConfig {
    /// Defaults, with the tolerance taken from `POLYODE_QUAD_TOL` when set.
    pub fn from_env() -> Self {
        let mut cfg = QuadConfig::default();
        if let Some(tol) = std::env::var(TOL_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
        {
            if tol > 0.0 && tol.is_finite() {
                cfg.tol = tol;
            }
        }
        cfg
    }

    pub fn with_tol(self, tol: f64) -> Self {
        QuadConfig { tol, ..self }
    }
}

/// Abscissa with its distances to both interval ends, each accurate even
/// when `x` rounds onto an endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadPoint {
    pub x: f64,
    pub dist_lo: f64,
    pub dist_hi: f64,
}

/// Integral estimate with its error estimate and `integral |f|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub l1: f64,
}

const DE_TMAX: f64 = 6.5;
const DE_MIN_LEVEL: usize = 4;
const DE_MAX_LEVEL: usize = 12;

struct Node {
    point: QuadPoint,
    weight: f64,
}

/// Node at parameter `t` for the rule matching `(lo, hi)`.
fn de_node(lo: f64, hi: f64, scale: f64, t: f64) -> Option<Node> {
    let u = FRAC_PI_2 * t.sinh();
    let du = FRAC_PI_2 * t.cosh();
    let node = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let half = 0.5 * (hi - lo);
            // 1 - tanh(u) and 1 + tanh(u) without cancellation.
            let e = (-2.0 * u.abs()).exp();
            let small = 2.0 * e / (1.0 + e);
            let large = 2.0 / (1.0 + e);
            let (to_lo, to_hi) = if u >= 0.0 {
                (half * large, half * small)
            } else {
                (half * small, half * large)
            };
            let x = if u >= 0.0 { hi - to_hi } else { lo + to_lo };
            let sech = 2.0 / (u.exp() + (-u).exp());
            Node {
                point: QuadPoint {
                    x,
                    dist_lo: to_lo,
                    dist_hi: to_hi,
                },
                weight: half * du * sech * sech,
            }
        }
        (true, false) => {
            let d = scale * u.exp();
            Node {
                point: QuadPoint {
                    x: lo + d,
                    dist_lo: d,
                    dist_hi: f64::INFINITY,
                },
                weight: d * du,
            }
        }
        (false, true) => {
            let d = scale * u.exp();
            Node {
                point: QuadPoint {
                    x: hi - d,
                    dist_lo: f64::INFINITY,
                    dist_hi: d,
                },
                weight: d * du,
            }
        }
        (false, false) => {
            let x = scale * u.sinh();
            Node {
                point: QuadPoint {
                    x,
                    dist_lo: f64::INFINITY,
                    dist_hi: f64::INFINITY,
                },
                weight: scale * u.cosh() * du,
            }
        }
    };
    let ok = node.weight.is_finite()
        && node.weight > 0.0
        && node.point.x.is_finite()
        && node.point.dist_lo > 0.0
        && node.point.dist_hi > 0.0;
    ok.then_some(node)
}

/// Sum of `w f` over the nodes `t = offset + k * step` in `[-tmax, tmax]`.
fn de_sum<F: Fn(QuadPoint) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    scale: f64,
    step: f64,
    offset: f64,
) -> Result<(f64, f64)> {
    let mut sum = 0.0;
    let mut abs = 0.0;
    let mut t = -DE_TMAX + offset;
    while t <= DE_TMAX + 1e-12 {
        if let Some(node) = de_node(lo, hi, scale, t) {
            let v = f(node.point);
            if v.is_finite() {
                sum += node.weight * v;
                abs += node.weight * v.abs();
            } else if t.abs() < 3.0 {
                return Err(Error::SingularPoint { x: node.point.x });
            }
        }
        t += step;
    }
    Ok((sum, abs))
}

/// Integrates `f` over `(lo, hi)` (either end may be infinite) with a
/// double-exponential rule. `scale` sets the length scale of infinite rules.
pub fn integrate_de<F: Fn(QuadPoint) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    scale: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if lo.is_nan() || hi.is_nan() || lo >= hi || scale.is_nan() || scale <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "bad integration range ({lo}, {hi}) with scale {scale}"
        )));
    }
    let mut step = 0.5;
    let (mut sum, mut abs) = de_sum(&f, lo, hi, scale, step, 0.0)?;
    let mut value = sum * step;
    let max_level = DE_MAX_LEVEL.min(cfg.max_depth.max(DE_MIN_LEVEL));
    let mut error = f64::INFINITY;
    for level in 1..=max_level {
        let (s, a) = de_sum(&f, lo, hi, scale, step, step / 2.0)?;
        sum += s;
        abs += a;
        step /= 2.0;
        let next = sum * step;
        error = (next - value).abs();
        value = next;
        let l1 = abs * step;
        if level >= DE_MIN_LEVEL && error <= cfg.tol * l1.max(f64::MIN_POSITIVE) {
            return Ok(QuadResult { value, error, l1 });
        }
    }
    Err(Error::QuadratureNoConvergence {
        estimate: value,
        error,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            dp = n as f64 * (x * p - if n == 1 { 1.0 } else { p0 }) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let v = f(mid + half * x);
        sum += w * v;
        abs += w * v.abs();
    }
    (sum * half, abs * half.abs())
}

/// Adaptive Gauss-Legendre on a finite interval.
pub fn gauss_legendre<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParams(
            "Gauss-Legendre needs a finite interval".into(),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            l1: 0.0,
        });
    }
    let rule = gauss_legendre_rule(cfg.points.max(2));
    let (whole, l1) = gl_panel(&f, a, b, &rule);
    if !whole.is_finite() {
        return Err(Error::SingularPoint { x: 0.5 * (a + b) });
    }
    let budget = cfg.tol * l1.max(f64::MIN_POSITIVE);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut stack = vec![(a, b, whole, 0usize)];
    while let Some((lo, hi, estimate, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, _) = gl_panel(&f, lo, mid, &rule);
        let (right, _) = gl_panel(&f, mid, hi, &rule);
        let refined = left + right;
        let diff = (refined - estimate).abs();
        let share = budget * ((hi - lo) / (b - a)).abs();
        if diff <= share.max(1e-15 * refined.abs()) {
            value += refined;
            error += diff;
        } else if depth + 1 >= cfg.max_depth {
            return Err(Error::QuadratureNoConvergence {
                estimate: value + refined,
                error: error + diff,
            });
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(QuadResult { value, error, l1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre_rule(5);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!(close(s, 2.0 / 9.0, 1e-14));
        assert!(close(w.iter().sum(), 2.0, 1e-14));
    }

    #[test]
    fn adaptive_gauss_legendre() {
        let cfg = QuadConfig::default();
        let r = gauss_legendre(|x: f64| x.sin(), 0.0, PI, &cfg).unwrap();
        assert!(close(r.value, 2.0, 1e-13));
        let r = gauss_legendre(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, &cfg).unwrap();
        assert!(close(r.value, 2.0 * 100.0 * (100.0f64).atan(), 1e-10));
    }

    #[test]
    fn endpoint_singularity() {
        let cfg = QuadConfig::default();
        let r = integrate_de(
            |p| p.dist_lo.powf(-0.9) * p.dist_hi.powf(-0.5),
            0.0,
            1.0,
            1.0,
            &cfg,
        )
        .unwrap();
        // B(0.1, 0.5)
        let beta =
            crate::special::gamma(0.1) * crate::special::gamma(0.5) / crate::special::gamma(0.6);
        assert!(close(r.value, beta, 1e-9));
    }

    #[test]
    fn infinite_ranges() {
        let cfg = QuadConfig::default();
        let r = integrate_de(
            |p| (-p.x).exp() * p.x.powi(3),
            0.0,
            f64::INFINITY,
            1.0,
            &cfg,
        )
        .unwrap();
        assert!(close(r.value, 6.0, 1e-10));
        let r = integrate_de(
            |p| (-p.x * p.x).exp(),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1.0,
            &cfg,
        )
        .unwrap();
        assert!(close(r.value, PI.sqrt(), 1e-10));
        let r = integrate_de(
            |p| 1.0 / (1.0 + p.x * p.x),
            f64::NEG_INFINITY,
            0.0,
            1.0,
            &cfg,
        )
        .unwrap();
        assert!(close(r.value, PI / 2.0, 1e-10));
    }

    #[test]
    fn config_tolerance() {
        assert_eq!(QuadConfig::default().tol, 1e-10);
        assert_eq!(QuadConfig::default().with_tol(1e-6).tol, 1e-6);
    }
}
