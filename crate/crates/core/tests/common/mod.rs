#![allow(dead_code)]

use num_rational::Ratio;
use num_traits::ToPrimitive;
use polyode::algebra::{Polynomial, Rational};
use polyode::ode::{CaseTag, EquationParams};

pub type Q = Ratio<i128>;

pub fn to_q(r: &Rational) -> Q {
    Q::new(
        r.numer().to_i128().expect("small numerator"),
        r.denom().to_i128().expect("small denominator"),
    )
}

pub fn poly_q(p: &Polynomial) -> Vec<Q> {
    p.coeffs().iter().map(to_q).collect()
}

fn k(v: i128) -> Q {
    Q::from_integer(v)
}

/// Coefficient lists `y_0..y_4` (ascending powers) as printed for each
/// special case, evaluated at the given parameters.
pub fn printed_table(case: CaseTag, p: &EquationParams) -> Option<Vec<Vec<Q>>> {
    let (b, a, c, d, e) = (
        to_q(&p.a20),
        to_q(&p.a21),
        to_q(&p.a22),
        to_q(&p.a10),
        to_q(&p.a11),
    );
    let one = k(1);
    let y0 = vec![one];
    let y1 = vec![e, d];
    let rows = match case {
        CaseTag::I => vec![
            y0,
            y1,
            vec![e * e + d * c + e * a, k(2) * d * (a + e), d * d],
            vec![
                k(3) * e * d * c
                    + e * e * e
                    + k(3) * a * e * e
                    + k(4) * a * d * c
                    + k(2) * e * a * a,
                k(3) * d * ((k(2) * a + e) * (e + a) + d * c),
                k(3) * d * d * (k(2) * a + e),
                d * d * d,
            ],
            vec![
                k(6) * d * c * e * e
                    + k(22) * d * c * e * a
                    + k(11) * e * e * a * a
                    + k(6) * e * a * a * a
                    + k(6) * e * e * e * a
                    + k(3) * d * d * c * c
                    + k(18) * d * c * a * a
                    + e * e * e * e,
                k(4) * d
                    * (e * e * e
                        + k(6) * a * e * e
                        + k(11) * e * a * a
                        + k(3) * d * e * c
                        + k(6) * a * a * a
                        + k(7) * d * a * c),
                k(6) * d * d * ((k(3) * a + e) * (e + k(2) * a) + d * c),
                k(4) * d * d * d * (k(3) * a + e),
                d * d * d * d,
            ],
        ],
        CaseTag::II => {
            let f = |j: i128| d + k(j) * b;
            let g = |j: i128| e + k(j) * a;
            vec![
                y0,
                y1,
                vec![e * g(1), k(2) * g(1) * f(1), f(1) * f(2)],
                vec![
                    e * g(1) * g(2),
                    k(3) * g(1) * g(2) * f(2),
                    k(3) * g(2) * f(2) * f(3),
                    f(2) * f(3) * f(4),
                ],
                vec![
                    e * g(1) * g(2) * g(3),
                    k(4) * g(3) * g(2) * g(1) * f(3),
                    k(6) * g(3) * g(2) * f(3) * f(4),
                    k(4) * g(3) * f(5) * f(4) * f(3),
                    f(6) * f(5) * f(4) * f(3),
                ],
            ]
        }
        CaseTag::III => {
            let f = |j: i128| d + k(j) * b;
            vec![
                y0,
                y1,
                vec![e * e + f(2) * c, k(2) * e * f(1), f(1) * f(2)],
                vec![
                    e * e * e + e * (k(3) * d + k(10) * b) * c,
                    k(3) * e * e * f(2) + k(3) * c * f(2) * f(4),
                    k(3) * e * f(2) * f(3),
                    f(2) * f(3) * f(4),
                ],
                vec![
                    e * e * e * e
                        + k(2) * e * e * (k(3) * d + k(14) * b) * c
                        + k(3) * f(4) * f(6) * c * c,
                    k(4) * e * e * e * f(3) + k(4) * e * c * f(3) * (k(3) * d + k(16) * b),
                    k(6) * e * e * f(3) * f(4) + k(6) * f(3) * f(4) * f(6) * c,
                    k(4) * e * f(3) * f(4) * f(5),
                    f(3) * f(4) * f(5) * f(6),
                ],
            ]
        }
        CaseTag::IV => vec![
            y0,
            y1,
            vec![e * e + d * c, k(2) * d * e, d * d],
            vec![
                e * e * e + k(3) * e * d * c,
                k(3) * d * (e * e + d * c),
                k(3) * d * d * e,
                d * d * d,
            ],
            vec![
                k(6) * d * c * e * e + k(3) * d * d * c * c + e * e * e * e,
                k(4) * d * e * (e * e + k(3) * d * c),
                k(6) * d * d * (e * e + d * c),
                k(4) * d * d * d * e,
                d * d * d * d,
            ],
        ],
        CaseTag::V => {
            let g = |j: i128| e + k(j) * a;
            vec![
                y0,
                y1,
                vec![e * g(1), k(2) * d * g(1), d * d],
                vec![
                    e * g(1) * g(2),
                    k(3) * d * g(1) * g(2),
                    k(3) * d * d * g(2),
                    d * d * d,
                ],
                vec![
                    e * g(1) * g(2) * g(3),
                    k(4) * d * g(3) * g(2) * g(1),
                    k(6) * d * d * g(2) * g(3),
                    k(4) * d * d * d * g(3),
                    d * d * d * d,
                ],
            ]
        }
        CaseTag::VI => {
            let f = |j: i128| d + k(j) * b;
            vec![
                y0,
                y1,
                vec![e * e, k(2) * e * f(1), f(1) * f(2)],
                vec![
                    e * e * e,
                    k(3) * e * e * f(2),
                    k(3) * e * f(2) * f(3),
                    f(2) * f(3) * f(4),
                ],
                vec![
                    e * e * e * e,
                    k(4) * e * e * e * f(3),
                    k(6) * e * e * f(3) * f(4),
                    k(4) * e * f(3) * f(4) * f(5),
                    f(3) * f(4) * f(5) * f(6),
                ],
            ]
        }
        CaseTag::General => return None,
    };
    Some(rows)
}

/// Drops trailing zeros so printed lists compare with normalized polynomials.
pub fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| *c == k(0)) {
        v.pop();
    }
    v
}
