use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyode::algebra::{q, Rational};
use polyode::hyper::{
    closed_form_exact, closed_form_polynomial, closed_form_value, FormulaBranch, Surd,
};
use polyode::recurrence::generate;
use polyode::sampling::sample_branch;
use polyode::verify::branch_case;

#[test]
fn exact_closed_forms_match_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let points = [q(0, 1), q(1, 3), q(-5, 2), q(7, 4)];
    for branch in FormulaBranch::ALL {
        for _ in 0..15 {
            let p = sample_branch(branch, 5, &mut rng);
            for (n, y) in generate(&p, 5).unwrap().iter().enumerate() {
                let form = closed_form_exact(&p, n).unwrap();
                if n == 1 {
                    assert_eq!(form.branch, branch, "{p:?}");
                }
                for x in &points {
                    let v = form.eval(&Surd::rational(x.clone())).unwrap();
                    assert_eq!(
                        v,
                        Surd::rational(y.eval_rational(x)),
                        "{} {p:?} n={n} x={x}",
                        branch.label()
                    );
                }
            }
        }
    }
}

#[test]
fn float_values_track_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for branch in FormulaBranch::ALL {
        assert_eq!(
            branch_case(branch),
            polyode::ode::classify(&sample_branch(branch, 4, &mut rng))
        );
        for _ in 0..10 {
            let p = sample_branch(branch, 6, &mut rng);
            for (n, y) in generate(&p, 6).unwrap().iter().enumerate() {
                for x in [-1.5, -0.25, 0.75, 2.0] {
                    let exact = y
                        .eval_rational(&Rational::from_f64_exact(x).unwrap())
                        .to_f64();
                    let v = closed_form_value(&p, n, x).unwrap();
                    assert!(
                        (v - exact).abs() <= 1e-9 * exact.abs().max(f64::MIN_POSITIVE),
                        "{p:?} n={n} x={x}"
                    );
                }
            }
        }
    }
}

#[test]
fn interpolated_closed_form_is_the_recurrence_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for branch in FormulaBranch::ALL {
        let p = sample_branch(branch, 5, &mut rng);
        for (n, y) in generate(&p, 5).unwrap().iter().enumerate() {
            assert_eq!(&closed_form_polynomial(&p, n).unwrap(), y, "{p:?} n={n}");
        }
    }
}
