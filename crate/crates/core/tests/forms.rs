use std::time::Instant;

use orlicz_lab::forms::*;
use orlicz_lab::orlicz::YoungFunction;

fn cubic_one_form() -> AnalyticForm {
    AnalyticForm::new(2, 1, |p, o| {
        let (x, y) = (p[0], p[1]);
        o[0] = x * x * x - 2.0 * x * y * y + y;
        o[1] = x * x * y + 3.0 * y * y * y - x;
    })
}

fn cubic_two_form() -> AnalyticForm {
    AnalyticForm::new(2, 2, |p, o| {
        let (x, y) = (p[0], p[1]);
        o[0] = 1.0 + x * y * y - x * x * x;
    })
}

#[test]
fn poincare_identity_on_the_disc() {
    let ball = ChartedDomain::unit_ball(2, 64).unwrap();
    let phi = YoungFunction::power(2.0).unwrap();
    let opts = PoincareOptions::default();
    for omega in [cubic_one_form(), cubic_two_form()] {
        let start = Instant::now();
        let r = verify_poincare(&phi, &omega, &ball, &opts, 1e-10).unwrap();
        eprintln!("degree {} residual {:.3e} ratio {:.3} in {:?}", r.degree, r.residual, r.ratio, start.elapsed());
        assert!(r.residual <= 1e-2);
        assert!(r.ratio.is_finite());
    }
}

#[test]
fn cone_of_exact_form_recovers_differences() {
    let ball = ChartedDomain::unit_ball(2, 64).unwrap();
    let f = |p: &[f64]| p[0] * p[0] * p[1] - 2.0 * p[1] * p[1] * p[1] + p[0];
    let df = AnalyticForm::new(2, 1, |p, o| {
        o[0] = 2.0 * p[0] * p[1] + 1.0;
        o[1] = p[0] * p[0] - 6.0 * p[1] * p[1];
    });
    let x = [0.2, -0.1];
    let chi = cone_homotopy(&df, &x, &ball, 32).unwrap();
    for i in ball.region_indices() {
        let y = ball.grid.point(i);
        assert!((chi.at(i)[0] - (f(&y) - f(&x))).abs() < 1e-3);
    }
}
