use goodwin_core::model::{
    conserved_quantity, equilibrium, flow, measure_period, period, simulate, simulate_window, GoodwinParams, PhasePoint,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GoodwinParams> {
    (
        0.01..0.03f64,
        0.0..0.02f64,
        0.03..0.06f64,
        2.5..3.5f64,
        0.1..1.0f64,
        0.9..0.98f64,
        0.55..0.95f64,
    )
        .prop_map(|(alpha, beta, delta, nu, rho, lambda_bar, k)| GoodwinParams {
            alpha,
            beta,
            delta,
            nu,
            gamma: alpha - rho * lambda_bar,
            rho,
            k,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbits_close(p in params(), dw in -0.1..0.1f64, dl in -0.02..0.02f64) {
        let eq = equilibrium(&p).unwrap().point;
        prop_assume!(dw.abs() > 1e-3 || dl.abs() > 1e-3);
        let x0 = PhasePoint::new(eq.omega * (1.0 + dw), eq.lambda * (1.0 + dl));
        let t = period(&p).unwrap();
        let n = (1.25 * t).ceil() as usize;
        let tr = simulate(&p, x0, 0, n).unwrap();
        // sample densely after half a period and look for the return
        let mut closest = f64::INFINITY;
        let mut x = tr.at((t / 2.0) as i32).unwrap();
        let h = 1.0 / 1024.0;
        for _ in 0..((0.75 * t + 1.0) / h) as usize {
            x = flow(&p, x, h, 1).unwrap();
            closest = closest.min(x.distance(&x0));
        }
        prop_assert!(closest < 1e-4, "closest approach {closest}");
        let v0 = conserved_quantity(&p, x0);
        prop_assert!(((conserved_quantity(&p, x) - v0) / v0).abs() < 1e-6);
    }

    #[test]
    fn measured_period_near_linear_for_small_orbits(p in params(), r in 1e-4..1e-2f64) {
        let eq = equilibrium(&p).unwrap().point;
        let t = measure_period(&p, PhasePoint::new(eq.omega + r, eq.lambda)).unwrap();
        let lin = period(&p).unwrap();
        prop_assert!((t - lin).abs() / lin < 0.05);
    }
}

#[test]
fn window_covers_both_directions() {
    let p = GoodwinParams {
        alpha: 0.018,
        beta: 0.006,
        delta: 0.05,
        nu: 2.842,
        gamma: -0.33,
        rho: 0.367,
        k: 0.64,
    };
    let x0 = PhasePoint::new(0.7, 0.95);
    let tr = simulate_window(&p, x0, 1985, 1960, 2010).unwrap();
    assert_eq!((tr.start_year, tr.end_year()), (1960, 2010));
    assert_eq!(tr.at(1985), Some(x0));
    let fwd = simulate(&p, x0, 1985, 25).unwrap();
    let (a, b) = (tr.at(2010).unwrap(), fwd.at(2010).unwrap());
    assert!(a.distance(&b) < 1e-10);
    let v0 = conserved_quantity(&p, x0);
    for x in &tr.points {
        assert!(((conserved_quantity(&p, *x) - v0) / v0).abs() < 1e-6);
    }
}
