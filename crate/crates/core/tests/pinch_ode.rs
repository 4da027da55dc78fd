mod common;

use common::rk4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sympflow::pinch::{
    comparison_ode, curvature_sum, eps_from_lambda, lambda1_from_lambda0, lambda_from_eps, log_comparison, sample_pinched_spectrum,
    star_omega, ComparisonOde, LOG_MARGIN_TOL,
};
use sympflow::sympl::SingularSpectrum;

/// Derivative of `y = a/(1 − e^{−K₂t}(y₀ − a)/y₀)` differentiated by hand.
fn derivative(ode: &ComparisonOde, y0: f64, t: f64) -> f64 {
    let a = ode.k2 / (ode.delta * ode.c0 - ode.eps * ode.k1);
    let e = (-ode.k2 * t).exp() * (y0 - a) / y0;
    -a * ode.k2 * e / (1.0 - e).powi(2)
}

fn cases() -> Vec<(ComparisonOde, f64)> {
    vec![
        (ComparisonOde::new(1.0, 1.0, 2.0, 0.75, 0.5).unwrap(), 2.0),
        (ComparisonOde::new(4.0, 8.0, 1.0, 0.125, 0.01).unwrap(), 1.0),
        (ComparisonOde::new(4.0, 0.5, 1.0, 0.2, 0.01).unwrap(), 9.0),
        (ComparisonOde::new(2.0, 1.5, 0.7, 0.25, 0.02).unwrap(), 0.1),
    ]
}

#[test]
fn closed_form_satisfies_the_ode() {
    for (ode, y0) in cases() {
        for k in 0..=100 {
            let t = 0.1 * k as f64;
            let r = (derivative(&ode, y0, t) - ode.rhs(ode.solve(y0, t).unwrap())).abs();
            assert!(r < 1e-9, "t = {t}: residual {r}");
        }
    }
}

#[test]
fn closed_form_matches_rk4() {
    for (ode, y0) in cases() {
        for k in 0..=20 {
            let t = 0.5 * k as f64;
            let a = ode.solve(y0, t).unwrap();
            let b = rk4(|y| ode.rhs(y), y0, t, 20_000);
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "t = {t}: {a} vs {b}");
        }
    }
}

#[test]
fn explicit_example_and_limits() {
    let ode = ComparisonOde::new(1.0, 1.0, 2.0, 0.75, 0.5).unwrap();
    for t in [0.0f64, 0.3, 1.0, 4.0] {
        let e = t.exp();
        assert!((ode.solve(2.0, t).unwrap() - 2.0 * e / (2.0 * e - 1.0)).abs() < 1e-14);
    }
    assert!((ode.solve(2.0, 60.0).unwrap() - 1.0).abs() < 1e-14);
    let a = ode.equilibrium();
    assert_eq!(comparison_ode(1.0, 1.0, 2.0, 0.75, 0.5, a, 7.0).unwrap(), a);
    assert!(ComparisonOde::new(4.0, 8.0, 0.1, 0.1, 0.01).is_err());
}

#[test]
fn directional_lemmas_on_random_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        for &lam in &[1.1, 2.0, 4.0, 9.0] {
            let eps = eps_from_lambda(n, lam).unwrap();
            let back = lambda_from_eps(n, eps).unwrap();
            if n == 1 {
                assert!((back - lam).abs() < 1e-10);
            } else {
                assert!(back >= lam - 1e-12);
            }
            for _ in 0..250 {
                let s = sample_pinched_spectrum(n, lam, &mut rng);
                let w = star_omega(&s);
                assert!(w >= 0.5f64.powi(n as i32) - eps - 1e-15);
                assert!(s.max() <= back.sqrt() + 1e-12);
            }
        }
    }
}

#[test]
fn hand_values() {
    let s = SingularSpectrum::new(vec![2.0, 0.5, 2.0, 0.5], 1e-12).unwrap();
    assert!((star_omega(&s) - 0.16).abs() < 1e-15);
    assert!((eps_from_lambda(1, 4.0).unwrap() - 0.1).abs() < 1e-15);
    assert!((eps_from_lambda(2, 4.0).unwrap() - 0.09).abs() < 1e-15);
    assert!((lambda_from_eps(1, 0.1).unwrap() - 4.0).abs() < 1e-12);
    let c = SingularSpectrum::new(vec![2.0, 0.5], 1e-12).unwrap();
    assert!((curvature_sum(&c) - 0.36).abs() < 1e-15);
    assert_eq!(curvature_sum(&SingularSpectrum::ones(3)), 0.0);
    let l1 = lambda1_from_lambda0(2, 2.0395).unwrap();
    assert!((l1 - 1.650_967_6).abs() < 1e-7 && l1 < 2.0395);
    let lc = log_comparison(2.0395, 10_001).unwrap();
    assert!(lc.inequality_holds && lc.worst_margin >= LOG_MARGIN_TOL);
    assert!((lc.c - 1.766).abs() < 1e-3);
}
