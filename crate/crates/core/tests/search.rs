use sympflow::qform::{assemble_q, delta_box, lambda0, min_eig_ratio, norm_matrix};
use sympflow::sympl::SingularSpectrum;

#[test]
fn delta_nonincreasing_on_ladder() {
    for (n, grid) in [(1, 9), (2, 9), (3, 5)] {
        let mut prev = f64::INFINITY;
        for k in 0..6 {
            let lam = 1.0 + 0.2 * k as f64;
            let d = delta_box(n, lam, grid).unwrap().delta;
            if k == 0 {
                assert!(d > 0.0, "n = {n}: δ₁ = {d}");
                assert!(d >= (3.0 - 5f64.sqrt()) / 6.0 - 1e-12);
            }
            assert!(d <= prev + 1e-12, "n = {n}, Λ = {lam}: {d} > {prev}");
            prev = d;
        }
    }
}

#[test]
fn n1_is_lambda_independent() {
    let base = assemble_q(&SingularSpectrum::ones(1));
    for t in [0.1, 0.5, 1.0, 2.0, 2.77] {
        let q = assemble_q(&SingularSpectrum::from_log_pairs(&[t]));
        assert!(q.max_abs_diff(&base) <= 1e-12);
    }
    let d1 = delta_box(1, 1.0, 9).unwrap().delta;
    let d16 = delta_box(1, 16.0, 9).unwrap().delta;
    assert!((d1 - d16).abs() < 1e-12 && d16 > 0.0);
}

#[test]
fn unit_ratio_is_three_minus_root_five() {
    for n in 1..=3 {
        let r = min_eig_ratio(&assemble_q(&SingularSpectrum::ones(n)), &norm_matrix(n)).unwrap();
        assert!((r - (3.0 - 5f64.sqrt())).abs() < 1e-9, "n = {n}: {r}");
    }
}

#[test]
fn lambda0_brackets_the_closed_form_at_n2() {
    let exact = 0.4 * 10f64.sqrt() + 0.2 * 15f64.sqrt();
    assert!(delta_box(2, exact - 1e-3, 33).unwrap().delta > 0.0);
    assert!(delta_box(2, exact + 1e-3, 33).unwrap().delta < 0.0);
    let r = lambda0(2, 1e-4, 16.0, 33).unwrap();
    let l0 = r.lambda0.unwrap();
    assert!((l0 - exact).abs() < 1e-3, "{l0} vs {exact}");
    assert!(r.bracket[0] <= exact + 1e-6 && exact <= r.bracket[1] + 1e-4);
}

#[test]
fn lambda0_exceeds_cap_at_n1() {
    let r = lambda0(1, 1e-3, 16.0, 9).unwrap();
    assert!(r.exceeds_cap && r.lambda0.is_none());
}

/// Regression value; identical at 9, 17 and 33 points per axis.
#[test]
fn lambda0_golden_n3() {
    let r = lambda0(3, 1e-4, 16.0, 9).unwrap();
    let l0 = r.lambda0.unwrap();
    assert!((l0 - 1.84987).abs() < 1e-4, "{l0}");
    let exact2 = 0.4 * 10f64.sqrt() + 0.2 * 15f64.sqrt();
    assert!(l0 > 1.0 && l0 < exact2);
}
