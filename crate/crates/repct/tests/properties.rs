//! Structural properties of the flow and the closed forms, checked by
//! simulation and randomized search.

use proptest::prelude::*;
use repct::experiments::separatrix;
use repct::spectral::{GradientTensor, InitialConfig};
use repct::thresholds::{classify_zero_background, g_zero_background, Region};
use repct::verify::{
    check_branch_gate_adjudication, check_homoclinic_containment, check_monotone_spiral,
    check_riccati_slope_bound, check_time_reversal, CheckResult,
};

fn assert_check(result: CheckResult) {
    println!("PROPERTY {}: {} ({})", result.name, if result.passed { "PASS" } else { "FAIL" }, result.detail);
    assert!(result.passed, "{} failed: {}", result.name, result.detail);
}

#[test]
fn supercritical_divergence_slope_cap_is_negative_and_sharp() {
    assert_check(check_riccati_slope_bound());
}

#[test]
fn orbits_around_the_background_center_wind_monotonically() {
    assert_check(check_monotone_spiral());
}

#[test]
fn reduced_flow_is_time_reversible() {
    assert_check(check_time_reversal());
}

#[test]
fn subcritical_orbits_stay_inside_the_homoclinic_loop() {
    assert_check(check_homoclinic_containment());
}

#[test]
fn simulation_adjudicates_the_branch_gate_conventions() {
    assert_check(check_branch_gate_adjudication());
}

#[test]
fn separatrix_slope_at_the_rest_point_matches_the_local_expansion() {
    // near the rest point density 2k/beta the separatrix is locally linear
    // with slope sqrt(beta/2)
    let (beta, k) = (1.0, 1.0);
    let h = 1e-5;
    let pts = separatrix(beta, k, 0.0, &[2.0 - h, 2.0 + h]).unwrap();
    let lo = pts[0].d.unwrap();
    let hi = pts[1].d.unwrap();
    let slope = (hi - lo) / (2.0 * h);
    assert!(lo < 0.0 && hi > 0.0);
    assert!(
        (slope - (beta / 2.0_f64).sqrt()).abs() < 1e-4,
        "separatrix slope {slope} vs {}",
        (beta / 2.0_f64).sqrt()
    );
}

proptest! {
    /// A negative spectral gap forces a conjugate eigenvalue pair whose
    /// imaginary parts are half the square root of the gap magnitude.
    #[test]
    fn complex_eigenvalue_pairs_carry_the_gap(
        m11 in -3.0..3.0f64,
        m12 in -3.0..3.0f64,
        m21 in -3.0..3.0f64,
        m22 in -3.0..3.0f64,
    ) {
        let m = GradientTensor::new(m11, m12, m21, m22).unwrap();
        let gap = m.spectral_gap();
        prop_assume!(gap < -1e-6);
        let pair = m.eigenvalues();
        let half = 0.5 * (-gap).sqrt();
        prop_assert!((pair.lambda1.re - 0.5 * m.trace()).abs() < 1e-12);
        prop_assert!((pair.lambda2.re - 0.5 * m.trace()).abs() < 1e-12);
        prop_assert!((pair.lambda1.im.abs() - half).abs() < 1e-9 * half.max(1.0));
        prop_assert!((pair.lambda1.im + pair.lambda2.im).abs() < 1e-12);
    }

    /// The zero-background verdict is exactly the comparison against the
    /// threshold surface, and the reported margin is the signed distance.
    #[test]
    fn zero_background_verdict_is_the_surface_comparison(
        rho0 in 0.05..5.0f64,
        d0 in -6.0..6.0f64,
        gamma0 in 0.01..10.0f64,
        k in 0.2..3.0f64,
    ) {
        let config = InitialConfig::new(rho0, d0, gamma0, k, 0.0).unwrap();
        let verdict = classify_zero_background(&config).unwrap();
        let g = g_zero_background(rho0, gamma0, k).unwrap();
        prop_assert_eq!(verdict.surface_value, Some(g));
        prop_assert!((verdict.margin - (d0 - g)).abs() < 1e-15 * d0.abs().max(1.0));
        let expected = if d0 >= g { Region::S2 } else { Region::Supercritical };
        prop_assert_eq!(verdict.region, expected);
    }
}
