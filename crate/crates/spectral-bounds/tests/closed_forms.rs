//! Reference evaluations for every closed-form constant, coded straight-line
//! from the collar identities rather than through the library's code paths:
//! m(l) = ln(cosh(l/4)/sinh(l/4)), sinh(m(l)) = 1/sinh(l/2),
//! U(m(l)) = atan(1/sinh(l/2)), R_n = 2^{3/4} sqrt(n(n-1)).

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use spectral_bounds::{
    a1, a1_parts, a2, a_doubleprime, a_tripleprime, a_tripleprime_on, bounded_decomposition_bounds,
    bounded_decomposition_bounds_with, buser_constant, buser_upper_bound, collar_energy_ratio,
    BornLower,
};
use std::f64::consts::PI;

/// Collar halfwidth as a log quotient, not an asinh.
fn m_ref(l: f64) -> f64 {
    ((l / 4.0).cosh() / (l / 4.0).sinh()).ln()
}

/// R_n = 2^{3/4} sqrt(n(n-1)), not sqrt(2 sqrt(2) n(n-1)).
fn buser_ref(n: u32) -> f64 {
    2f64.powf(0.75) * ((n * (n - 1)) as f64).sqrt()
}

/// A1 spelled out with the collar identities; the max branch is recomputed here.
fn a1_ref(eta: f64, lam1: f64, l: f64, psi: f64) -> f64 {
    let app = lam1 * (l / 4.0) / (l / 2.0).sinh();
    let appp = l / (8.0 * PI) / (1.0 / (l / 2.0).sinh()).atan();
    eta / (1.0 + 1.0 / lam1) * app.max(appp) * psi * psi / (2.0 * PI)
}

/// Bracket-shrinking golden-section minimizer, re-evaluating both probes each
/// step; deliberately not the library's routine.
fn golden_ref(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > tol {
        let c = hi - inv_phi * (hi - lo);
        let d = lo + inv_phi * (hi - lo);
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    0.5 * (lo + hi)
}

/// The minimized collar ratio with U written as asin(tanh r).
fn ratio_ref(r: f64) -> f64 {
    let u = r.tanh().asin();
    (2.0 * r.exp().atan() - PI / 2.0) / (u * u)
}

#[test]
fn buser_constant_matches_reference_evaluation() {
    for n in 2..=8 {
        assert_abs_diff_eq!(buser_constant(n).unwrap(), buser_ref(n), epsilon = 1e-12);
    }
    assert_abs_diff_eq!(buser_constant(2).unwrap(), 2f64.powf(1.25), epsilon = 1e-14);
    assert_abs_diff_eq!(
        buser_constant(3).unwrap(),
        (12.0 * 2f64.sqrt()).sqrt(),
        epsilon = 1e-12
    );
}

#[test]
fn buser_constant_increases_and_rejects_small_n() {
    for n in 2..8 {
        assert!(buser_constant(n + 1).unwrap() > buser_constant(n).unwrap());
    }
    assert!(buser_constant(0).is_err());
    assert!(buser_constant(1).is_err());
}

#[test]
fn buser_upper_bound_examples() {
    assert_eq!(buser_upper_bound(0.0, 2.0 * PI).unwrap(), 0.0);
    let open = buser_upper_bound(6.0, 2.0 * PI).unwrap();
    assert_abs_diff_eq!(open, 2.2712182885528214, epsilon = 1e-12);
    let pinched = buser_upper_bound(0.06, 2.0 * PI).unwrap();
    assert_abs_diff_eq!(pinched, 0.022712182885528211, epsilon = 1e-12);
    assert!(pinched < 0.25);
    // linear in boundary length
    assert_abs_diff_eq!(pinched, open * 0.01, epsilon = 1e-15);
    assert!(buser_upper_bound(6.0, 0.0).is_err());
    assert!(buser_upper_bound(6.0, -1.0).is_err());
}

#[test]
fn a2_matches_reference_evaluation() {
    for &v in &[2usize, 3, 4, 6] {
        for &l in &[0.3, 0.5, 1.0, 2.0, 3.0] {
            for &lam0 in &[0.0, 0.1, 0.24] {
                let m = m_ref(l);
                let reference = (v as f64 - 1.0) * (1.0 / (m * m) + lam0);
                assert_abs_diff_eq!(a2(v, l, lam0), reference, epsilon = 1e-12);
            }
        }
    }
    // v = 2, lambda0 = 0 collapses to the single factor 1/m(l)^2
    let m = m_ref(1.0);
    assert_abs_diff_eq!(a2(2, 1.0, 0.0), 1.0 / (m * m), epsilon = 1e-12);
    assert_abs_diff_eq!(a2(3, 1.0, 0.1), 1.2105255557277188, epsilon = 1e-12);
}

#[test]
fn a2_monotone_in_valence_and_cuff_length() {
    assert!(a2(3, 1.0, 0.1) > a2(2, 1.0, 0.1));
    assert!(a2(4, 1.0, 0.1) > a2(3, 1.0, 0.1));
    assert!(a2(3, 2.0, 0.1) > a2(3, 1.0, 0.1));
    assert!(a2(3, 1.0, 0.1) > a2(3, 0.5, 0.1));
}

#[test]
fn a_doubleprime_matches_collar_identity() {
    for &lam1 in &[0.1, 0.3, 1.0] {
        for &l in &[0.3, 1.0, 2.0] {
            let reference = lam1 * (l / 4.0) / (l / 2.0).sinh();
            assert_abs_diff_eq!(a_doubleprime(lam1, l), reference, epsilon = 1e-12);
        }
    }
}

#[test]
fn a_tripleprime_matches_independent_minimizer() {
    for &l in &[0.5, 1.0, 2.0] {
        let r_star = golden_ref(ratio_ref, 1e-8, m_ref(l), 1e-10);
        let reference = l / (8.0 * PI) * ratio_ref(r_star);
        assert_abs_diff_eq!(a_tripleprime(l), reference, epsilon = 1e-11);
        // the minimum sits at the collar end of the window
        assert_abs_diff_eq!(r_star, m_ref(l), epsilon = 1e-8);
    }
}

#[test]
fn a_tripleprime_frozen_regression() {
    assert_abs_diff_eq!(a_tripleprime(1.0), 0.036489526222525534, epsilon = 1e-11);
}

#[test]
fn a_tripleprime_small_r_ratio_diverges() {
    // the ratio grows like 1/r near 0, so the window's open end never wins
    assert!(collar_energy_ratio(1e-4) > collar_energy_ratio(m_ref(1.0)));
    assert!(collar_energy_ratio(1e-4) > 1e3);
}

#[test]
fn a_tripleprime_linear_in_l_on_fixed_window() {
    let w = m_ref(1.0);
    let half = a_tripleprime_on(0.5, w);
    let full = a_tripleprime_on(1.0, w);
    assert_abs_diff_eq!(full, 2.0 * half, epsilon = 1e-12);
    // default windows end at m(l), which moves with l, so default values
    // are not proportional
    assert!(a_tripleprime(1.0) / a_tripleprime(0.5) > 2.1);
}

#[test]
fn a1_matches_reference_evaluation() {
    for &eta in &[0.05, 0.2, 0.3] {
        for &lam1 in &[0.05, 0.3, 1.0] {
            if eta > lam1 {
                continue; // the gap never exceeds the second eigenvalue
            }
            for &l in &[0.5, 1.0, 2.0] {
                for &psi in &[0.2, 0.5] {
                    assert_abs_diff_eq!(
                        a1(eta, lam1, l, psi),
                        a1_ref(eta, lam1, l, psi),
                        epsilon = 1e-12
                    );
                }
            }
        }
    }
}

#[test]
fn a1_frozen_pipeline_regression() {
    assert_abs_diff_eq!(a1(0.3, 0.3, 1.0, 0.5), 3.9646367304241472e-4, epsilon = 1e-15);
}

#[test]
fn a1_zero_cuff_trace_degenerates_with_flag() {
    let parts = a1_parts(0.3, 0.3, 1.0, 0.0);
    assert_eq!(parts.value, 0.0);
    assert!(parts.degenerate);
    assert!(!a1_parts(0.3, 0.3, 1.0, 0.5).degenerate);
    assert_eq!(a1(0.3, 0.3, 1.0, 0.0), 0.0);
}

#[test]
fn a1_increases_in_gap_at_fixed_lambda1() {
    let lam1 = 0.3;
    assert!(a1(0.1, lam1, 1.0, 0.5) < a1(0.2, lam1, 1.0, 0.5));
    assert!(a1(0.2, lam1, 1.0, 0.5) < a1(0.3, lam1, 1.0, 0.5));
}

#[test]
fn bounded_decomposition_matches_reference_evaluation() {
    let (upper, lower) = bounded_decomposition_bounds(0.5, 2.0, 3, 0.2).unwrap();
    let m = m_ref(2.0);
    assert_abs_diff_eq!(upper, 2.0 * 2.0 / (m * m), epsilon = 1e-12);
    assert_abs_diff_eq!(upper, 6.7126880279341714, epsilon = 1e-12);
    assert_abs_diff_eq!(lower, 0.2 / (1.0 + 2.0 / (0.5 * 0.2)), epsilon = 1e-15);
    assert_abs_diff_eq!(lower, 0.0095238095238095247, epsilon = 1e-15);
}

#[test]
fn bounded_decomposition_rejects_unordered_volume_bounds() {
    assert!(bounded_decomposition_bounds(2.0, 2.0, 3, 0.2).is_err());
    assert!(bounded_decomposition_bounds(3.0, 2.0, 3, 0.2).is_err());
    assert!(bounded_decomposition_bounds(0.0, 2.0, 3, 0.2).is_err());
}

#[test]
fn bounded_decomposition_lower_is_continuous_at_equal_volumes() {
    // as k -> K the lower coefficient tends to eta^2/(1+eta)
    let eta = 0.2;
    let big_k = 2.0;
    let limit = eta * eta / (1.0 + eta);
    let (_, near) = bounded_decomposition_bounds(big_k - 1e-9, big_k, 3, eta).unwrap();
    assert_abs_diff_eq!(near, limit, epsilon = 1e-6);
}

#[test]
fn conservative_lower_variant_shrinks_by_tube_factor() {
    let (upper, displayed) = bounded_decomposition_bounds(0.5, 2.0, 3, 0.2).unwrap();
    let (upper_c, conservative) =
        bounded_decomposition_bounds_with(0.5, 2.0, 3, 0.2, BornLower::WithTubeFactor).unwrap();
    let (upper_d, as_displayed) =
        bounded_decomposition_bounds_with(0.5, 2.0, 3, 0.2, BornLower::AsDisplayed).unwrap();
    assert_eq!(as_displayed, displayed);
    assert_eq!(upper_c, upper);
    assert_eq!(upper_d, upper);
    assert!(conservative > 0.0 && conservative < displayed);
    // tube factor spelled out with sinh m(K) = 1/sinh(K/2)
    let sm = 1.0 / 1f64.sinh();
    let factor = (0.2 * 0.5 * sm).max(2.0 / (8.0 * PI) / sm.atan()) / (2.0 * PI);
    assert_abs_diff_eq!(conservative, displayed * factor.min(1.0), epsilon = 1e-12);
    assert_eq!(BornLower::default(), BornLower::WithTubeFactor);
}

proptest! {
    #[test]
    fn closed_forms_positive_and_match_reference(
        v in 2usize..6,
        l in 0.3f64..3.0,
        lam0 in 0.0f64..0.25,
        lam1 in 0.05f64..1.5,
        frac in 0.05f64..1.0,
        psi in 0.01f64..0.6,
    ) {
        let eta = frac * lam1;
        let m = m_ref(l);
        let a2_ref = (v as f64 - 1.0) * (1.0 / (m * m) + lam0);
        prop_assert!((a2(v, l, lam0) - a2_ref).abs() <= 1e-12);
        prop_assert!(a2(v, l, lam0) > 0.0);
        let a1_val = a1(eta, lam1, l, psi);
        prop_assert!((a1_val - a1_ref(eta, lam1, l, psi)).abs() <= 1e-12);
        prop_assert!(a1_val > 0.0);
    }
}
