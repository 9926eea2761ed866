use wrl_core::jamming::{
    alternative_jamming_power, eavesdropper_rate, ks_critical_value_5pct, ks_two_sample, max_jamming_power,
    simulate_jamming, JammingScenario,
};
use wrl_core::Limits;

/// KS statistic separating resolvable from visibly discrete codebook noise
/// at `n = 8`, `σ² = 1`, `ρ = 3` with 10⁵ samples.
const PINNED_KS_THRESHOLD: f64 = 0.015;

#[test]
fn bound_examples_are_exact() {
    assert_eq!(max_jamming_power(1.0, 1.0).unwrap(), 3.0);
    assert_eq!(max_jamming_power(2.0, 0.5).unwrap(), 2.0);
    assert_eq!(max_jamming_power(4.0, 0.0).unwrap(), 0.0);
    assert!(max_jamming_power(0.0, 1.0).is_err());
    assert!(max_jamming_power(1.0, -0.1).is_err());
}

#[test]
fn bound_inverts_the_gaussian_rate() {
    for sigma2 in [0.5, 1.0, 3.0] {
        for h in [0.1, 0.7, 1.5, 3.0] {
            let rho = max_jamming_power(sigma2, h).unwrap();
            assert!((0.5 * (1.0 + rho / sigma2).log2() - h).abs() < 1e-12);
            assert!((rho - sigma2 * (2f64.powf(2.0 * h) - 1.0)).abs() <= 1e-12 * rho.max(1.0));
        }
    }
}

#[test]
fn bound_is_increasing_and_convex() {
    let hs: Vec<f64> = (0..=60).map(|i| i as f64 * 0.05).collect();
    for sigma2 in [0.25, 1.0, 2.0] {
        let rho: Vec<f64> = hs.iter().map(|&h| max_jamming_power(sigma2, h).unwrap()).collect();
        for w in rho.windows(2) {
            assert!(w[1] > w[0]);
        }
        for w in rho.windows(3) {
            assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-12);
        }
    }
}

#[test]
fn eavesdropper_rate_falls_with_more_randomness() {
    let mut last = f64::INFINITY;
    for i in 0..=30 {
        let rho = max_jamming_power(1.0, i as f64 * 0.1).unwrap();
        let r = eavesdropper_rate(10.0, 1.0, rho);
        assert!(r < last);
        last = r;
    }
}

#[test]
fn candidate_formulas_agree_only_at_half_a_bit() {
    let s = JammingScenario::new(1.0, 0.5).unwrap();
    assert!(s.formula_discrepancy() < 1e-12);
    assert_eq!(alternative_jamming_power(1.0, 0.5), 1.0);
    let s = JammingScenario::new(1.0, 1.0).unwrap();
    assert_eq!(s.alternative_bound(), 2.0);
    assert!(s.formula_discrepancy() > 0.01);
    assert_eq!(s.to_csv(), "1,1,3");
}

#[test]
fn ks_statistic_basics() {
    let a = [0.1, 0.2, 0.3];
    assert_eq!(ks_two_sample(&a, &a), 0.0);
    assert_eq!(ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]), 1.0);
    assert!((ks_critical_value_5pct(100, 100) - 1.358 * 0.02f64.sqrt()).abs() < 1e-15);
}

#[test]
fn no_jamming_is_indistinguishable_from_noise() {
    let l = Limits::default();
    let sim = simulate_jamming(1.0, 0.0, 8, 0.5, 100_000, 0, &l).unwrap();
    assert!(sim.ks_stat < ks_critical_value_5pct(100_000, 100_000));
}

#[test]
fn codebook_rate_governs_the_fit() {
    let l = Limits::default();
    let resolvable = 0.5 * 4f64.log2() + 0.25;
    let high = simulate_jamming(1.0, 3.0, 8, resolvable, 100_000, 0, &l).unwrap();
    let low = simulate_jamming(1.0, 3.0, 8, 0.1, 100_000, 0, &l).unwrap();
    assert_eq!(high.codewords, 1024);
    assert_eq!(low.codewords, 2);
    assert!(high.ks_stat < PINNED_KS_THRESHOLD, "{}", high.ks_stat);
    assert!(low.ks_stat > PINNED_KS_THRESHOLD, "{}", low.ks_stat);
}

#[test]
fn simulation_is_seed_deterministic() {
    let l = Limits::default();
    let a = simulate_jamming(1.0, 2.0, 6, 0.5, 5_000, 42, &l).unwrap();
    let b = simulate_jamming(1.0, 2.0, 6, 0.5, 5_000, 42, &l).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
    let c = simulate_jamming(1.0, 2.0, 6, 0.5, 5_000, 43, &l).unwrap();
    assert_ne!(a.ks_stat, c.ks_stat);
}

#[test]
fn simulation_respects_the_codebook_guard() {
    let l = Limits::default();
    let err = simulate_jamming(1.0, 1.0, 30, 1.0, 10, 0, &l).unwrap_err();
    assert!(err.is_resource_limit());
}
