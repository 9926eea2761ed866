mod oracles;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wrl_core::capacity::{achievable_rate_renyi, rate_curve, secrecy_capacity, upper_concave_envelope, RateCurvePoint};
use wrl_core::info::{is_degraded, is_less_capable, DEFAULT_DEGRADED_TOL};
use wrl_core::{Distribution, Kernel, WiretapChannel};

use oracles::{capacity_grid_search, h2};

fn bsc_pair() -> WiretapChannel {
    WiretapChannel::binary_symmetric_pair(0.1, 0.3).unwrap()
}

fn random_binary_channel(rng: &mut impl Rng) -> WiretapChannel {
    let row = |rng: &mut dyn rand::RngCore| {
        let a: f64 = rng.random();
        vec![a, 1.0 - a]
    };
    let main = Kernel::new(vec![row(rng), row(rng)]).unwrap();
    let eve = Kernel::new(vec![row(rng), row(rng)]).unwrap();
    WiretapChannel::from_marginals(&main, &eve).unwrap()
}

#[test]
fn degraded_bsc_pair_reaches_closed_form() {
    let exact = h2(0.3) - h2(0.1);
    let r = secrecy_capacity(&bsc_pair(), f64::INFINITY, 200).unwrap();
    assert!((r.rate - exact).abs() < 2e-3, "{} vs {exact}", r.rate);
    assert!((capacity_grid_search(&bsc_pair(), f64::INFINITY, 100) - exact).abs() < 2e-3);
    assert!(!r.constraint_active);
}

#[test]
fn budget_endpoints_and_shape() {
    let ch = bsc_pair();
    assert_eq!(secrecy_capacity(&ch, 0.0, 200).unwrap().rate, 0.0);
    let free = secrecy_capacity(&ch, f64::INFINITY, 200).unwrap().rate;
    let at_cap = secrecy_capacity(&ch, 1.0 - h2(0.3), 200).unwrap().rate;
    assert!((at_cap - free).abs() < 2e-3);

    let curve = rate_curve(&ch, 200).unwrap();
    let env = upper_concave_envelope(&curve).unwrap();
    let rates: Vec<f64> = (0..20)
        .map(|s| env.optimum(0.13 * s as f64 / 19.0).unwrap().rate)
        .collect();
    for w in rates.windows(2) {
        assert!(w[1] >= w[0] - 1e-12);
    }
    for w in rates.windows(3) {
        assert!(w[2] - 2.0 * w[1] + w[0] <= 1e-6);
    }
}

#[test]
fn mixture_realizes_reported_rate() {
    let ch = bsc_pair();
    let r = secrecy_capacity(&ch, 0.05, 100).unwrap();
    assert!(r.constraint_active);
    let point = |d: &Distribution| {
        let c = oracles::mutual_information_kl(d.probs(), ch.eve());
        (c, oracles::mutual_information_kl(d.probs(), ch.main()) - c)
    };
    let (c0, g0) = point(&r.inputs[0]);
    let (c1, g1) = point(&r.inputs[1]);
    let cost = r.lambda * c0 + (1.0 - r.lambda) * c1;
    let gain = r.lambda * g0 + (1.0 - r.lambda) * g1;
    assert!((cost - 0.05).abs() < 1e-9);
    assert!((gain - r.rate).abs() < 1e-9);
    assert!((r.randomness_used - 0.05).abs() < 1e-9);
}

#[test]
fn envelope_matches_direct_search_on_random_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let ch = random_binary_channel(&mut rng);
        for budget in [0.0, 0.05, 0.2, f64::INFINITY] {
            let env = secrecy_capacity(&ch, budget, 120).unwrap().rate;
            let grid = capacity_grid_search(&ch, budget, 120);
            assert!((env - grid).abs() <= 2.0 / 120.0, "budget {budget}: {env} vs {grid}");
            assert!(env >= grid - 1e-9);
        }
    }
}

#[test]
fn renyi_rate_uses_collision_entropy() {
    let ch = bsc_pair();
    let skewed = Distribution::new(vec![0.7, 0.1, 0.1, 0.1]).unwrap();
    let r = achievable_rate_renyi(&ch, &skewed, 10, 100).unwrap();
    assert!((r.budget - (skewed.renyi2() / 10.0 - 1e-9)).abs() < 1e-15);
    let direct = secrecy_capacity(&ch, r.budget, 100).unwrap();
    assert_eq!(r.rate(), direct.rate);
    let by_entropy = secrecy_capacity(&ch, skewed.entropy() / 10.0, 100).unwrap();
    assert!(r.rate() < by_entropy.rate);
}

fn arb_kernel(rows: usize, cols: usize) -> impl Strategy<Value = Kernel> {
    prop::collection::vec(prop::collection::vec(0.01f64..1.0, cols), rows).prop_map(|rows| {
        Kernel::new(
            rows.into_iter()
                .map(|r| {
                    let s: f64 = r.iter().sum();
                    r.into_iter().map(|x| x / s).collect()
                })
                .collect(),
        )
        .unwrap()
    })
}

fn arb_channel() -> impl Strategy<Value = WiretapChannel> {
    (2usize..4, 2usize..4, 2usize..4).prop_flat_map(|(nx, ny, nz)| {
        (arb_kernel(nx, ny), arb_kernel(nx, nz)).prop_map(|(m, e)| WiretapChannel::from_marginals(&m, &e).unwrap())
    })
}

fn arb_points() -> impl Strategy<Value = Vec<RateCurvePoint>> {
    prop::collection::vec((0.0f64..2.0, -1.0f64..1.0), 1..40).prop_map(|v| {
        v.into_iter()
            .map(|(x, y)| RateCurvePoint {
                randomness_cost: x,
                secrecy_gain: y,
                input: Distribution::uniform(2).unwrap(),
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelope_dominates_and_is_concave(points in arb_points()) {
        let env = upper_concave_envelope(&points).unwrap();
        for p in &points {
            let e = env.eval(p.randomness_cost).unwrap();
            prop_assert!(e >= p.secrecy_gain - 1e-12);
        }
        let v = env.vertices();
        for w in v.windows(2) {
            prop_assert!(w[1].randomness_cost > w[0].randomness_cost);
        }
        for w in v.windows(3) {
            let s1 = (w[1].secrecy_gain - w[0].secrecy_gain) / (w[1].randomness_cost - w[0].randomness_cost);
            let s2 = (w[2].secrecy_gain - w[1].secrecy_gain) / (w[2].randomness_cost - w[1].randomness_cost);
            prop_assert!(s2 <= s1 + 1e-9);
        }
        for vert in v {
            prop_assert!(points.iter().any(|p| p.randomness_cost == vert.randomness_cost
                && p.secrecy_gain == vert.secrecy_gain));
        }
    }

    #[test]
    fn finer_grid_never_lowers_capacity(ch in arb_channel(), budget in 0.0f64..1.5, res in 2usize..10) {
        let coarse = secrecy_capacity(&ch, budget, res).unwrap().rate;
        let fine = secrecy_capacity(&ch, budget, 2 * res).unwrap().rate;
        prop_assert!(fine >= coarse - 1e-12);
    }

    #[test]
    fn capacity_nondecreasing_in_budget(ch in arb_channel(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let r_lo = secrecy_capacity(&ch, lo, 12).unwrap().rate;
        let r_hi = secrecy_capacity(&ch, hi, 12).unwrap().rate;
        prop_assert!(r_hi >= r_lo - 1e-12);
        prop_assert!(r_lo >= -1e-12);
    }

    #[test]
    fn degraded_implies_less_capable(main in arb_kernel(2, 3), post in arb_kernel(3, 2)) {
        let eve = main.compose(&post).unwrap();
        let ch = WiretapChannel::from_marginals(&main, &eve).unwrap();
        prop_assert!(is_degraded(&ch, 1e-7).unwrap().is_degraded());
        prop_assert!(is_less_capable(&ch, 20).unwrap().holds());
    }
}

#[test]
fn non_degraded_pair_is_detected() {
    // Eve sees the input exactly, the main receiver does not.
    let ch = WiretapChannel::from_marginals(&Kernel::bsc(0.2).unwrap(), &Kernel::identity(2).unwrap()).unwrap();
    assert!(!is_degraded(&ch, DEFAULT_DEGRADED_TOL).unwrap().is_degraded());
    assert!(!is_less_capable(&ch, 20).unwrap().holds());
}
