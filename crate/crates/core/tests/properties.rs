use bohrlab::functionals::{majorant_sum, rogosinski_pointwise, rogosinski_sum, RogosinskiVariant, SubordinationClass};
use bohrlab::polyroots::{isolate_root, rational, CertifiedRoot, RationalPolynomial};
use bohrlab::radii::{
    figure_certificates, solve_radius, t32_upper, Params, RadiusProblem, TheoremId,
};
use bohrlab::witnesses::{
    check_area_dilatation, check_coefficient_bounds, check_majorant_dilatation, check_subordinate_tail,
    sample_admissible, trial_spec,
};
use proptest::prelude::*;

const K_LADDER: [f64; 6] = [1.0, 1.5, 2.0, 4.0, 8.0, 100.0];

fn r(t: TheoremId, p: Params) -> f64 {
    solve_radius(&RadiusProblem::new(t, p).unwrap(), 1e-12).unwrap().estimate
}

fn k_of(big_k: f64) -> f64 {
    (big_k - 1.0) / (big_k + 1.0)
}

#[test]
fn radii_stay_in_their_intervals() {
    for big_k in K_LADDER {
        let k = k_of(big_k);
        let p = Params::with_k(big_k);
        let t31 = r(TheoremId::T31, p);
        assert!(t31 > 0.0 && t31 < 1.0 / (3.0 + 2.0 * k), "T31 K={big_k}: {t31}");
        let t32 = r(TheoremId::T32, p);
        assert!(t32 > 0.0 && t32 < t32_upper(k), "T32 K={big_k}: {t32}");
        for t in [TheoremId::T41, TheoremId::T41R, TheoremId::T44, TheoremId::T52] {
            let v = r(t, p);
            assert!(v > 0.0 && v < 1.0 / 3.0, "{t} K={big_k}: {v}");
        }
        let t51 = r(TheoremId::T51, p);
        assert!(t51 > 0.0 && t51 <= 1.0 / 3.0 + 1e-12, "T51 K={big_k}: {t51}");
    }
}

#[test]
fn radii_decrease_with_k() {
    use TheoremId::*;
    for t in [ThmD, ThmE, T31, T32, T41, T41R, T42, T43, T44, T51, T52] {
        let rs: Vec<f64> = K_LADDER.iter().map(|&k| r(t, Params::with_k(k))).collect();
        for w in rs.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{t}: {rs:?}");
        }
    }
}

#[test]
fn area_weight_shrinks_the_radius() {
    for t in [TheoremId::T41, TheoremId::T42] {
        for big_k in [1.0, 2.0, 5.0] {
            let rs: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 5.0]
                .iter()
                .map(|&mu| r(t, Params::with_k_mu(big_k, mu)))
                .collect();
            for w in rs.windows(2) {
                assert!(w[1] < w[0], "{t} K={big_k}: {rs:?}");
            }
        }
    }
}

#[test]
fn classical_reductions() {
    // harmonic radii collapse to the analytic ones at K = 1
    assert!((r(TheoremId::ThmE, Params::default()) - (3.0 - 8f64.sqrt())).abs() < 1e-12);
    assert!((r(TheoremId::T31, Params::default()) - r(TheoremId::ThmF, Params::default())).abs() < 1e-12);
    assert!((r(TheoremId::T32, Params::default()) - r(TheoremId::ThmG, Params::default())).abs() < 1e-10);
    assert!((r(TheoremId::ThmH, Params::with_k_alpha(1.0, 1.0)) - 1.0 / 3.0).abs() < 1e-12);
    // bounded analytic: R_1 = √5 − 2
    assert!((r(TheoremId::ThmA, Params::default()) - (5f64.sqrt() - 2.0)).abs() < 1e-10);
    let b = Params { a0: 0.5, ..Params::default() };
    assert!((r(TheoremId::ThmB, b) - 0.4).abs() < 1e-12);
}

#[test]
fn figure_claims_hold() {
    let certs = figure_certificates().unwrap();
    assert_eq!(certs.len(), 4);
    assert!(certs.iter().all(|c| c.passed), "{certs:?}");
    // F1 at k = 1/2 by direct evaluation
    let k: f64 = 0.5;
    let r1 = (1.0 + k - (4.0 * k - 3.0 * k * k).sqrt()) / (4.0 * k * k - 2.0 * k + 1.0);
    assert!(r1 - 0.25 > 0.0);
}

#[test]
fn certificate_json_round_trip() {
    let p = RationalPolynomial::from_integers(&[1, -3, -5, 3]);
    let root = isolate_root(&p, &rational(0, 1), &rational(1, 3), 1e-12).unwrap();
    let text = serde_json::to_string(&root).unwrap();
    let back: CertifiedRoot = serde_json::from_str(&text).unwrap();
    assert_eq!(root, back);
    assert_eq!(back.recheck_sturm().unwrap().unwrap(), 1);
}

fn sample_classes() -> impl Strategy<Value = SubordinationClass> {
    prop_oneof![
        Just(SubordinationClass::Convex),
        Just(SubordinationClass::Univalent),
        (1.0f64..=2.0).prop_map(|alpha| SubordinationClass::Concave { alpha }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_pairs_satisfy_the_lemmas(
        class in sample_classes(),
        big_k in 1.0f64..20.0,
        seed in any::<u64>(),
        index in 0usize..1000,
    ) {
        let spec = trial_spec(class, big_k, seed, index);
        let pair = sample_admissible(&spec, 96).unwrap();
        for r in [0.1, 0.2, 0.3] {
            check_area_dilatation(&pair, r).unwrap();
        }
        for r in [0.05, 0.2, 1.0 / 3.0] {
            check_majorant_dilatation(&pair, r).unwrap();
            for n in [1, 2, 5] {
                check_subordinate_tail(&pair, n, r).unwrap();
            }
        }
        check_coefficient_bounds(&pair).unwrap();
    }

    #[test]
    fn cauchy_schwarz_bound_on_coanalytic_sums(
        seed in any::<u64>(),
        big_k in 1.0f64..10.0,
        r in 0.01f64..0.45,
    ) {
        let pair = sample_admissible(&trial_spec(SubordinationClass::Univalent, big_k, seed, 0), 64).unwrap();
        let lhs = pair.b.abs_sum(r, 1, 0, 1, 1);
        let sq = pair.b.abs_sum(r, 1, 0, 1, 2);
        let geo: f64 = (1..=64).map(|n| r.powi(n)).sum();
        prop_assert!(lhs <= (sq * geo).sqrt() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn surrogate_dominates_pointwise(seed in any::<u64>(), r in 0.05f64..0.45) {
        let pair = sample_admissible(&trial_spec(SubordinationClass::Convex, 2.0, seed, 1), 64).unwrap();
        for v in [RogosinskiVariant::WithHAbs, RogosinskiVariant::WithHAndHPrime] {
            let surrogate = rogosinski_sum(&pair, r, v).unwrap().upper();
            // the surrogate charges |φ(0)| separately and the pointwise one includes a_0
            prop_assert!(rogosinski_pointwise(&pair, r, v, 48) <= surrogate + 1e-12);
        }
    }

    #[test]
    fn majorant_is_monotone_in_r(seed in any::<u64>(), a in 0.01f64..0.2, d in 0.01f64..0.2) {
        let pair = sample_admissible(&trial_spec(SubordinationClass::Univalent, 3.0, seed, 2), 64).unwrap();
        let lo = majorant_sum(&pair, a, 1).unwrap().value;
        let hi = majorant_sum(&pair, a + d, 1).unwrap().value;
        prop_assert!(lo <= hi);
    }

    #[test]
    fn t42_matches_its_closed_form(big_k in 1.0f64..50.0) {
        let v = r(TheoremId::T42, Params::with_k_mu(big_k, 0.0));
        prop_assert!((v - (big_k + 1.0) / (5.0 * big_k + 1.0)).abs() < 1e-10);
    }
}
