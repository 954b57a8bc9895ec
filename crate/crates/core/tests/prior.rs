mod common;

use compat_core::asymptotic::log_or_se;
use compat_core::prior::{augment_and_fit, prior_to_data, IntervalPrior, PriorData};
use compat_core::table::log_odds_ratio;
use compat_core::Table2x2;
use proptest::prelude::*;

fn non_sparse() -> impl Strategy<Value = Table2x2> {
    (10u64..150, 10u64..400, 10u64..150, 10u64..400).prop_map(|(a, b, c, d)| Table2x2::new(a, b, c, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mode_matches_grid_oracle(t in non_sparse(), cases in 50.0f64..500.0, shift in -1.5f64..1.5) {
        let l = log_odds_ratio::<f64>(&t);
        let sl = log_or_se::<f64>(&t).unwrap();
        let se_prior = (2.0 / cases).sqrt();
        let center = l + shift * (sl * sl + se_prior * se_prior).sqrt();
        prop_assume!((-0.9..1.9).contains(&l) && (-0.9..1.9).contains(&center));
        let pd = PriorData::from_cases(cases, center).unwrap();
        let fit = augment_and_fit(&t, Some(&pd)).unwrap();
        prop_assert!(fit.converged);
        let oracle = common::grid_posterior_mode(&t, center, pd.implied_se);
        prop_assert!((fit.log_or_posterior - oracle).abs() < 1e-3, "fit {} oracle {oracle}", fit.log_or_posterior);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn null_centered_prior_shrinks_toward_zero(
        (a, b, c, d) in (1u64..80, 1u64..300, 1u64..80, 1u64..300),
        cases in 1.0f64..400.0,
    ) {
        let t = Table2x2::new(a, b, c, d).unwrap();
        let l = log_odds_ratio::<f64>(&t);
        prop_assume!(l.abs() > 1e-9);
        let weak = augment_and_fit(&t, Some(&PriorData::from_cases(cases, 0.0).unwrap())).unwrap();
        let strong = augment_and_fit(&t, Some(&PriorData::from_cases(cases * 1.5, 0.0).unwrap())).unwrap();
        let m = weak.log_or_posterior;
        prop_assert!(m * l > 0.0 && m.abs() < l.abs(), "mode {m} L {l}");
        prop_assert!(strong.log_or_posterior.abs() <= m.abs() + 1e-12);
    }

    #[test]
    fn information_adds_for_non_sparse_tables(t in non_sparse(), cases in 2.0f64..500.0) {
        // Curvatures add at a shared mode; a conflicting prior moves the mode
        // to where the data carry different information, so center it on the data.
        let pd = PriorData::from_cases(cases, log_odds_ratio::<f64>(&t)).unwrap();
        let fit = augment_and_fit(&t, Some(&pd)).unwrap();
        let want = 1.0 / fit.frequentist_se.powi(2) + 1.0 / pd.implied_se.powi(2);
        let got = 1.0 / fit.se_posterior.powi(2);
        prop_assert!((got / want - 1.0).abs() < 0.10, "got {got} want {want}");
    }

    #[test]
    fn prior_interval_round_trips(lo in 0.05f64..5.0, width in 1.01f64..50.0, level in 0.5f64..0.99) {
        let prior = IntervalPrior::new(lo, lo * width, level).unwrap();
        let pd = prior_to_data(&prior).unwrap();
        let (l, u) = pd.implied_interval(level);
        prop_assert!((l / prior.lower - 1.0).abs() < 0.005);
        prop_assert!((u / prior.upper - 1.0).abs() < 0.005);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fit_converges_under_sharp_conflict(
        (a, b, c, d) in (0u64..5000, 0u64..5000, 0u64..5000, 0u64..5000),
        log_cases in -1.0f64..5.5,
        center in -10.0f64..10.0,
    ) {
        prop_assume!(a + b + c + d > 0);
        let t = Table2x2::new(a, b, c, d).unwrap();
        let pd = PriorData::from_cases(10f64.powf(log_cases), center).unwrap();
        let fit = augment_and_fit(&t, Some(&pd)).unwrap();
        prop_assert!(fit.converged && fit.log_or_posterior.is_finite() && fit.se_posterior.is_finite());
    }
}

#[test]
fn empty_prior_reproduces_the_frequentist_fit() {
    for t in [Table2x2::new(10, 110, 16, 464).unwrap(), Table2x2::new(3, 7, 40, 2).unwrap()] {
        let fit = augment_and_fit::<f64>(&t, None).unwrap();
        assert!((fit.log_or_posterior - log_odds_ratio::<f64>(&t)).abs() < 1e-8);
        assert_eq!(fit.se_posterior, fit.frequentist_se);
    }
}

#[test]
fn fit_json_round_trips_with_boundary_tag() {
    let t = Table2x2::new(5, 0, 3, 9).unwrap();
    let fit = augment_and_fit(&t, Some(&PriorData::from_cases(30.0f64, 0.0).unwrap())).unwrap();
    assert!(fit.frequentist_log_or.is_infinite());
    let s = serde_json::to_string(&fit).unwrap();
    let back: compat_core::AugmentedFit = serde_json::from_str(&s).unwrap();
    assert_eq!(back, fit);
}
