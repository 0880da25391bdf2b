//! Property tests for the search core and its companions.

use proptest::prelude::*;

use seqchar::oracle::{AnalyticCellModel, SkewDelayOracle};
use seqchar::sampling::{generate, Generator, QmcConfig};
use seqchar::search::{
    expand_bracket, expected_interval_length, search, solve_bias, Method, Probe, SearchConfig,
    SlopeHint,
};
use seqchar::stats::{norm_cdf, norm_quantile};

fn method_strategy() -> impl Strategy<Value = Method> {
    prop::sample::select(Method::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Every method on every reachable model: the bracket stays valid on
    /// every trace entry, lengths never grow, the final interval meets the
    /// tolerance, and the root matches the closed form.
    #[test]
    fn search_preserves_bracket_and_converges(
        method in method_strategy(),
        d0 in 5.0..20.0f64,
        lambda in 0.4..2.5f64,
        alpha in 0.5..4.0f64,
        root_frac in 0.5..0.95f64,
        l0_skew in -0.2..0.2f64,
        hold in prop::bool::ANY,
    ) {
        let root = root_frac * d0;
        let offset = lambda * (alpha / 0.1f64).ln();
        let (x_c, hint) = if hold {
            (root + offset, SlopeHint::Increasing)
        } else {
            (root - offset, SlopeHint::Decreasing)
        };
        let model = AnalyticCellModel::new(d0, x_c, lambda, alpha).with_fail_below(!hold);
        let probe = Probe::new(&model, model.threshold_delay(1.1));
        let cfg = SearchConfig::default();
        let l0 = 0.7 * d0 * (1.0 + l0_skew);
        let exp = expand_bracket(&probe, l0, 0.7 * d0, hint, &cfg).unwrap();
        prop_assert!(exp.bracket.lo_class.is_below() != exp.bracket.hi_class.is_below());
        prop_assert!(exp.bracket.lo <= root && root <= exp.bracket.hi);

        let result = search(method, &probe, exp.bracket.clone(), &cfg).unwrap();
        prop_assert!((result.root - root).abs() <= cfg.tau);
        let mut prev = exp.bracket.len();
        for e in &result.trace {
            let len = e.interval_length_after.unwrap();
            prop_assert!(len <= prev + 1e-12);
            prev = len;
        }
        prop_assert!(prev <= cfg.tau);
        // cost accounting: the model's counter saw exactly the traced calls
        prop_assert_eq!(
            model.calls(),
            exp.oracle_calls + result.oracle_calls
        );
    }

    /// The optimal bias never loses to the unbiased interpolation point,
    /// and the biased test point stays strictly inside the open interval.
    #[test]
    fn bias_optimality_and_interior(
        x0 in 0.001..0.999f64,
        log_sigma in -4.0..2.0f64,
    ) {
        let sigma = 10f64.powf(log_sigma);
        let eps = solve_bias(x0, sigma);
        let point = x0 + eps;
        prop_assert!(point >= 1e-6 - 1e-12 && point <= 1.0 - 1e-6 + 1e-12);
        let at_bias = expected_interval_length(x0, eps, sigma);
        let at_zero = expected_interval_length(x0, 0.0, sigma);
        prop_assert!(at_bias <= at_zero + 1e-12,
            "E[L](eps*) = {} vs E[L](0) = {}", at_bias, at_zero);
    }

    /// Large uncertainty always lands the test point at the midpoint.
    #[test]
    fn bias_midpoint_limit(x0 in 0.001..0.999f64, sigma in 100.0..10_000.0f64) {
        let point = x0 + solve_bias(x0, sigma);
        prop_assert!((point - 0.5).abs() <= 0.01);
    }

    /// The normal quantile inverts the CDF across the supported domain.
    #[test]
    fn quantile_inverts_cdf(p in 1e-12..1.0f64) {
        let x = norm_quantile(p);
        prop_assert!((norm_cdf(x) - p).abs() <= 1e-9);
    }

    /// Identical sampling configs give identical matrices; scrambled
    /// dimensions stay inside valid normal tails.
    #[test]
    fn sampling_is_deterministic(
        dimension in 1usize..24,
        count in 1usize..96,
        seed in prop::option::of(0u64..1000),
        sobol in prop::bool::ANY,
    ) {
        let cfg = QmcConfig {
            dimension,
            count,
            scramble_seed: seed,
            generator: if sobol { Generator::Sobol } else { Generator::Stratified },
        };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.len(), count);
        for row in &a {
            prop_assert_eq!(row.len(), dimension);
            for v in row {
                prop_assert!(v.is_finite() && v.abs() < 7.0);
            }
        }
    }
}
