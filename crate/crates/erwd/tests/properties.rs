//! Property tests over randomized inputs.

use proptest::prelude::*;

use erwd::analytic::mixture::{Component, ComponentKind, MixtureLaw};
use erwd::mc::EnsembleStats;
use erwd::params::{FyTable, InitialLaw, MemoryRegime, ModelParams, ZeroRecallPolicy};
use erwd::rng::RngStream;
use erwd::verify::ks_mixed;
use erwd::walk::simulate;

fn arb_params() -> impl Strategy<Value = ModelParams> {
    (0.05f64..0.9, 0.05f64..0.9)
        .prop_filter_map("interior simplex point", |(p, q)| {
            let r = 1.0 - p - q;
            (r > 0.05).then(|| ModelParams::new(p, q, r).unwrap())
        })
}

fn arb_regime() -> impl Strategy<Value = MemoryRegime> {
    prop::sample::select(MemoryRegime::ALL.to_vec())
}

fn arb_policy() -> impl Strategy<Value = ZeroRecallPolicy> {
    prop::sample::select(ZeroRecallPolicy::ALL.to_vec())
}

fn arb_mixture() -> impl Strategy<Value = MixtureLaw> {
    prop::collection::vec(
        (0.01f64..1.0, -3.0f64..3.0, prop::option::of(0.01f64..4.0)),
        1..5,
    )
    .prop_map(|raw| {
        let total: f64 = raw.iter().map(|(w, _, _)| w).sum();
        let components = raw
            .into_iter()
            .map(|(w, loc, var)| Component {
                weight: w / total,
                kind: match var {
                    Some(variance) => ComponentKind::Gaussian { mean: loc, variance },
                    None => ComponentKind::PointMass { location: loc },
                },
            })
            .collect();
        MixtureLaw::new(components).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectory_sums_and_bounds(
        params in arb_params(),
        regime in arb_regime(),
        policy in arb_policy(),
        seed in any::<u64>(),
        n in 1usize..120,
    ) {
        let t = simulate(&params, regime, policy, InitialLaw::ThreePoint, n,
                         &RngStream::new(seed, 0)).unwrap();
        prop_assert_eq!(t.len(), n);
        let mut acc = 0i64;
        for (k, (&step, &sum)) in t.steps.iter().zip(&t.sums).enumerate() {
            prop_assert!(step == -1 || step == 0 || step == 1);
            acc += step as i64;
            prop_assert_eq!(acc, sum);
            prop_assert!(sum.unsigned_abs() as usize <= k + 1);
        }
    }

    #[test]
    fn last_step_propagate_tail_is_frozen(
        params in arb_params(),
        seed in any::<u64>(),
        n in 2usize..150,
    ) {
        let t = simulate(&params, MemoryRegime::LastStep, ZeroRecallPolicy::Propagate,
                         InitialLaw::ThreePoint, n, &RngStream::new(seed, 1)).unwrap();
        if let Some(first) = t.steps.iter().position(|&s| s == 0) {
            prop_assert!(t.steps[first..].iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn mixture_cdf_is_a_distribution_function(law in arb_mixture(), xs in prop::collection::vec(-6.0f64..6.0, 2..20)) {
        let mut xs = xs;
        xs.sort_by(|a, b| a.total_cmp(b));
        let mut prev = 0.0;
        for &x in &xs {
            let f = law.cdf(x);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
            prop_assert!(f >= prev - 1e-12);
            prop_assert!(law.cdf_left(x) <= f + 1e-12);
            prev = f;
        }
        prop_assert!((law.moment(0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_quantile_is_a_generalized_inverse(law in arb_mixture(), u in 0.01f64..0.99) {
        let x = law.quantile(u).unwrap();
        // F(Q(u)) >= u, and anything strictly below Q(u) has F < u
        prop_assert!(law.cdf(x) >= u - 1e-9);
        prop_assert!(law.cdf(x - 1e-6) < u + 1e-9 || law.cdf_left(x) < u + 1e-9);
    }

    #[test]
    fn ensemble_merge_is_associative_on_random_partitions(
        values in prop::collection::vec(-5.0f64..5.0, 3..60),
        cut_a in 0usize..60,
        cut_b in 0usize..60,
    ) {
        let a = cut_a.min(values.len());
        let b = cut_b.min(values.len() - a) + a;
        let whole = EnsembleStats::from_values(&values, 0);
        let left = EnsembleStats::from_values(&values[..a], 0)
            .merge(EnsembleStats::from_values(&values[a..b], 0))
            .merge(EnsembleStats::from_values(&values[b..], 0));
        let right = EnsembleStats::from_values(&values[..a], 0).merge(
            EnsembleStats::from_values(&values[a..b], 0)
                .merge(EnsembleStats::from_values(&values[b..], 0)),
        );
        prop_assert!((whole.mean() - left.mean()).abs() <= 1e-12);
        prop_assert!((whole.mean() - right.mean()).abs() <= 1e-12);
        prop_assert!((whole.second_moment() - left.second_moment()).abs() <= 1e-12);
        prop_assert!((left.variance() - right.variance()).abs() <= 1e-12);
        prop_assert_eq!(whole.samples(), left.samples());
    }

    #[test]
    fn ks_is_invariant_under_sample_permutation(
        sample in prop::collection::vec(-4.0f64..4.0, 1..80),
        rotate in 0usize..80,
    ) {
        let law = MixtureLaw::gaussian(0.0, 1.0);
        let base = ks_mixed(&sample, &law).unwrap();
        let mut rotated = sample.clone();
        rotated.rotate_left(rotate % sample.len().max(1));
        prop_assert_eq!(base, ks_mixed(&rotated, &law).unwrap());
    }

    #[test]
    fn multiplier_tables_compose_like_products(
        v1 in prop::collection::vec((-3.0f64..3.0, 0.05f64..1.0), 1..4),
        v2 in prop::collection::vec((-3.0f64..3.0, 0.05f64..1.0), 1..4),
    ) {
        let normalize = |raw: Vec<(f64, f64)>| {
            let total: f64 = raw.iter().map(|(_, w)| w).sum();
            FyTable::new(raw.into_iter().map(|(v, w)| (v, w / total)).collect()).unwrap()
        };
        let a = normalize(v1);
        let b = normalize(v2);
        let ab = a.compose(&b);
        let total: f64 = ab.entries().iter().map(|(_, w)| w).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!((ab.mean() - a.mean() * b.mean()).abs() < 1e-12);
        prop_assert!((ab.second_moment() - a.second_moment() * b.second_moment()).abs() < 1e-12);
    }
}
