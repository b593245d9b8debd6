use num_bigint::BigInt;
use proptest::prelude::*;

use maxavg::reduced::{chain_gradient, minimize_chain, projected_residual, t_chain, t_noncyclic};
use maxavg::structure::{build_poset, full_maximal_start, has_distinct_averages, m_intervals, rotation_majorizes};
use maxavg::sums::{max_avg_sum, sum_with_radii};
use maxavg::{BigRational, IndexInterval, OptimizerConfig, PeriodicTuple, RadiusTuple, SimplexVector};

fn float_tuple() -> impl Strategy<Value = PeriodicTuple> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => 0.0f64..10.0], 1..30)
        .prop_filter_map("needs a positive entry", |v| PeriodicTuple::new(v).ok())
}

fn rational_tuple() -> impl Strategy<Value = PeriodicTuple<BigRational>> {
    prop::collection::vec((0i64..1000, 1i64..20), 1..9).prop_filter_map("needs a positive entry", |v| {
        PeriodicTuple::new(v.into_iter().map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect()).ok()
    })
}

fn simplex_point() -> impl Strategy<Value = SimplexVector> {
    prop::collection::vec(0.01f64..1.0, 1..10).prop_map(|v| SimplexVector::normalized(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn equivalent_intervals_share_averages(x in float_tuple(), a in -40i64..40, len in 1usize..60, k in -3i64..3) {
        let n = x.len() as i64;
        let i = IndexInterval::new(a, a + len as i64 - 1).unwrap();
        let avg = x.interval_average(i);
        let shifted = x.interval_average(i.shifted(k * n));
        prop_assert!((avg - shifted).abs() <= 1e-12 * avg.abs().max(1.0));
    }

    #[test]
    fn min_of_maximal_function_is_average(x in rational_tuple()) {
        let lo = (1..=x.len() as i64).map(|i| x.right_maximal(i)).min().unwrap();
        prop_assert_eq!(lo, x.mean());
    }

    #[test]
    fn maximal_sum_is_an_envelope(x in float_tuple(), seed in prop::collection::vec(1usize..60, 30)) {
        let n = x.len();
        let r = RadiusTuple::new(seed[..n].iter().map(|&s| (s - 1) % (2 * n) + 1).collect()).unwrap();
        let best = max_avg_sum(&x).value;
        if let Ok(s) = sum_with_radii(&x, &r) {
            prop_assert!(s >= best - 1e-12 * best);
        }
        prop_assert!(best >= 1.0 - 1e-12 && best <= n as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn generic_tuples_have_a_tree(x in rational_tuple()) {
        prop_assume!(has_distinct_averages(&x));
        let n = x.len();
        let p = build_poset(&x).unwrap();
        prop_assert!(p.is_tree());
        prop_assert_eq!(m_intervals(&x).iter().filter(|m| m.kappa == n - 1).count(), 1);
        let strict: Vec<usize> = (1..=n).filter(|&s| rotation_majorizes(&x, s as i64)).collect();
        prop_assert_eq!(strict, vec![full_maximal_start(&x)]);
    }

    #[test]
    fn chain_dominates_noncyclic(x in simplex_point(), p in 0.01f64..2.0) {
        let c = t_chain(&x, p).unwrap();
        let t = t_noncyclic(&x, p).unwrap();
        prop_assert!(c >= t * (1.0 - 1e-12));
    }

    #[test]
    fn minimizer_beats_random_points(x in simplex_point(), p in 0.05f64..1.0) {
        let s = minimize_chain(x.len(), p, &OptimizerConfig::default()).unwrap();
        prop_assert!(s.value <= t_chain(&x, p).unwrap() * (1.0 + 1e-12));
        let (res, scale) = projected_residual(s.minimizer.tail(), p);
        prop_assert!(res <= 1e-10 * scale);
    }

    #[test]
    fn gradient_is_finite_on_interior(x in simplex_point(), p in 0.01f64..1.0) {
        prop_assert!(chain_gradient(x.tail(), p).iter().all(|g| g.is_finite()));
    }
}

#[test]
fn public_types_are_thread_safe() {
    fn check<T: Send + Sync>() {}
    check::<PeriodicTuple>();
    check::<PeriodicTuple<BigRational>>();
    check::<maxavg::IntervalPoset<BigRational>>();
    check::<maxavg::ReducedSolution>();
    check::<maxavg::SubsetCollectionSystem>();
    check::<maxavg::Error>();
}
