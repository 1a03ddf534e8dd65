use fgm_crm::dependence::{pmf_to_theta, theta_to_pmf, ThetaSet};
use fgm_crm::ordering::{default_grid, stop_loss};
use fgm_crm::simulate::{simulate, Algorithm, SimOptions};
use fgm_crm::{
    expected_s, lst_s, mixed_erlang_aggregate, variance_s, BernoulliDependence, CollectiveRiskModel, Frequency,
    Severity, UnivariateLaw,
};
use proptest::prelude::*;

fn frequency() -> impl Strategy<Value = Frequency> {
    prop_oneof![
        (0.2f64..30.0).prop_map(|l| Frequency::poisson(l).unwrap()),
        (0.5f64..8.0, 0.1f64..0.9).prop_map(|(r, p)| Frequency::negative_binomial(r, p).unwrap()),
        (0.1f64..0.9).prop_map(|p| Frequency::geometric(p).unwrap()),
        (1u64..40, 0.05f64..0.95).prop_map(|(n, p)| Frequency::binomial(n, p).unwrap()),
    ]
}

fn erlang_severity() -> impl Strategy<Value = Severity> {
    prop_oneof![
        (0.01f64..2.0).prop_map(|b| Severity::exponential(b).unwrap()),
        (1usize..6, 0.01f64..2.0).prop_map(|(k, b)| Severity::erlang(k, b).unwrap()),
        (proptest::collection::vec(0.0f64..1.0, 1..6), 0.05f64..2.0).prop_map(|(w, b)| {
            let t: f64 = w.iter().sum::<f64>() + 1e-3;
            let mut m: Vec<f64> = w.iter().map(|x| x / t).collect();
            m.push(1e-3 / t);
            Severity::mixed_erlang(b, m).unwrap()
        }),
    ]
}

fn severity() -> impl Strategy<Value = Severity> {
    prop_oneof![
        erlang_severity(),
        (0.3f64..6.0, 0.01f64..2.0).prop_map(|(a, b)| Severity::gamma(a, b).unwrap()),
        (2.2f64..6.0, 1.0f64..1000.0).prop_map(|(a, l)| Severity::pareto(a, l).unwrap()),
        (1.0f64..100.0, 1.0f64..400.0).prop_map(|(m, v)| Severity::lognormal(m, v).unwrap()),
    ]
}

fn dependence() -> impl Strategy<Value = BernoulliDependence> {
    prop_oneof![
        Just(BernoulliDependence::Independent),
        Just(BernoulliDependence::Comonotone),
        Just(BernoulliDependence::CounterFreq),
        Just(BernoulliDependence::IndepFreqComonotoneSev),
        (0.01f64..0.99).prop_map(|a| BernoulliDependence::alpha_mixture(a).unwrap()),
    ]
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_pmf_round_trip(d in 2usize..=6, raw in proptest::collection::vec(-1.0f64..1.0, 64)) {
        let mut theta = ThetaSet::zeros(d).unwrap();
        let scale = 1.0 / (1usize << d) as f64;
        for mask in 0usize..(1 << d) {
            if mask.count_ones() >= 2 {
                let idx: Vec<usize> = (0..d).filter(|j| mask & (1 << j) != 0).collect();
                theta.set(&idx, raw[mask] * scale).unwrap();
            }
        }
        let pmf = theta_to_pmf(&theta).unwrap();
        let total: f64 = pmf.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for j in 0..d {
            prop_assert!((pmf.marginal_one(j) - 0.5).abs() < 1e-12);
        }
        let back = pmf_to_theta(&pmf).unwrap();
        for mask in 0usize..(1 << d) {
            prop_assert!((back.get_mask(mask) - theta.get_mask(mask)).abs() < 1e-12);
        }
    }

    #[test]
    fn frequency_order_stats_average_to_marginal(n in frequency()) {
        let top = n.max_n() as u64;
        for k in 0..=top.min(200) {
            let sum = n.order_pmf(1, k) + n.order_pmf(2, k);
            prop_assert!((sum - 2.0 * n.pmf(k)).abs() < 1e-13);
        }
        let m1 = n.order_moment(1, 1);
        let m2 = n.order_moment(2, 1);
        prop_assert!(m1 <= n.mean_value() + 1e-12 && n.mean_value() <= m2 + 1e-12);
        prop_assert!(rel_close(m1 + m2, 2.0 * n.mean_value(), 1e-10));
    }

    #[test]
    fn severity_order_stats_average_to_marginal(x in severity()) {
        let lo = x.order(1).mean().unwrap();
        let hi = x.order(2).mean().unwrap();
        let mu = x.mean().unwrap();
        prop_assert!(lo <= mu && mu <= hi);
        prop_assert!(rel_close(lo + hi, 2.0 * mu, 1e-8), "{lo} + {hi} vs 2 * {mu}");
        for q in [0.1, 0.5, 0.9] {
            let t = x.quantile_value(q);
            let avg = 0.5 * (x.order(1).cdf(t) + x.order(2).cdf(t));
            prop_assert!((avg - x.cdf(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn variance_components_sum_both_ways(n in frequency(), x in severity(), dep in dependence()) {
        let m = CollectiveRiskModel::new(n, x, dep).unwrap();
        let v = variance_s(&m).unwrap();
        let lhs = v.c_evar + v.c_ecov + v.c_vare;
        prop_assert!(rel_close(lhs, v.baseline + v.c_dep, 1e-9), "{lhs} vs {} + {}", v.baseline, v.c_dep);
        prop_assert!(rel_close(lhs, v.total, 1e-12));
        prop_assert!(v.total > 0.0);
    }

    #[test]
    fn conditional_laws_mix_back_to_marginal(n in frequency(), x in severity(), dep in dependence(), q in 0.01f64..0.99) {
        let m = CollectiveRiskModel::new(n.clone(), x.clone(), dep).unwrap();
        let t = x.quantile_value(q);
        let mix: f64 = (0..=n.max_n() as u64).map(|k| n.pmf(k) * m.conditional_sev_cdf(k, t).unwrap()).sum();
        prop_assert!((mix - x.cdf(t) * (1.0 - n.truncation())).abs() < 1e-9);
        let mean: f64 = (0..=n.max_n() as u64).map(|k| n.pmf(k) * m.conditional_mean(k).unwrap()).sum();
        prop_assert!(rel_close(mean, x.mean().unwrap() * (1.0 - n.truncation()), 1e-9));
    }

    #[test]
    fn mixed_erlang_aggregate_matches_moments(n in frequency(), x in erlang_severity(), dep in dependence()) {
        let m = CollectiveRiskModel::new(n, x, dep).unwrap();
        let agg = mixed_erlang_aggregate(&m).unwrap();
        prop_assert!(rel_close(agg.mean().unwrap(), expected_s(&m).unwrap().total, 1e-8));
        prop_assert!(rel_close(agg.variance(), variance_s(&m).unwrap().total, 1e-7));
        let grid = default_grid(&agg, &agg, 50).unwrap();
        let sl = stop_loss(&agg, &grid).unwrap();
        let scale = agg.mean().unwrap();
        prop_assert!(sl.is_nonincreasing(1e-10 * scale));
        prop_assert!(sl.is_convex(1e-9 * scale));
    }

    #[test]
    fn lst_slope_at_zero_is_mean(n in frequency(), x in severity(), dep in dependence()) {
        let m = CollectiveRiskModel::new(n, x, dep).unwrap();
        let e = expected_s(&m).unwrap().total;
        let t = 1e-6 / e.max(1e-12);
        let slope = (1.0 - lst_s(&m, t).unwrap()) / t;
        prop_assert!(rel_close(slope, e, 1e-4), "{slope} vs {e}");
        let l1 = lst_s(&m, 1.0 / e).unwrap();
        let l2 = lst_s(&m, 2.0 / e).unwrap();
        prop_assert!(0.0 < l2 && l2 < l1 && l1 < 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>(), alg in 1u8..=2) {
        let m = CollectiveRiskModel::new(
            Frequency::poisson(3.0).unwrap(),
            Severity::gamma(2.0, 0.5).unwrap(),
            BernoulliDependence::Comonotone,
        )
        .unwrap();
        let opts = SimOptions { algorithm: Algorithm::from_number(alg).unwrap(), recycle: true };
        let a = simulate(&m, 500, seed, opts).unwrap();
        let b = simulate(&m, 500, seed, opts).unwrap();
        prop_assert_eq!(&a.totals, &b.totals);
        for i in 0..a.reps() {
            let (n, claims, s) = a.record(i);
            prop_assert_eq!(claims.len() as u64, n);
            prop_assert!((claims.iter().sum::<f64>() - s).abs() <= 1e-9 * s.max(1.0));
        }
    }
}
