mod support;

use proptest::prelude::*;

use peu_core::ellsberg::{monte_carlo, strategy_hurwicz, win_probability, PayoffSchedule, Strategy, UrnComposition};
use peu_core::prospects::{own_wellbeing, Pessimism};
use peu_core::sequential::{detect_violations, plan_value, simulate, AgentPolicy, DecisionTree};
use peu_core::social::{compare, peu_value, PeuParams};
use support::{chance_precise, config, option, option_with, params, pool, prospect};

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hurwicz_monotone_in_alpha(p in prospect(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let u = own_wellbeing(0);
        let bounds = p.eu_bounds(&u);
        let v_lo = p.hurwicz(Pessimism::new(lo).unwrap(), &u);
        let v_hi = p.hurwicz(Pessimism::new(hi).unwrap(), &u);
        prop_assert!(v_hi <= v_lo + 1e-9);
        prop_assert!(bounds.min - 1e-9 <= v_hi && v_lo <= bounds.max + 1e-9);
        if bounds.max - bounds.min > 1e-6 && hi - lo > 1e-6 {
            prop_assert!(v_hi < v_lo);
        }
    }

    #[test]
    fn hurwicz_translation_equivariant(p in prospect(), a in 0.0..=1.0f64, k in -50.0..50.0f64) {
        let alpha = Pessimism::new(a).unwrap();
        let u = own_wellbeing(0);
        let shifted = p.shifted(k);
        prop_assert!((shifted.hurwicz(alpha, &u) - p.hurwicz(alpha, &u) - k).abs() < 1e-9);
        let (b0, b1) = (p.eu_bounds(&u), shifted.eu_bounds(&u));
        prop_assert!((b1.min - b0.min - k).abs() < 1e-9 && (b1.max - b0.max - k).abs() < 1e-9);
    }

    #[test]
    fn verdict_translation_invariant(x in option("x"), y in option("y"), params in params(), k in -50.0..50.0f64) {
        let v = compare(&x, &y, &params).unwrap();
        let w = compare(&x.shifted(k), &y.shifted(k), &params).unwrap();
        prop_assert!((v.margin - w.margin).abs() < 1e-7);
        if v.margin.abs() > 1e-7 {
            prop_assert_eq!(v.relation, w.relation);
        }
    }

    #[test]
    fn ambiguous_pair_color_symmetric(p in 0.0..=1.0f64) {
        let a = win_probability(Strategy::AA, UrnComposition::new(p).unwrap());
        let b = win_probability(Strategy::AA, UrnComposition::new(1.0 - p).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a >= 0.5);
    }

    #[test]
    fn compare_antisymmetric(x in option("x"), y in option("y"), params in params()) {
        let xy = compare(&x, &y, &params).unwrap();
        let yx = compare(&y, &x, &params).unwrap();
        prop_assert_eq!(xy.margin, -yx.margin);
        prop_assert_eq!(xy.relation, yx.relation.mirrored());
    }

    #[test]
    fn global_planner_never_flagged(a in 0.0..=1.0f64, w_fail in 0.0..49.9f64) {
        let tree = DecisionTree::two_stage(PayoffSchedule::with_fail(w_fail).unwrap());
        let v = detect_violations(AgentPolicy::GlobalPlanner(Pessimism::new(a).unwrap()), &tree).unwrap();
        prop_assert!(!v.dominated_choice && !v.dynamic_inconsistency && !v.iia_violation);
        prop_assert_eq!(v.realized, Strategy::AA);
    }

    #[test]
    fn recursive_never_above_global(a in 0.0..=1.0f64) {
        let s = PayoffSchedule::default();
        let alpha = Pessimism::new(a).unwrap();
        prop_assert!(plan_value(Strategy::AA, alpha, &s).unwrap() <= strategy_hurwicz(Strategy::AA, alpha, &s) + 1e-9);
    }

    #[test]
    fn utilitarian_degeneracy(x in option_with("x", chance_precise()), a in 0.0..=1.0f64) {
        let params = PeuParams::new(a, 0.0, 0.0).unwrap();
        let total: f64 = (0..2).map(|i| x.joint.eu_bounds(own_wellbeing(i)).min).sum();
        prop_assert!((peu_value(&x, &params) - total).abs() < 1e-9);
    }

    #[test]
    fn monte_carlo_independent_of_threads(p in 0.0..=1.0f64, seed in any::<u64>(), s in 0usize..4, n in prop_oneof![9 => 1u64..2_000, 1 => 65_000u64..140_000]) {
        let strategy = Strategy::ALL[s];
        let comp = UrnComposition::new(p).unwrap();
        let one = pool(1).install(|| monte_carlo(strategy, comp, n, seed).unwrap());
        let four = pool(4).install(|| monte_carlo(strategy, comp, n, seed).unwrap());
        prop_assert_eq!(one.to_bits(), four.to_bits());
    }

    #[test]
    fn simulate_deterministic(a in 0.0..=1.0f64, p in 0.0..=1.0f64, seed in any::<u64>(), k in 0usize..3) {
        let alpha = Pessimism::new(a).unwrap();
        let policy = [AgentPolicy::Naive(alpha), AgentPolicy::Sophisticated(alpha), AgentPolicy::GlobalPlanner(alpha)][k];
        let tree = DecisionTree::two_stage(PayoffSchedule::default());
        let comp = UrnComposition::new(p).unwrap();
        let one = pool(1).install(|| simulate(policy, &tree, comp, seed).unwrap());
        let four = pool(4).install(|| simulate(policy, &tree, comp, seed).unwrap());
        prop_assert_eq!(one, four);
    }
}
