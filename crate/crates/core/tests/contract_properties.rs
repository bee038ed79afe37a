mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use eps_core::contract::{self, ContractOffer, ModelParams};
use eps_core::oracle::{self, central_difference, SearchConfig};
use eps_core::sweep::{self, Execution};

fn valid_params() -> impl Strategy<Value = ModelParams> {
    (-2.3f64..4.6, 0.01f64..0.99).prop_map(|(ln_s0, u)| {
        let s0 = ln_s0.exp();
        ModelParams::new(0.0, s0, u * s0, 0.0).unwrap()
    })
}

proptest! {
    #[test]
    fn best_response_beats_dense_grid(
        s0 in 0.2f64..20.0,
        u in 0.05f64..0.95,
        dw in 0.01f64..30.0,
        w0 in 0.0f64..5.0,
        m in 0.0f64..10.0,
    ) {
        let p = ModelParams::new(w0, s0, u * s0, m).unwrap();
        let offer = ContractOffer::new(dw);
        let a_star = contract::best_response_effort(&p, &offer);
        let best = contract::agent_utility_host(&p, &offer, a_star).unwrap();
        for i in 0..=2000 {
            let a = 4.0 * a_star * i as f64 / 2000.0;
            let u_a = contract::agent_utility_host(&p, &offer, a).unwrap();
            prop_assert!(best - u_a >= -1e-12 * best.abs().max(1.0));
        }
    }

    #[test]
    fn participation_binds_at_equilibrium(p in valid_params(), m in 0.0f64..50.0) {
        let p = p.with_migration_cost(m).unwrap();
        let eq = contract::solve_spne(&p).unwrap();
        let scale = (p.c1() * eq.a_star * eq.a_star).max(1.0);
        prop_assert!((eq.agent_utility_host - eq.agent_reservation).abs() <= 1e-9 * scale);
        prop_assert!(eq.ir_binding);
        prop_assert!(eq.a_star >= 0.0);
        prop_assert!(eq.delta_w_star > p.s1());
    }

    #[test]
    fn first_order_condition_recovers_home_relevance(p in valid_params()) {
        let eq = contract::solve_spne(&p).unwrap();
        let s0 = contract::implied_home_relevance(p.s1(), 0.0, eq.delta_w_star);
        prop_assert!(((s0 - p.s0()) / p.s0()).abs() <= 1e-12);
    }

    #[test]
    fn firm_objective_is_concave_at_optimum(p in valid_params()) {
        prop_assert!(contract::firm_soc(&p) < 0.0);
        let eq = contract::solve_spne(&p).unwrap();
        let v = |dw: f64| {
            let a = contract::best_response_effort(&p, &ContractOffer::new(dw));
            contract::firm_objective_binding(&p, a)
        };
        let h = 1e-3 * eq.delta_w_star;
        let second = v(eq.delta_w_star + h) - 2.0 * v(eq.delta_w_star) + v(eq.delta_w_star - h);
        prop_assert!(second < 0.0);
    }

    #[test]
    fn premium_ignores_cost_and_is_homogeneous(p in valid_params(), m in 0.0f64..100.0) {
        let base = contract::solve_spne(&p).unwrap().delta_w_star;
        let costly = contract::solve_spne(&p.with_migration_cost(m).unwrap()).unwrap().delta_w_star;
        prop_assert_eq!(base, costly);
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = ModelParams::new(0.0, lambda * p.s0(), lambda * p.s1(), 0.0).unwrap();
            let dw = contract::solve_spne(&scaled).unwrap().delta_w_star;
            prop_assert!((dw - lambda * base).abs() <= 1e-12 * dw.abs());
        }
    }

    #[test]
    fn statics_signs(p in valid_params()) {
        let cs = contract::comparative_statics(&p);
        prop_assert!(cs.d_dw_d_s1 > 0.0);
        prop_assert!(cs.d_dw_d_s0 < 0.0);
        prop_assert!(cs.d_dw_d_delta < 0.0);
    }

    #[test]
    fn statics_match_central_differences(p in valid_params()) {
        let cs = contract::comparative_statics(&p);
        let (s0, s1) = (p.s0(), p.s1());
        let h = 1e-5 * s1.min(s0 - s1);
        let premium = |s0: f64, s1: f64| {
            contract::solve_spne(&ModelParams::new(0.0, s0, s1, 0.0).unwrap())
                .unwrap()
                .delta_w_star
        };
        let d_s1 = central_difference(|x| premium(s0, x), s1, h);
        let d_s0 = central_difference(|x| premium(x, s1), s0, h);
        let d_delta = central_difference(|d| premium(s1 + d, s1), s0 - s1, h);
        prop_assert!(((d_s1 - cs.d_dw_d_s1) / cs.d_dw_d_s1).abs() <= 1e-5);
        prop_assert!(((d_s0 - cs.d_dw_d_s0) / cs.d_dw_d_s0).abs() <= 1e-5);
        prop_assert!(((d_delta - cs.d_dw_d_delta) / cs.d_dw_d_delta).abs() <= 1e-5);
    }
}

#[test]
fn derivative_of_premium_in_home_relevance() {
    let d = central_difference(
        |s0| {
            contract::solve_spne(&ModelParams::new(0.0, s0, 1.0, 0.0).unwrap())
                .unwrap()
                .delta_w_star
        },
        2.0,
        1e-5,
    );
    assert_abs_diff_eq!(d, -1.0, epsilon = 1e-5);
}

#[test]
fn numeric_effort_matches_best_response() {
    let cfg = SearchConfig::default();
    for p in common::random_params(7, 40, 0.1, 100.0, 0.01, 0.99) {
        for dw in [0.1 * p.s0(), p.s0(), 3.0 * p.s0()] {
            let offer = ContractOffer::new(dw);
            let numeric = oracle::numeric_best_effort(&p, &offer, &cfg).unwrap();
            let closed = contract::best_response_effort(&p, &offer);
            assert!(
                (numeric - closed).abs() <= 1e-10,
                "{p:?} dw={dw}: {numeric} vs {closed}"
            );
        }
    }
}

#[test]
fn oracle_agrees_with_closed_form_over_log_uniform_sweep() {
    let params = common::random_params(11, 60, 0.1, 100.0, 0.01, 0.99);
    let cfg = SearchConfig {
        grid_points: 1001,
        ..Default::default()
    };
    let agree = sweep::oracle_agreement(Execution::Parallel, &params, &cfg).unwrap();
    assert_eq!(agree.points, 60);
    assert!(agree.max_delta_w_diff <= 1e-6, "{agree:?}");
    assert!(agree.max_effort_diff <= 1e-6, "{agree:?}");
}

#[test]
fn oracle_on_positive_home_wage() {
    // w0 > 0: the numeric search still lands on the general first-order solution
    let p = ModelParams::new(0.5, 4.0, 2.0, 0.0).unwrap();
    let closed = contract::solve_spne(&p).unwrap();
    let numeric = oracle::numeric_spne(
        &p,
        &SearchConfig {
            grid_points: 2001,
            ..Default::default()
        },
    )
    .unwrap();
    assert_abs_diff_eq!(closed.delta_w_star, numeric.delta_w_star, epsilon = 1e-6);
}

#[test]
fn golden_section_iteration_bound_holds() {
    for (lo, hi, tol) in [(0.0, 1.0, 1e-10), (-5.0, 300.0, 1e-8), (2.0, 2.5, 1e-12)] {
        let target = lo + 0.37 * (hi - lo);
        let obj = oracle::ByValue(move |x: f64| -(x - target).abs());
        let r = oracle::golden_section_max(&obj, lo, hi, tol);
        let bound = ((hi - lo) / tol).ln() / 1.618_033_988_749_895f64.ln();
        assert!(r.iterations as f64 <= bound.ceil() + 2.0);
        assert!((r.x - target).abs() <= tol);
    }
}
