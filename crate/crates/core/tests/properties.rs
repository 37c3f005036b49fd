mod common;

use common::{hybrid_instance, hybrid_instances, rel, rng};
use noma_mec::auxiliary::{allocate, eval_f, eval_f_second, rate_slope};
use noma_mec::{
    grid_min_delay, solve, solve_hnoma_dinkelbach, solve_hnoma_newton, EnergyRegime, Error,
    GridSpec, Mode, SolverConfig, System, SystemParams,
};
use proptest::prelude::*;
use rand::Rng;

fn params() -> impl Strategy<Value = SystemParams> {
    (1.0..10.0f64, 0.3..5.0f64, -2.3..2.3f64, -2.3..2.3f64).prop_map(|(d_m, ratio, lm, ln)| {
        SystemParams::new(ratio * d_m, d_m, lm.exp(), ln.exp()).unwrap()
    })
}

/// Params plus an energy log-uniform in `[E_oma_min / 2, 2 E2]`.
fn instance() -> impl Strategy<Value = (System, f64)> {
    (params(), 0.0..1.0f64).prop_map(|(p, u)| {
        let sys = System::new(p).unwrap();
        let lo = 0.5 * sys.e_oma_min();
        (sys, lo * (2.0 * sys.e2() / lo).powf(u))
    })
}

fn hybrid() -> impl Strategy<Value = (System, f64)> {
    (params(), 0.01..0.99f64).prop_map(|(p, u)| {
        let sys = System::new(p).unwrap();
        let e = sys.e1() * (sys.e2() / sys.e1()).powf(u);
        (sys, e)
    })
}

fn rank(r: EnergyRegime) -> u8 {
    match r {
        EnergyRegime::Infeasible => 0,
        EnergyRegime::OmaOnly => 1,
        EnergyRegime::Hybrid => 2,
        EnergyRegime::PureNoma => 3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn regimes_partition_and_grow_with_energy(p in params(), mut es in prop::collection::vec(0.0..5.0f64, 2..8)) {
        let sys = System::new(p).unwrap();
        es.sort_by(f64::total_cmp);
        let mut last = 0;
        for u in es {
            let e = sys.e2() * u;
            let r = sys.classify(e);
            let expected = if e < sys.e_oma_min() {
                EnergyRegime::Infeasible
            } else if e <= sys.e1() {
                EnergyRegime::OmaOnly
            } else if e < sys.e2() {
                EnergyRegime::Hybrid
            } else {
                EnergyRegime::PureNoma
            };
            prop_assert_eq!(r, expected);
            prop_assert!(rank(r) >= last);
            last = rank(r);
        }
    }

    #[test]
    fn thresholds_are_ordered(p in params()) {
        let sys = System::new(p).unwrap();
        prop_assert!(sys.e_oma_min() < sys.e1());
        prop_assert!(sys.e1() < sys.e2());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pure_noma_condition_is_tight_at_e2(p in params()) {
        let sys = System::new(p).unwrap();
        prop_assert_eq!(sys.classify(sys.e2()), EnergyRegime::PureNoma);
        let delivered = sys.shared_slot_nats(sys.e2() / sys.d_m());
        prop_assert!(rel(delivered, sys.n_nats()) <= 1e-9);
    }

    #[test]
    fn closed_form_spends_the_whole_budget((sys, e) in hybrid(), k in 0.0..6.0f64) {
        let mu = sys.mu_lb(e) * (1.0 + 10f64.powf(k - 3.0));
        let p = allocate(&sys, e, mu).unwrap();
        prop_assert!(p.p_n1 >= 0.0 && p.p_n2 > 0.0);
        prop_assert!(rel(sys.d_m() * p.p_n1 + p.p_n2 / mu, e) <= 1e-10);
    }

    #[test]
    fn f_decomposes_into_rate_terms((sys, e) in hybrid(), k in 0.0..6.0f64) {
        let mu = sys.mu_lb(e) * (1.0 + 10f64.powf(k - 3.0));
        let pt = eval_f(&sys, e, mu).unwrap();
        let a = (1.0 + sys.h_n_sq() * pt.powers.p_n2).ln();
        let shared = sys.d_m() * (1.0 + pt.powers.p_n1 * sys.h_n_sq() / sys.exp_ratio()).ln();
        let b = sys.n_nats() - shared;
        let f = a - mu * b;
        prop_assert!((pt.f - f).abs() <= 1e-10 * f.abs().max(a));
    }

    #[test]
    fn rate_slope_matches_separate_differences((sys, e) in hybrid(), k in 0.0..3.0f64) {
        let mu = sys.mu_lb(e) * (1.0 + 10f64.powf(k - 1.0));
        let h = 1e-6 * mu;
        let lo = eval_f(&sys, e, mu - h).unwrap();
        let hi = eval_f(&sys, e, mu + h).unwrap();
        let fd = (hi.a - lo.a) / (2.0 * h) - mu * (hi.b - lo.b) / (2.0 * h);
        let slope = rate_slope(&sys, e, mu);
        prop_assert!(slope > 0.0);
        prop_assert!(rel(fd, slope) <= 1e-5, "{} vs {}", fd, slope);
    }

    #[test]
    fn energy_saturates_in_every_feasible_regime((sys, e) in instance()) {
        let s = solve(&sys, e, &SolverConfig::default()).unwrap();
        match s.regime {
            EnergyRegime::Infeasible => prop_assert!(!s.is_feasible()),
            EnergyRegime::PureNoma => {
                let best = s.best.unwrap();
                prop_assert_eq!(best.mode, Mode::PureNoma);
                prop_assert_eq!(best.p_n1, e / sys.d_m());
                prop_assert_eq!(best.delay, sys.d_m());
            }
            _ if e > sys.e_oma_min() => {
                let best = s.best.unwrap();
                prop_assert!(rel(best.energy_used, e) <= 1e-9, "{} vs {}", best.energy_used, e);
                prop_assert!(best.delay > sys.d_m());
            }
            _ => {}
        }
    }

    #[test]
    fn converged_point_is_a_root_above_the_bracket((sys, e) in hybrid()) {
        let cfg = SolverConfig::default();
        for run in [solve_hnoma_dinkelbach(&sys, e, &cfg).unwrap(), solve_hnoma_newton(&sys, e, &cfg).unwrap()] {
            prop_assert!(run.mu_star > sys.mu_lb(e));
            let pt = eval_f(&sys, e, run.mu_star).unwrap();
            prop_assert!((pt.a - run.mu_star * pt.b).abs() <= cfg.delta);
            prop_assert!((run.allocation.t_n * run.mu_star - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn more_energy_never_hurts(p in params(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let sys = System::new(p).unwrap();
        let cfg = SolverConfig::default();
        let span = sys.e2() * 1.2 - sys.e_oma_min();
        let (lo, hi) = (a.min(b), a.max(b));
        let d_lo = solve(&sys, sys.e_oma_min() + (0.01 + lo) * span, &cfg).unwrap().delay.unwrap();
        let d_hi = solve(&sys, sys.e_oma_min() + (0.01 + hi) * span, &cfg).unwrap().delay.unwrap();
        prop_assert!(d_hi <= d_lo * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn grid_oracle_bounds_the_solver_from_above(p in params(), u in 0.05..0.99f64, hybrid in any::<bool>()) {
        let sys = System::new(p).unwrap();
        let e = if hybrid {
            sys.e1() * (sys.e2() / sys.e1()).powf(u)
        } else {
            sys.e_oma_min() + u * (sys.e1() - sys.e_oma_min())
        };
        let solver = solve(&sys, e, &SolverConfig::default()).unwrap().delay.unwrap();
        // p1 includes 0 and p2 excludes it, so these two grids nest.
        // A coarse grid may hold no feasible point near the OMA edge.
        let min_delay = |p1_points, p2_points| {
            let spec = GridSpec { p1_points, p2_points, ..GridSpec::default() };
            match grid_min_delay(&sys, e, &spec) {
                Ok(pt) => pt.delay,
                Err(Error::EmptyGrid { .. }) => f64::INFINITY,
                Err(other) => panic!("{other}"),
            }
        };
        let coarse = min_delay(51, 50);
        let fine = min_delay(101, 100);
        prop_assert!(coarse >= solver - 1e-9);
        prop_assert!(fine >= solver - 1e-9);
        prop_assert!(fine <= coarse + 1e-12);
    }
}

#[test]
fn f_is_concave_on_random_hybrid_instances() {
    let mut r = rng(0x00c0_ffee);
    for _ in 0..1000 {
        let (sys, e) = hybrid_instance(&mut r);
        let lb = sys.mu_lb(e);
        let pts: Vec<_> = (1..=16)
            .map(|i| {
                let mu = lb * 1e3f64.powf(i as f64 / 16.0);
                assert!(eval_f_second(&sys, e, mu).unwrap() < 0.0);
                eval_f(&sys, e, mu).unwrap()
            })
            .collect();
        for t in &pts {
            for p in &pts {
                let tangent = t.f + t.f_prime * (p.mu - t.mu);
                assert!(
                    p.f <= tangent + 1e-9,
                    "mu0 = {}, mu = {}: {} above {}",
                    t.mu,
                    p.mu,
                    p.f,
                    tangent
                );
            }
        }
        let mu = lb * r.gen_range(1.0001..1e3);
        assert!(eval_f_second(&sys, e, mu).unwrap() < 0.0);
    }
}

#[test]
fn solvers_agree_to_tight_tolerance() {
    let cfg = SolverConfig::default();
    for (sys, e) in hybrid_instances(0x0a11_ce00, 200) {
        let d = solve_hnoma_dinkelbach(&sys, e, &cfg).unwrap();
        let n = solve_hnoma_newton(&sys, e, &cfg).unwrap();
        let tol = 1e-8f64.max(10.0 * cfg.delta);
        assert!(rel(d.allocation.delay, n.allocation.delay) <= tol);
        assert!(n.iterations <= d.iterations);
    }
}

#[test]
fn delay_reaches_d_m_continuously_at_e2() {
    let cfg = SolverConfig::default();
    let mut r = rng(7);
    for _ in 0..100 {
        let (sys, _) = hybrid_instance(&mut r);
        let e = sys.e2() * (1.0 - 1e-9);
        assert_eq!(sys.classify(e), EnergyRegime::Hybrid);
        let s = solve(&sys, e, &cfg).unwrap();
        assert!(
            rel(s.delay.unwrap(), sys.d_m()) <= 1e-6,
            "{:?} vs {}",
            s.delay,
            sys.d_m()
        );
    }
}
