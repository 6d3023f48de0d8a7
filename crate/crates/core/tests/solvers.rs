mod common;

use common::{gaussian, planted, rng};
use l0box_core::diagnostics::{summability_partial_sums, weighted_step_partial_sums};
use l0box_core::oracle::enumerate_local_minimizers;
use l0box_core::solvers::{choose_beta_step1, ExtrapolationState, SmoothingSchedule};
use l0box_core::{
    fiht_solve, sfiht_solve, BetaStrategy, BoxSet, CensoredRegression, DenseMatrix, FihtConfig,
    L1Regression, LeastSquares, Problem, Regime, SfihtConfig, SmoothableLoss, SolveStatus,
    SupportSet,
};
use rand::Rng;

fn l1_problem(seed: u64, m: usize, n: usize, lambda: f64) -> Problem<f64, L1Regression<f64>> {
    let mut r = rng(seed);
    let a = gaussian(&mut r, m, n);
    let (_, b) = planted(&mut r, &a, n / 3, -1.0, 1.0, 0.01);
    Problem::new(
        L1Regression::new(a, b).unwrap(),
        BoxSet::uniform(n, -1.0, 1.0).unwrap(),
        lambda,
    )
    .unwrap()
}

fn censored_problem(
    seed: u64,
    m: usize,
    n: usize,
    lambda: f64,
) -> Problem<f64, CensoredRegression<f64>> {
    let mut r = rng(seed);
    let a = gaussian(&mut r, m, n);
    let (_, b) = planted(&mut r, &a, n / 3, 0.1, 1.0, 0.01);
    let b = b.into_iter().map(|v| v.max(0.0)).collect();
    Problem::new(
        CensoredRegression::new(a, b).unwrap(),
        BoxSet::uniform(n, 0.0, 1.0).unwrap(),
        lambda,
    )
    .unwrap()
}

fn ls_problem(seed: u64, m: usize, n: usize, lambda: f64) -> Problem<f64, LeastSquares<f64>> {
    let mut r = rng(seed);
    let a = gaussian(&mut r, m, n);
    let (_, b) = planted(&mut r, &a, n / 3, 0.5, 3.0, 0.01);
    Problem::new(
        LeastSquares::new(a, b).unwrap(),
        BoxSet::uniform(n, 0.0, 5.0).unwrap(),
        lambda,
    )
    .unwrap()
}

fn caps(ratio: f64, step: f64, smooth: f64) -> (f64, f64, f64) {
    (
        ratio.sqrt(),
        ((step - smooth) / (4.0 * step) * ratio).sqrt(),
        ((step - smooth) / (8.0 * step - 4.0 * smooth) * ratio).sqrt(),
    )
}

#[test]
fn sfiht_trace_respects_caps_schedule_and_budget() {
    let p = l1_problem(1, 15, 30, 0.05);
    for strategy in [
        BetaStrategy::GenericCap,
        BetaStrategy::SequenceConvergent { alpha: 4.0 },
        BetaStrategy::FistaLike,
    ] {
        let cfg = SfihtConfig {
            beta_strategy: strategy,
            max_iter: 3000,
            ..SfihtConfig::linear_regression_preset()
        };
        let res = sfiht_solve(&p, &cfg).unwrap();
        let sched = cfg.schedule();
        let step = res.constants.step_const;
        let smooth = res.constants.smooth_const;
        assert!(p.bounds.contains(&res.x_final));
        for r in &res.trace {
            let mu = r.mu.unwrap();
            assert_eq!(mu, sched.mu(r.k));
            if r.k >= 2 {
                assert_eq!(mu, 0.7 / ((r.k + 1) as f64).powf(0.95));
            }
            let (c1, c3b, c3b2) = caps(sched.ratio(r.k), step, smooth);
            match r.regime {
                Regime::Step1 => assert!(r.beta < c1),
                Regime::Step3b => assert!(r.beta <= c3b * (1.0 + 1e-15)),
                Regime::Step3b2 => assert!(r.beta <= c3b2 * (1.0 + 1e-15)),
            }
            assert!((1..=3).contains(&r.grad_evals));
        }
        for w in res.trace.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-10 * (1.0 + w[1].energy.abs()));
            assert!(w[1].mu.unwrap() < w[0].mu.unwrap());
        }
        assert!(
            res.violations.is_empty(),
            "{strategy:?}: {:?}",
            res.violations
        );
    }
}

#[test]
fn all_zero_fixed_point_waits_for_mu() {
    let p = l1_problem(2, 10, 20, 1e6);
    let cfg = SfihtConfig::linear_regression_preset();
    let res = sfiht_solve(&p, &cfg).unwrap();
    assert_eq!(res.status, SolveStatus::Converged);
    assert!(res.x_final.iter().all(|&v| v == 0.0));
    assert_eq!(res.support_change_count, 0);
    assert_eq!(res.iterations, cfg.schedule().first_below(cfg.epsilon));
    assert_eq!(res.iterations, 988);
}

#[test]
fn fiht_on_identity_is_projected_gradient() {
    let b = vec![0.5f64, 2.0, -1.0, 7.0];
    let p = Problem::new(
        LeastSquares::new(DenseMatrix::identity(4), b.clone()).unwrap(),
        BoxSet::uniform(4, -3.0, 5.0).unwrap(),
        0.0,
    )
    .unwrap();
    let cfg = FihtConfig {
        epsilon: 1e-10,
        ..FihtConfig::least_squares_preset()
    };
    let res = fiht_solve(&p, &cfg).unwrap();
    // the coordinate held at the upper bound keeps gradient −2, so the
    // stopping rule never fires
    assert_eq!(res.status, SolveStatus::IterationCap);
    let target = [0.5f64, 2.0, -1.0, 5.0];
    for (x, t) in res.x_final.iter().zip(target) {
        assert!((x - t).abs() < 1e-9);
    }
    assert!((res.final_objective.big_f - 2.0).abs() < 1e-9);

    let inside = Problem::new(
        LeastSquares::new(DenseMatrix::identity(3), vec![0.5, 2.0, -1.0]).unwrap(),
        BoxSet::uniform(3, -3.0, 5.0).unwrap(),
        0.0,
    )
    .unwrap();
    let res = fiht_solve(&inside, &cfg).unwrap();
    assert!(res.final_objective.big_f < 1e-18);
}

#[test]
fn fiht_trace_respects_caps_and_lower_bound() {
    let p = ls_problem(3, 20, 40, 0.05);
    let cfg = FihtConfig::least_squares_preset();
    let res = fiht_solve(&p, &cfg).unwrap();
    assert_eq!(res.status, SolveStatus::Converged);
    let (step, smooth) = (res.constants.step_const, res.constants.smooth_const);
    for r in &res.trace {
        assert!(r.mu.is_none());
        let (_, c3b, c3b2) = caps(1.0, step, smooth);
        match r.regime {
            Regime::Step1 => assert!(r.beta < 1.0),
            Regime::Step3b => assert!(r.beta <= c3b * (1.0 + 1e-15)),
            Regime::Step3b2 => assert!(r.beta <= c3b2 * (1.0 + 1e-15)),
        }
        assert!((1..=3).contains(&r.grad_evals));
    }
    assert!(res.violations.is_empty());
    let delta = res.constants.delta;
    assert!(res
        .x_final
        .iter()
        .all(|&v| v == 0.0 || v.abs() >= delta - 1e-12));
}

#[test]
fn baselines_never_extrapolate() {
    let p = l1_problem(4, 10, 20, 0.05);
    let res = sfiht_solve(
        &p,
        &SfihtConfig::linear_regression_preset().without_extrapolation(),
    )
    .unwrap();
    assert!(res.trace.iter().all(|r| r.beta == 0.0));
    let q = ls_problem(4, 10, 20, 0.05);
    let res = fiht_solve(
        &q,
        &FihtConfig::least_squares_preset().without_extrapolation(),
    )
    .unwrap();
    assert!(res.trace.iter().all(|r| r.beta == 0.0));
}

#[test]
fn sequence_convergent_beta_at_large_k() {
    let sched = SmoothingSchedule::new(0.7, 0.95);
    let mut st = ExtrapolationState::default();
    let k = 10_000usize;
    let got = choose_beta_step1(
        k,
        &sched,
        &BetaStrategy::SequenceConvergent { alpha: 4.0 },
        &mut st,
    );
    let kf = k as f64;
    let want = (1.0 - 1.0 / (2.0 * kf.powf(0.05))).sqrt()
        * ((kf + 1.0) / (kf + 2.0)).powf(0.95 / 2.0)
        * (kf - 1.0)
        / (kf + 3.0);
    assert!((got - want).abs() < 1e-3);
    let mut prev = 0.0;
    for k in [10usize, 100, 1_000, 10_000, 100_000, 1_000_000] {
        let b = choose_beta_step1(
            k,
            &sched,
            &BetaStrategy::SequenceConvergent { alpha: 4.0 },
            &mut st,
        );
        assert!(b > prev && b < 1.0);
        prev = b;
    }
}

#[test]
fn extrapolation_approaches_one() {
    let p = censored_problem(5, 30, 10, 0.002);
    for (strategy, sigma) in [
        (BetaStrategy::FistaLike, 0.7),
        (BetaStrategy::SequenceConvergent { alpha: 4.0 }, 0.5),
    ] {
        let cfg = SfihtConfig {
            beta_strategy: strategy,
            sigma,
            epsilon: 1e-300,
            max_iter: 15000,
            ..SfihtConfig::censored_preset()
        };
        let res = sfiht_solve(&p, &cfg).unwrap();
        assert_eq!(res.iterations, 15000);
        assert!(res.max_beta() > 0.9, "{strategy:?}: {}", res.max_beta());
    }
}

#[test]
fn summability_sums_stay_below_the_energy_drop() {
    let p = l1_problem(6, 15, 30, 0.05);
    let cfg = SfihtConfig::linear_regression_preset();
    let res = sfiht_solve(&p, &cfg).unwrap();
    let sums = summability_partial_sums(&res.trace, res.constants.gamma);
    assert!(!sums.is_empty());
    for w in sums.windows(2) {
        assert!(w[1].0 >= w[0].0 - 1e-15);
    }
    let (total, _) = *sums.last().unwrap();
    let bound = res.trace[0].energy - res.trace.last().unwrap().energy;
    assert!(total.is_finite() && bound.is_finite() && total >= 0.0);
    let weighted = weighted_step_partial_sums(&res.trace);
    // bounded partial sums: the increments shrink from one quarter to the next
    let q = weighted.len() / 4;
    let third = weighted[3 * q - 1] - weighted[2 * q - 1];
    let fourth = weighted[weighted.len() - 1] - weighted[3 * q - 1];
    assert!(fourth <= third, "{third} {fourth}");
}

#[test]
fn fiht_matches_a_certified_local_minimizer() {
    let p = ls_problem(7, 3, 6, 0.05);
    let res = fiht_solve(
        &p,
        &FihtConfig {
            epsilon: 1e-9,
            ..FihtConfig::least_squares_preset()
        },
    )
    .unwrap();
    let certs = enumerate_local_minimizers(&p).unwrap();
    let sup = SupportSet::of(&res.x_final);
    let cert = certs.iter().find(|c| c.support == sup).unwrap();
    assert!(cert.is_local_min_of_f);
    assert!((res.final_objective.big_f - cert.penalized_value).abs() <= 1e-6);
}

#[test]
fn fiht_support_is_certified_on_random_tiny_instances() {
    for seed in 0..5 {
        let p = ls_problem(20 + seed, 3, 6, 0.02);
        let res = fiht_solve(&p, &FihtConfig::least_squares_preset()).unwrap();
        let certs = enumerate_local_minimizers(&p).unwrap();
        let sup = SupportSet::of(&res.x_final);
        let cert = certs.iter().find(|c| c.support == sup).unwrap();
        assert!(cert.is_local_min_of_f, "seed {seed}");
        assert!(
            (res.final_objective.big_f - cert.penalized_value).abs() <= 1e-6,
            "seed {seed}"
        );
    }
}

#[test]
fn nan_data_is_rejected() {
    let mut r = rng(8);
    let a = gaussian(&mut r, 3, 4);
    assert!(LeastSquares::new(a, vec![0.0, f64::NAN, 1.0]).is_err());
    let p = l1_problem(9, 4, 6, 0.1);
    let cfg = SfihtConfig {
        x0: Some(vec![0.0, f64::NAN, 0.0, 0.0, 0.0, 0.0]),
        ..SfihtConfig::linear_regression_preset()
    };
    assert!(sfiht_solve(&p, &cfg).is_err());
    let cfg = SfihtConfig {
        step_const: Some(0.5 * p.loss.lip_over_mu()),
        ..SfihtConfig::linear_regression_preset()
    };
    assert!(sfiht_solve(&p, &cfg).is_err());
}

#[test]
fn runs_are_deterministic() {
    let p = censored_problem(10, 30, 10, 0.002);
    let mut r = rng(11);
    let x0: Vec<f64> = (0..10).map(|_| r.random_range(0.0..1.0)).collect();
    let cfg = SfihtConfig {
        x0: Some(x0),
        ..SfihtConfig::censored_preset()
    };
    let a = sfiht_solve(&p, &cfg).unwrap();
    let b = sfiht_solve(&p, &cfg).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.x_final, b.x_final);
}
