use l0box_core::boxset::project_box;
use l0box_core::solvers::SmoothingSchedule;
use l0box_core::subproblem::separability_violations;
use l0box_core::subproblem::surrogate_value;
use l0box_core::{
    hard_threshold_step, l0_norm, BoxSet, DenseMatrix, LeastSquares, Loss, Problem,
    SubproblemInput, SupportSet,
};
use proptest::prelude::*;

fn bound() -> impl Strategy<Value = (f64, f64)> {
    (
        prop_oneof![Just(f64::NEG_INFINITY), -5.0..0.0f64],
        prop_oneof![Just(f64::INFINITY), 0.0..5.0f64],
    )
        .prop_filter("l < u", |(l, u)| l < u)
}

fn boxed(n: usize) -> impl Strategy<Value = BoxSet<f64>> {
    prop::collection::vec(bound(), n).prop_map(|b| {
        let (l, u): (Vec<f64>, Vec<f64>) = b.into_iter().unzip();
        BoxSet::new(l, u).unwrap()
    })
}

proptest! {
    #[test]
    fn projection_is_idempotent_and_nonexpansive(
        b in boxed(5),
        x in prop::collection::vec(-10.0..10.0f64, 5),
        y in prop::collection::vec(-10.0..10.0f64, 5),
    ) {
        let px = project_box(&x, &b).unwrap();
        let py = project_box(&y, &b).unwrap();
        prop_assert!(b.contains(&px));
        prop_assert_eq!(project_box(&px, &b).unwrap(), px.clone());
        let d = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, c)| (a - c) * (a - c)).sum::<f64>();
        prop_assert!(d(&px, &py) <= d(&x, &y) + 1e-12);
    }

    #[test]
    fn support_complement_is_the_l0_norm(x in prop::collection::vec(prop_oneof![Just(0.0), -3.0..3.0f64], 0..12)) {
        let s = SupportSet::of(&x);
        prop_assert_eq!(s.cardinality(), l0_norm(&x));
        prop_assert_eq!(s.complement().len() + s.zero_indices().len(), x.len());
    }

    #[test]
    fn objective_is_loss_plus_penalty(
        x in prop::collection::vec(prop_oneof![Just(0.0), -1.0..1.0f64], 4),
        lambda in 0.0..3.0f64,
    ) {
        let a = DenseMatrix::from_fn(3, 4, |i, j| (i * 4 + j) as f64 / 7.0 - 0.8);
        let p = Problem::new(LeastSquares::new(a, vec![0.3, -0.2, 1.0]).unwrap(), BoxSet::uniform(4, -1.0, 1.0).unwrap(), lambda).unwrap();
        let o = p.objective(&x);
        prop_assert_eq!(o.f_value, p.loss.value(&x));
        let pen = o.big_f - o.f_value;
        prop_assert!((pen - lambda * l0_norm(&x) as f64).abs() <= 4.0 * f64::EPSILON * (1.0 + o.big_f.abs()));
    }

    #[test]
    fn hard_threshold_minimizes_the_surrogate(
        b in boxed(6),
        y in prop::collection::vec(-4.0..4.0f64, 6),
        g in prop::collection::vec(-4.0..4.0f64, 6),
        mu in 0.01..1.0f64,
        step in 0.5..5.0f64,
        lambda in 0.0..2.0f64,
        probes in prop::collection::vec(prop::collection::vec(-6.0..6.0f64, 6), 100),
    ) {
        let y = project_box(&y, &b).unwrap();
        let input = SubproblemInput { y: &y, grad: &g, mu, step_const: step, lambda, bounds: &b };
        let res = hard_threshold_step(&input).unwrap();
        prop_assert!(b.contains(&res.x_next));
        for i in 0..6 {
            let p = b.clamp_coord(i, res.s_point[i]);
            prop_assert!(res.x_next[i] == 0.0 || res.x_next[i] == p);
        }
        prop_assert!(separability_violations(&input, &res).is_empty());
        let q_next = surrogate_value(&input, &res.x_next, 0.0);
        for z in probes {
            let z = project_box(&z, &b).unwrap();
            prop_assert!(q_next <= surrogate_value(&input, &z, 0.0) + 1e-9 * (1.0 + q_next.abs()));
        }
    }

    #[test]
    fn schedule_is_strictly_decreasing(mu0 in 0.01..1.0f64, sigma in 0.05..1.95f64, k in 2usize..100_000) {
        let s = SmoothingSchedule::new(mu0, sigma);
        prop_assert_eq!(s.mu(1), mu0);
        prop_assert!(s.mu(k + 1) < s.mu(k));
        prop_assert_eq!(s.mu(k), mu0 / ((k + 1) as f64).powf(sigma));
        prop_assert!(s.ratio(k) < 1.0 && s.ratio(k) > 0.0);
    }
}
