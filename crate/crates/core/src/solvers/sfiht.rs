use serde::{Deserialize, Serialize};

use crate::diagnostics::{EnergyMonitor, StepBundle, TheoryConstants};
use crate::error::invalid;
use crate::linalg::{dist_sq, ensure_len};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::smoothing::SmoothableLoss;
use crate::solvers::step::{three_regime_step, StepParams};
use crate::solvers::{
    choose_beta_step1, sfiht_fallback_betas, stopping_check, BetaStrategy, ExtrapolationState,
    IterationRecord, SmoothingSchedule, SolveError, SolveResult, SolveStatus,
};
use crate::support::{l0_norm, same_support, SupportSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfihtConfig<T> {
    /// Step constant `L`; `None` means `2·L_f̃`.
    pub step_const: Option<T>,
    pub mu0: T,
    pub sigma: T,
    pub beta_strategy: BetaStrategy<T>,
    pub epsilon: T,
    pub max_iter: usize,
    /// Starting point; zeros when absent.
    pub x0: Option<Vec<T>>,
}

impl<T: Scalar> Default for SfihtConfig<T> {
    fn default() -> Self {
        Self::linear_regression_preset()
    }
}

impl<T: Scalar> SfihtConfig<T> {
    /// Settings used for the ℓ1 regression experiments.
    pub fn linear_regression_preset() -> Self {
        Self {
            step_const: None,
            mu0: T::of(0.7),
            sigma: T::of(0.95),
            beta_strategy: BetaStrategy::SequenceConvergent { alpha: T::of(4.0) },
            epsilon: T::of(1e-3),
            max_iter: 15000,
            x0: None,
        }
    }

    /// Settings used for the censored regression experiments.
    pub fn censored_preset() -> Self {
        Self {
            sigma: T::of(0.7),
            beta_strategy: BetaStrategy::FistaLike,
            epsilon: T::of(1e-2),
            ..Self::linear_regression_preset()
        }
    }

    /// The same run with `β ≡ 0` (SIHT).
    pub fn without_extrapolation(mut self) -> Self {
        self.beta_strategy = BetaStrategy::NoExtrapolation;
        self
    }

    pub fn schedule(&self) -> SmoothingSchedule<T> {
        SmoothingSchedule::new(self.mu0, self.sigma)
    }

    /// Checks the configuration against the loss and returns the step constant.
    pub fn validate<Lo: SmoothableLoss<T>>(&self, problem: &Problem<T, Lo>) -> crate::Result<T> {
        let lf = problem.loss.lip_over_mu();
        let l = self.step_const.unwrap_or(T::of(2.0) * lf);
        if !(l > lf) || !l.is_finite() {
            return Err(invalid(
                "L",
                l.as_f64(),
                "must be finite and exceed the smoothed Lipschitz constant",
            ));
        }
        if !(self.sigma > T::zero() && self.sigma < T::of(2.0)) {
            return Err(invalid("sigma", self.sigma.as_f64(), "must lie in (0, 2)"));
        }
        if let BetaStrategy::SequenceConvergent { alpha } = self.beta_strategy {
            if !(self.sigma >= T::of(0.5) && self.sigma <= T::one()) {
                return Err(invalid(
                    "sigma",
                    self.sigma.as_f64(),
                    "must lie in [1/2, 1] for the sequence-convergent strategy",
                ));
            }
            if !(alpha > T::zero()) {
                return Err(invalid("alpha", alpha.as_f64(), "must be > 0"));
            }
        }
        if !(self.mu0 > T::zero() && self.mu0 <= problem.loss.mu_bar()) {
            return Err(invalid("mu0", self.mu0.as_f64(), "must lie in (0, mu_bar]"));
        }
        if !(self.epsilon > T::zero()) {
            return Err(invalid("epsilon", self.epsilon.as_f64(), "must be > 0"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter", 0.0, "must be positive"));
        }
        if let Some(x0) = &self.x0 {
            ensure_len(problem.dim(), x0.len(), "SfihtConfig.x0")?;
            if !problem.bounds.contains(x0) {
                return Err(invalid("x0", f64::NAN, "must lie in the box"));
            }
        }
        Ok(l)
    }
}

/// Smoothing fast iterative hard thresholding.
pub fn sfiht_solve<T: Scalar, Lo: SmoothableLoss<T>>(
    problem: &Problem<T, Lo>,
    config: &SfihtConfig<T>,
) -> Result<SolveResult<T>, SolveError<T>> {
    let l = config.validate(problem)?;
    let loss = &problem.loss;
    let lf = loss.lip_over_mu();
    let lambda = problem.lambda;
    let n = problem.dim();
    let schedule = config.schedule();
    let constants =
        TheoryConstants::smoothed(&problem.bounds, lambda, l, lf, loss.kappa(), config.mu0);
    let mut monitor = EnergyMonitor::smoothed(&constants);

    let x0 = config.x0.clone().unwrap_or_else(|| vec![T::zero(); n]);
    let x0_nonzero = l0_norm(&x0) > 0;
    let mut x_prev = x0.clone();
    let mut x = x0;
    let mut state = ExtrapolationState::default();
    let mut trace = Vec::new();
    let mut changes = 0;
    let mut last_change = None;
    let mut stop_evals = 0;
    let mut status = SolveStatus::IterationCap;
    let mut g_stop = vec![T::zero(); n];
    let mut k = 1;

    while k <= config.max_iter {
        let mu_k = schedule.mu(k);
        if k > 1 && mu_k <= config.epsilon {
            loss.smoothed_gradient_into(&x, mu_k, &mut g_stop);
            stop_evals += 1;
            if stopping_check(&g_stop, &SupportSet::of(&x), Some(mu_k), config.epsilon) {
                status = SolveStatus::Converged;
                break;
            }
        }

        let beta1 = choose_beta_step1(k, &schedule, &config.beta_strategy, &mut state);
        let (b3, b32) = sfiht_fallback_betas(schedule.ratio(k), l, lf, &config.beta_strategy);
        let params = StepParams {
            mu: mu_k,
            step_const: l,
            lambda,
            bounds: &problem.bounds,
        };
        let mut grad = |y: &[T], out: &mut [T]| loss.smoothed_gradient_into(y, mu_k, out);
        let step = match three_regime_step(&x, &x_prev, [beta1, b3, b32], &params, &mut grad) {
            Ok(s) => s,
            Err(reason) => {
                return Err(SolveError::Aborted {
                    iteration: k,
                    reason,
                    trace,
                })
            }
        };
        state.accept(step.beta, step.regime);

        let f_exact = loss.value(&x);
        let f_smooth = loss.smoothed_value(&x, mu_k);
        if !f_exact.is_finite() || !f_smooth.is_finite() {
            return Err(SolveError::Aborted {
                iteration: k,
                reason: "non-finite loss value".into(),
                trace,
            });
        }
        let card = l0_norm(&x);
        let pen = lambda * T::of(card as f64);
        let prev_step_sq = dist_sq(&x, &x_prev);
        let cur_eq_next = same_support(&x, &step.x_next);
        let report = monitor.observe(StepBundle {
            k,
            penalized_value: f_smooth + pen,
            mu_prev: schedule.mu(k - 1),
            mu_cur: mu_k,
            beta: step.beta,
            prev_step_sq,
            next_step_sq: dist_sq(&step.x_next, &x),
            prev_eq_cur: same_support(&x_prev, &x),
            cur_eq_next,
            exempt_step_bound: k == 1 && x0_nonzero,
        });
        trace.push(IterationRecord {
            k,
            beta: step.beta,
            regime: step.regime,
            mu: Some(mu_k),
            card,
            f_exact,
            f_smooth,
            big_f: f_exact + pen,
            energy: report.energy,
            step_norm: prev_step_sq.sqrt(),
            grad_evals: step.grad_evals,
        });
        if !cur_eq_next {
            changes += 1;
            last_change = Some(k);
        }
        x_prev = std::mem::replace(&mut x, step.x_next);
        k += 1;
    }

    Ok(SolveResult {
        final_support: SupportSet::of(&x),
        final_objective: problem.objective(&x),
        x_final: x,
        iterations: k.min(config.max_iter),
        status,
        trace,
        support_change_count: changes,
        last_support_change: last_change,
        constants,
        violations: monitor.into_violations(),
        stopping_grad_evals: stop_evals,
    })
}
