use serde::{Deserialize, Serialize};

use crate::diagnostics::{EnergyMonitor, StepBundle, TheoryConstants};
use crate::error::invalid;
use crate::linalg::{dist_sq, ensure_len};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::smoothing::SmoothLoss;
use crate::solvers::step::{three_regime_step, StepParams};
use crate::solvers::{
    fiht_betas, stopping_check, IterationRecord, SolveError, SolveResult, SolveStatus,
};
use crate::support::{l0_norm, same_support, SupportSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FihtConfig<T> {
    pub alpha: T,
    /// Step constant `L`; `None` means `2·L_f`.
    pub step_const: Option<T>,
    pub epsilon: T,
    pub max_iter: usize,
    pub x0: Option<Vec<T>>,
    /// `false` gives plain IHT (`β ≡ 0`).
    pub extrapolate: bool,
}

impl<T: Scalar> Default for FihtConfig<T> {
    fn default() -> Self {
        Self::least_squares_preset()
    }
}

impl<T: Scalar> FihtConfig<T> {
    pub fn least_squares_preset() -> Self {
        Self {
            alpha: T::of(4.0),
            step_const: None,
            epsilon: T::of(1e-4),
            max_iter: 15000,
            x0: None,
            extrapolate: true,
        }
    }

    pub fn without_extrapolation(mut self) -> Self {
        self.extrapolate = false;
        self
    }

    pub fn validate<Lo: SmoothLoss<T>>(&self, problem: &Problem<T, Lo>) -> crate::Result<T> {
        let lf = problem.loss.lip();
        let l = self.step_const.unwrap_or(T::of(2.0) * lf);
        if !(l > lf) || !l.is_finite() {
            return Err(invalid(
                "L",
                l.as_f64(),
                "must be finite and exceed the Lipschitz constant",
            ));
        }
        if !(self.alpha > T::zero()) {
            return Err(invalid("alpha", self.alpha.as_f64(), "must be > 0"));
        }
        if !(self.epsilon > T::zero()) {
            return Err(invalid("epsilon", self.epsilon.as_f64(), "must be > 0"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter", 0.0, "must be positive"));
        }
        if let Some(x0) = &self.x0 {
            ensure_len(problem.dim(), x0.len(), "FihtConfig.x0")?;
            if !problem.bounds.contains(x0) {
                return Err(invalid("x0", f64::NAN, "must lie in the box"));
            }
        }
        Ok(l)
    }
}

/// Fast iterative hard thresholding for a loss with Lipschitz gradient.
pub fn fiht_solve<T: Scalar, Lo: SmoothLoss<T>>(
    problem: &Problem<T, Lo>,
    config: &FihtConfig<T>,
) -> Result<SolveResult<T>, SolveError<T>> {
    let l = config.validate(problem)?;
    let loss = &problem.loss;
    let lf = loss.lip();
    let lambda = problem.lambda;
    let n = problem.dim();
    let constants = TheoryConstants::smooth(&problem.bounds, lambda, l, lf);
    let mut monitor = EnergyMonitor::smooth(&constants);

    let x0 = config.x0.clone().unwrap_or_else(|| vec![T::zero(); n]);
    let x0_nonzero = l0_norm(&x0) > 0;
    let mut x_prev = x0.clone();
    let mut x = x0;
    let mut trace = Vec::new();
    let mut changes = 0;
    let mut last_change = None;
    let mut stop_evals = 0;
    let mut status = SolveStatus::IterationCap;
    let mut g_stop = vec![T::zero(); n];
    let params = StepParams {
        mu: T::one(),
        step_const: l,
        lambda,
        bounds: &problem.bounds,
    };
    let mut k = 1;

    while k <= config.max_iter {
        // x¹ = x⁰ is not an output of the method, so it is never tested
        if k > 1 {
            loss.gradient_into(&x, &mut g_stop);
            stop_evals += 1;
            if stopping_check(&g_stop, &SupportSet::of(&x), None, config.epsilon) {
                status = SolveStatus::Converged;
                break;
            }
        }

        let betas = fiht_betas(k, config.alpha, l, lf, config.extrapolate);
        let mut grad = |y: &[T], out: &mut [T]| loss.gradient_into(y, out);
        let step = match three_regime_step(&x, &x_prev, betas, &params, &mut grad) {
            Ok(s) => s,
            Err(reason) => {
                return Err(SolveError::Aborted {
                    iteration: k,
                    reason,
                    trace,
                })
            }
        };

        let f_exact = loss.value(&x);
        if !f_exact.is_finite() {
            return Err(SolveError::Aborted {
                iteration: k,
                reason: "non-finite loss value".into(),
                trace,
            });
        }
        let card = l0_norm(&x);
        let big_f = f_exact + lambda * T::of(card as f64);
        let prev_step_sq = dist_sq(&x, &x_prev);
        let cur_eq_next = same_support(&x, &step.x_next);
        let report = monitor.observe(StepBundle {
            k,
            penalized_value: big_f,
            mu_prev: T::one(),
            mu_cur: T::one(),
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
            mu: None,
            card,
            f_exact,
            f_smooth: f_exact,
            big_f,
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
