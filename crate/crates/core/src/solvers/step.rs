use crate::boxset::BoxSet;
use crate::scalar::Scalar;
use crate::solvers::Regime;
use crate::subproblem::{hard_threshold_step, SubproblemInput};
use crate::support::same_support;

pub(crate) struct Accepted<T> {
    pub x_next: Vec<T>,
    pub beta: T,
    pub regime: Regime,
    pub grad_evals: usize,
}

pub(crate) struct StepParams<'a, T> {
    pub mu: T,
    pub step_const: T,
    pub lambda: T,
    pub bounds: &'a BoxSet<T>,
}

/// Steps 2 and 3: threshold at the extrapolated point with `betas[0]`, and
/// fall back to `betas[1]`, then `betas[2]`, until the support condition of
/// the regime holds. Each fallback re-evaluates the gradient.
pub(crate) fn three_regime_step<T: Scalar>(
    x: &[T],
    x_prev: &[T],
    betas: [T; 3],
    p: &StepParams<'_, T>,
    grad: &mut dyn FnMut(&[T], &mut [T]),
) -> Result<Accepted<T>, String> {
    let n = x.len();
    let mut y = vec![T::zero(); n];
    let mut g = vec![T::zero(); n];
    let mut evals = 0;
    let mut attempt = |beta: T, evals: &mut usize| -> Result<Vec<T>, String> {
        for i in 0..n {
            y[i] = x[i] + beta * (x[i] - x_prev[i]);
        }
        grad(&y, &mut g);
        *evals += 1;
        let input = SubproblemInput {
            y: &y,
            grad: &g,
            mu: p.mu,
            step_const: p.step_const,
            lambda: p.lambda,
            bounds: p.bounds,
        };
        hard_threshold_step(&input)
            .map(|r| r.x_next)
            .map_err(|e| format!("thresholding failed: {e}"))
    };

    let xb = attempt(betas[0], &mut evals)?;
    if same_support(x_prev, x) && same_support(x, &xb) {
        return Ok(Accepted {
            x_next: xb,
            beta: betas[0],
            regime: Regime::Step1,
            grad_evals: evals,
        });
    }
    let xb = attempt(betas[1], &mut evals)?;
    if same_support(x, &xb) {
        return Ok(Accepted {
            x_next: xb,
            beta: betas[1],
            regime: Regime::Step3b,
            grad_evals: evals,
        });
    }
    let xb = attempt(betas[2], &mut evals)?;
    Ok(Accepted {
        x_next: xb,
        beta: betas[2],
        regime: Regime::Step3b2,
        grad_evals: evals,
    })
}
