//! Extrapolated iterative hard thresholding for smoothed and smooth losses.

mod beta;
mod fiht;
mod schedule;
mod sfiht;
mod step;
mod stopping;

pub use beta::{
    choose_beta_step1, fiht_betas, sfiht_fallback_betas, BetaStrategy, ExtrapolationState, Regime,
};
pub use fiht::{fiht_solve, FihtConfig};
pub use schedule::SmoothingSchedule;
pub use sfiht::{sfiht_solve, SfihtConfig};
pub use stopping::stopping_check;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::{TheoryConstants, Violation};
use crate::error::Error;
use crate::problem::ObjectiveValue;
use crate::support::SupportSet;

/// One accepted iteration: the state at `x^k` and the step that produced `x^{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord<T> {
    pub k: usize,
    /// `β_k` actually used to form `x^{k+1}`.
    pub beta: T,
    pub regime: Regime,
    /// `μ_k`; absent for the smooth solver.
    pub mu: Option<T>,
    /// `‖x^k‖₀`
    pub card: usize,
    pub f_exact: T,
    /// `f̃(x^k, μ_k)`; equal to `f_exact` for the smooth solver.
    pub f_smooth: T,
    /// `f(x^k) + λ‖x^k‖₀`
    pub big_f: T,
    /// `H_k` or `W_k`.
    pub energy: T,
    /// `‖x^k − x^{k−1}‖`
    pub step_norm: T,
    /// Gradient evaluations spent on the step (1 to 3).
    pub grad_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    IterationCap,
}

#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub x_final: Vec<T>,
    /// Index `k` of the returned iterate `x^k`, at most `max_iter`.
    pub iterations: usize,
    pub status: SolveStatus,
    pub trace: Vec<IterationRecord<T>>,
    pub support_change_count: usize,
    /// Last `k` with `I(x^k) ≠ I(x^{k+1})`.
    pub last_support_change: Option<usize>,
    pub final_support: SupportSet,
    pub final_objective: ObjectiveValue<T>,
    pub constants: TheoryConstants<T>,
    /// Everything the energy monitor flagged during the run.
    pub violations: Vec<Violation>,
    /// Extra gradient evaluations spent on the stopping test.
    pub stopping_grad_evals: usize,
}

impl<T: crate::Scalar> SolveResult<T> {
    pub fn max_beta(&self) -> T {
        self.trace.iter().map(|r| r.beta).fold(T::zero(), T::max)
    }
}

#[derive(Debug, Error)]
pub enum SolveError<T: std::fmt::Debug> {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("solver aborted at iteration {iteration}: {reason}")]
    Aborted {
        iteration: usize,
        reason: String,
        trace: Vec<IterationRecord<T>>,
    },
}
