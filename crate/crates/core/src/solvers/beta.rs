use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::solvers::SmoothingSchedule;

/// How the Step-1 extrapolation coefficient is picked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaStrategy<T> {
    /// `0.99·√(μ_k/μ_{k−1})`
    GenericCap,
    /// `((k−1)/(k+α−1))·√((1 − 1/(2k^{1−σ}))·μ_k/μ_{k−1})`
    SequenceConvergent { alpha: T },
    /// FISTA-type `t_k` recurrence adjusted for the shrinking `μ`.
    FistaLike,
    /// `β ≡ 0` in every regime (SIHT / IHT).
    NoExtrapolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Step1,
    Step3b,
    Step3b2,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Step1 => "step1",
            Regime::Step3b => "step3b",
            Regime::Step3b2 => "step3b2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "step1" => Some(Regime::Step1),
            "step3b" => Some(Regime::Step3b),
            "step3b2" => Some(Regime::Step3b2),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrapolationState<T> {
    /// `t_{k−1}`, starts at 1.
    pub t_prev: T,
    pub beta_k: T,
    pub regime: Regime,
    pending_t: Option<T>,
}

impl<T: Scalar> Default for ExtrapolationState<T> {
    fn default() -> Self {
        Self {
            t_prev: T::one(),
            beta_k: T::zero(),
            regime: Regime::Step1,
            pending_t: None,
        }
    }
}

impl<T: Scalar> ExtrapolationState<T> {
    /// Commits the recurrence state once the iterate is accepted.
    pub fn accept(&mut self, beta: T, regime: Regime) {
        if let Some(t) = self.pending_t.take() {
            self.t_prev = t;
        }
        self.beta_k = beta;
        self.regime = regime;
    }
}

/// Step-1 `β_k` of the smoothed solver.
pub fn choose_beta_step1<T: Scalar>(
    k: usize,
    schedule: &SmoothingSchedule<T>,
    strategy: &BetaStrategy<T>,
    state: &mut ExtrapolationState<T>,
) -> T {
    let ratio = schedule.ratio(k);
    let kf = T::of(k as f64);
    let one = T::one();
    let beta = match *strategy {
        BetaStrategy::GenericCap => T::of(0.99) * ratio.sqrt(),
        BetaStrategy::SequenceConvergent { alpha } => {
            let shrink = one - one / (T::of(2.0) * kf.powf(one - schedule.sigma));
            (kf - one) / (kf + alpha - one) * (shrink * ratio).sqrt()
        }
        BetaStrategy::FistaLike => {
            let t = (one + (one + T::of(4.0) / ratio * state.t_prev * state.t_prev).sqrt())
                / T::of(2.0);
            state.pending_t = Some(t);
            (state.t_prev - one) / t
        }
        BetaStrategy::NoExtrapolation => T::zero(),
    };
    state.beta_k = beta;
    state.regime = Regime::Step1;
    beta
}

/// Fallback coefficients `(β_3b, β_3b2)` of the smoothed solver, taken at the
/// upper end of their admissible intervals.
pub fn sfiht_fallback_betas<T: Scalar>(
    ratio: T,
    step_const: T,
    smooth_const: T,
    strategy: &BetaStrategy<T>,
) -> (T, T) {
    if matches!(strategy, BetaStrategy::NoExtrapolation) {
        return (T::zero(), T::zero());
    }
    let gap = step_const - smooth_const;
    (
        (gap / (T::of(4.0) * step_const) * ratio).sqrt(),
        (gap / (T::of(8.0) * step_const - T::of(4.0) * smooth_const) * ratio).sqrt(),
    )
}

/// FIHT coefficients for the three regimes at iteration `k`, or all zeros
/// when extrapolation is off.
pub fn fiht_betas<T: Scalar>(
    k: usize,
    alpha: T,
    step_const: T,
    smooth_const: T,
    extrapolate: bool,
) -> [T; 3] {
    if !extrapolate {
        return [T::zero(); 3];
    }
    let kf = T::of(k as f64);
    let one = T::one();
    let damp = kf / (kf + one);
    let gap = step_const - smooth_const;
    [
        (kf - one) / (kf + alpha - one),
        (damp * gap / (T::of(4.0) * step_const)).sqrt(),
        (damp * gap / (T::of(8.0) * step_const - T::of(4.0) * smooth_const)).sqrt(),
    ]
}
