//! Runtime audits of the descent theory behind the solvers.
//!
//! The smoothed solver is monitored through
//! `H_k = F̃(x^k, μ_k) + κμ_k + τ_k‖x^k − x^{k−1}‖²` and the smooth solver
//! through `W_k = F(x^k) + ζ_k‖x^k − x^{k−1}‖²`. Both must be nonincreasing.
//! The weights `τ_k`, `ζ_k` depend on whether the zero sets of
//! `x^{k−1}, x^k, x^{k+1}` coincide, so a report for iterate `k` can only be
//! produced once `x^{k+1}` has been accepted.

use serde::{Deserialize, Serialize};

use crate::boxset::BoxSet;
use crate::scalar::Scalar;
use crate::solvers::IterationRecord;

/// Relative slack for energy monotonicity.
pub const ENERGY_SLACK: f64 = 1e-10;
/// Slack for the closed-form inequalities (β against τ/ζ, step lower bounds).
pub const FORMULA_SLACK: f64 = 1e-12;

/// Relationship between the zero sets of `x^{k−1}`, `x^k` and `x^{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportBranch {
    /// `I(x^{k−1}) = I(x^k) = I(x^{k+1})`
    ThreeEqual,
    Other,
}

impl SupportBranch {
    pub fn from_flags(prev_eq_cur: bool, cur_eq_next: bool) -> Self {
        if prev_eq_cur && cur_eq_next {
            Self::ThreeEqual
        } else {
            Self::Other
        }
    }
}

/// `τ_k` of the smoothed energy.
pub fn compute_tau<T: Scalar>(
    branch: SupportBranch,
    step_const: T,
    smooth_const: T,
    mu_prev: T,
    mu_cur: T,
    beta: T,
) -> T {
    let four = T::of(4.0);
    match branch {
        SupportBranch::ThreeEqual => {
            step_const / four / mu_prev + step_const / four * beta * beta / mu_cur
        }
        SupportBranch::Other => (step_const - smooth_const) / T::of(8.0) / mu_prev,
    }
}

/// `ζ_k` of the smooth-loss energy.
pub fn compute_zeta<T: Scalar>(
    branch: SupportBranch,
    step_const: T,
    smooth_const: T,
    beta: T,
) -> T {
    match branch {
        SupportBranch::ThreeEqual => step_const / T::of(4.0) * (T::one() + beta * beta),
        SupportBranch::Other => (step_const - smooth_const) / T::of(8.0),
    }
}

/// Lower bound on the magnitude of every nonzero produced by the smooth
/// solver: `δ = min_i δ_i` with `δ_i` the smallest of `√(2λ/L)` and the
/// nonzero finite bounds of coordinate `i`.
pub fn compute_delta<T: Scalar>(bounds: &BoxSet<T>, lambda: T, step_const: T) -> (T, Vec<T>) {
    let root = (T::of(2.0) * lambda / step_const).sqrt();
    let per: Vec<T> = bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(&l, &u)| {
            let mut d = root;
            if l != T::zero() {
                d = d.min(-l);
            }
            if u != T::zero() {
                d = d.min(u);
            }
            d
        })
        .collect();
    let delta = per.iter().copied().fold(T::infinity(), T::min);
    (delta, per)
}

/// `ν = min{l_i²/μ₀, u_j²/μ₀, 2λ/L}` over the nonzero bounds.
pub fn compute_nu<T: Scalar>(bounds: &BoxSet<T>, lambda: T, step_const: T, mu0: T) -> T {
    let mut nu = T::of(2.0) * lambda / step_const;
    for (&l, &u) in bounds.lower().iter().zip(bounds.upper()) {
        if l != T::zero() {
            nu = nu.min(l * l / mu0);
        }
        if u != T::zero() {
            nu = nu.min(u * u / mu0);
        }
    }
    nu
}

/// `γ = min{L/4, (L − L_s)/8}`
pub fn compute_gamma<T: Scalar>(step_const: T, smooth_const: T) -> T {
    (step_const / T::of(4.0)).min((step_const - smooth_const) / T::of(8.0))
}

/// Constants the lemmas are phrased in, evaluated for one problem/config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants<T> {
    pub step_const: T,
    pub smooth_const: T,
    /// Only for the smoothed solver.
    pub kappa: Option<T>,
    /// Only for the smoothed solver.
    pub nu: Option<T>,
    pub gamma: T,
    pub delta: T,
    pub delta_per_coordinate: Vec<T>,
}

impl<T: Scalar> TheoryConstants<T> {
    pub fn smoothed(
        bounds: &BoxSet<T>,
        lambda: T,
        step_const: T,
        smooth_const: T,
        kappa: T,
        mu0: T,
    ) -> Self {
        let (delta, per) = compute_delta(bounds, lambda, step_const);
        Self {
            step_const,
            smooth_const,
            kappa: Some(kappa),
            nu: Some(compute_nu(bounds, lambda, step_const, mu0)),
            gamma: compute_gamma(step_const, smooth_const),
            delta,
            delta_per_coordinate: per,
        }
    }

    pub fn smooth(bounds: &BoxSet<T>, lambda: T, step_const: T, smooth_const: T) -> Self {
        let (delta, per) = compute_delta(bounds, lambda, step_const);
        Self {
            step_const,
            smooth_const,
            kappa: None,
            nu: None,
            gamma: compute_gamma(step_const, smooth_const),
            delta,
            delta_per_coordinate: per,
        }
    }
}

/// Facts about iteration `k`, available once `x^{k+1}` is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepBundle<T> {
    pub k: usize,
    /// `F̃(x^k, μ_k)` for the smoothed energy, `F(x^k)` for the smooth one.
    pub penalized_value: T,
    /// `μ_{k−1}`; 1 for the smooth solver.
    pub mu_prev: T,
    /// `μ_k`; 1 for the smooth solver.
    pub mu_cur: T,
    pub beta: T,
    /// `‖x^k − x^{k−1}‖²`
    pub prev_step_sq: T,
    /// `‖x^{k+1} − x^k‖²`
    pub next_step_sq: T,
    pub prev_eq_cur: bool,
    pub cur_eq_next: bool,
    /// Skip the support-change step bound (the starting point was not
    /// produced by a thresholding step).
    pub exempt_step_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// Energy went up between consecutive iterates.
    EnergyIncrease,
    /// Support-change step did not decrease the energy by the guaranteed amount.
    SupportChangeDecrement,
    /// `β_k` too large for the weight `τ_k` / `ζ_k`.
    BetaWeight,
    /// Support-change step shorter than `√(νμ_k)` or `δ`.
    StepLowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k: usize,
    pub kind: ViolationKind,
    /// Left-hand side of the failed `lhs <= rhs`.
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport<T> {
    pub k: usize,
    pub energy: T,
    /// `τ_k` or `ζ_k`
    pub weight: T,
    /// `E_k − E_{k−1}`, absent for the first report.
    pub decrement: Option<T>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EnergyKind<T> {
    Smoothed { kappa: T, nu: T },
    Smooth { delta: T },
}

/// Incremental checker for the energy sequence of one solver run.
#[derive(Debug, Clone)]
pub struct EnergyMonitor<T> {
    kind: EnergyKind<T>,
    step_const: T,
    smooth_const: T,
    prev: Option<(T, StepBundle<T>)>,
    violations: Vec<Violation>,
}

impl<T: Scalar> EnergyMonitor<T> {
    /// Monitor for `H` (smoothed solver).
    pub fn smoothed(constants: &TheoryConstants<T>) -> Self {
        Self::with_kind(
            EnergyKind::Smoothed {
                kappa: constants.kappa.unwrap_or_else(T::zero),
                nu: constants.nu.unwrap_or_else(T::zero),
            },
            constants,
        )
    }

    /// Monitor for `W` (smooth solver).
    pub fn smooth(constants: &TheoryConstants<T>) -> Self {
        Self::with_kind(
            EnergyKind::Smooth {
                delta: constants.delta,
            },
            constants,
        )
    }

    fn with_kind(kind: EnergyKind<T>, c: &TheoryConstants<T>) -> Self {
        Self {
            kind,
            step_const: c.step_const,
            smooth_const: c.smooth_const,
            prev: None,
            violations: Vec::new(),
        }
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn into_violations(self) -> Vec<Violation> {
        self.violations
    }

    /// Energy and weight of iterate `k` without recording anything.
    pub fn energy_of(&self, b: &StepBundle<T>) -> (T, T) {
        let branch = SupportBranch::from_flags(b.prev_eq_cur, b.cur_eq_next);
        match self.kind {
            EnergyKind::Smoothed { kappa, .. } => {
                let tau = compute_tau(
                    branch,
                    self.step_const,
                    self.smooth_const,
                    b.mu_prev,
                    b.mu_cur,
                    b.beta,
                );
                (
                    b.penalized_value + kappa * b.mu_cur + tau * b.prev_step_sq,
                    tau,
                )
            }
            EnergyKind::Smooth { .. } => {
                let zeta = compute_zeta(branch, self.step_const, self.smooth_const, b.beta);
                (b.penalized_value + zeta * b.prev_step_sq, zeta)
            }
        }
    }

    pub fn observe(&mut self, b: StepBundle<T>) -> AuditReport<T> {
        let (energy, weight) = self.energy_of(&b);
        let l = self.step_const;
        let ls = self.smooth_const;
        let two = T::of(2.0);
        let fslack = T::of(FORMULA_SLACK);
        let mut found = Vec::new();
        let mut flag = |kind, lhs: T, rhs: T| {
            found.push(Violation {
                k: b.k,
                kind,
                lhs: lhs.as_f64(),
                rhs: rhs.as_f64(),
            })
        };

        // β_k against its weight; μ is 1 for the smooth solver
        let coef = if b.cur_eq_next { l } else { two * l - ls } / (two * b.mu_cur);
        let lhs = coef * b.beta * b.beta;
        if lhs > weight * (T::one() + fslack) {
            flag(ViolationKind::BetaWeight, lhs, weight);
        }

        if !b.cur_eq_next && !b.exempt_step_bound {
            match self.kind {
                EnergyKind::Smoothed { nu, .. } => {
                    let rhs = nu * b.mu_cur;
                    if b.next_step_sq < rhs - fslack {
                        flag(ViolationKind::StepLowerBound, b.next_step_sq, rhs);
                    }
                }
                EnergyKind::Smooth { delta } => {
                    let step = b.next_step_sq.sqrt();
                    if step < delta - fslack {
                        flag(ViolationKind::StepLowerBound, step, delta);
                    }
                }
            }
        }

        let mut decrement = None;
        if let Some((prev_energy, prev)) = self.prev {
            let d = energy - prev_energy;
            decrement = Some(d);
            let eslack = T::of(ENERGY_SLACK) * (T::one() + energy.abs());
            if d > eslack {
                flag(ViolationKind::EnergyIncrease, energy, prev_energy);
            }
            if !prev.cur_eq_next {
                let bound = -(l - ls) / T::of(8.0) / prev.mu_cur * prev.next_step_sq;
                if d > bound + eslack {
                    flag(ViolationKind::SupportChangeDecrement, d, bound);
                }
            }
        }

        self.violations.extend_from_slice(&found);
        self.prev = Some((energy, b));
        AuditReport {
            k: b.k,
            energy,
            weight,
            decrement,
            violations: found,
        }
    }
}

/// Partial sums `Σ γ(1 − β²_{k+1} μ_k/μ_{k+1}) μ_k⁻¹ ‖x^{k+1} − x^k‖²` along a
/// smoothed-solver trace, paired with the energy drop `H_1 − H_{k+1}` that
/// bounds them.
pub fn summability_partial_sums<T: Scalar>(trace: &[IterationRecord<T>], gamma: T) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut acc = T::zero();
    let Some(first) = trace.first() else {
        return out;
    };
    for w in trace.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let (Some(mu_k), Some(mu_next)) = (cur.mu, next.mu) else {
            continue;
        };
        let factor = T::one() - next.beta * next.beta * mu_k / mu_next;
        acc += gamma * factor / mu_k * next.step_norm * next.step_norm;
        out.push((acc, first.energy - next.energy));
    }
    out
}

/// Partial sums `Σ (k+1)⁻¹ μ_k⁻² ‖x^{k+1} − x^k‖²`.
pub fn weighted_step_partial_sums<T: Scalar>(trace: &[IterationRecord<T>]) -> Vec<T> {
    let mut acc = T::zero();
    trace
        .windows(2)
        .filter_map(|w| {
            let mu = w[0].mu?;
            let k1 = T::of((w[0].k + 1) as f64);
            acc += w[1].step_norm * w[1].step_norm / (k1 * mu * mu);
            Some(acc)
        })
        .collect()
}

/// Cauchy-style convergence test `|E_k − E_{k−lag}| <= tol·(1 + |E_k|)` at the
/// end of a trace.
pub fn energy_settled<T: Scalar>(trace: &[IterationRecord<T>], lag: usize, tol: T) -> bool {
    if trace.len() <= lag {
        return false;
    }
    let last = trace[trace.len() - 1].energy;
    let earlier = trace[trace.len() - 1 - lag].energy;
    (last - earlier).abs() <= tol * (T::one() + last.abs())
}
