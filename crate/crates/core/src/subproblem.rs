//! Closed-form minimizer of the quadratic-plus-ℓ0 surrogate over a box.
//!
//! The surrogate around `y` is
//! `Q(x) = f(y) + ⟨g, x − y⟩ + (L/2μ)‖x − y‖² + λ‖x‖₀`
//! and separates by coordinate: each coordinate is either `0` or the box
//! projection of the gradient point `S = y − (μ/L) g`.

use crate::boxset::BoxSet;
use crate::error::{invalid, Result};
use crate::linalg::{ensure_finite, ensure_len};
use crate::scalar::Scalar;
use crate::support::l0_norm;

/// Everything one thresholding step needs. For smooth losses pass `mu = 1`.
#[derive(Debug, Clone, Copy)]
pub struct SubproblemInput<'a, T> {
    pub y: &'a [T],
    pub grad: &'a [T],
    pub mu: T,
    pub step_const: T,
    pub lambda: T,
    pub bounds: &'a BoxSet<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardThresholdResult<T> {
    pub x_next: Vec<T>,
    /// `S = y − (μ/L) g`
    pub s_point: Vec<T>,
    /// `q = P(S) − S`
    pub q_vec: Vec<T>,
    /// Coordinates where `S² − q²` hit the threshold exactly (resolved to 0).
    pub tie_indices: Vec<usize>,
}

impl<'a, T: Scalar> SubproblemInput<'a, T> {
    pub fn validate(&self) -> Result<()> {
        let n = self.bounds.dim();
        ensure_len(n, self.y.len(), "SubproblemInput.y")?;
        ensure_len(n, self.grad.len(), "SubproblemInput.grad")?;
        ensure_finite(self.y, "SubproblemInput.y")?;
        ensure_finite(self.grad, "SubproblemInput.grad")?;
        if !(self.mu > T::zero()) {
            return Err(invalid("mu", self.mu.as_f64(), "must be > 0"));
        }
        if !(self.step_const > T::zero()) || !self.step_const.is_finite() {
            return Err(invalid(
                "L",
                self.step_const.as_f64(),
                "must be finite and > 0",
            ));
        }
        if !(self.lambda >= T::zero()) {
            return Err(invalid("lambda", self.lambda.as_f64(), "must be >= 0"));
        }
        Ok(())
    }

    /// `2λμ/L`
    pub fn threshold(&self) -> T {
        T::of(2.0) * self.lambda * self.mu / self.step_const
    }

    /// Curvature `L/(2μ)` of the quadratic term.
    fn curvature(&self) -> T {
        self.step_const / (T::of(2.0) * self.mu)
    }

    /// The part of `Q` that depends on coordinate `i` when it takes value `xi`.
    pub fn coordinate_contribution(&self, i: usize, xi: T) -> T {
        let d = xi - self.y[i];
        let pen = if xi == T::zero() {
            T::zero()
        } else {
            self.lambda
        };
        self.grad[i] * d + self.curvature() * d * d + pen
    }
}

/// Solves `min_{x ∈ box} Q(x, y, μ)` exactly. Ties go to zero.
pub fn hard_threshold_step<T: Scalar>(
    input: &SubproblemInput<'_, T>,
) -> Result<HardThresholdResult<T>> {
    input.validate()?;
    let n = input.y.len();
    let ratio = input.mu / input.step_const;
    let thr = input.threshold();
    let mut x_next = Vec::with_capacity(n);
    let mut s_point = Vec::with_capacity(n);
    let mut q_vec = Vec::with_capacity(n);
    let mut tie_indices = Vec::new();
    for i in 0..n {
        let s = input.y[i] - ratio * input.grad[i];
        let p = input.bounds.clamp_coord(i, s);
        let q = p - s;
        let t = s * s - q * q;
        let xi = if t > thr {
            p
        } else {
            if t == thr {
                tie_indices.push(i);
            }
            T::zero()
        };
        // a projected value of -0.0 would still count as zero; normalize it
        x_next.push(if xi == T::zero() { T::zero() } else { xi });
        s_point.push(s);
        q_vec.push(q);
    }
    Ok(HardThresholdResult {
        x_next,
        s_point,
        q_vec,
        tie_indices,
    })
}

/// `Q(x, y, μ)` evaluated directly.
pub fn surrogate_value<T: Scalar>(input: &SubproblemInput<'_, T>, x: &[T], f_at_y: T) -> T {
    let mut lin = T::zero();
    let mut quad = T::zero();
    for ((&xi, &yi), &gi) in x.iter().zip(input.y).zip(input.grad) {
        let d = xi - yi;
        lin += gi * d;
        quad += d * d;
    }
    f_at_y + lin + input.curvature() * quad + input.lambda * T::of(l0_norm(x) as f64)
}

/// Coordinates where switching to the other candidate (`0` versus the
/// projected point) would lower `Q` by more than the rounding slack.
pub fn separability_violations<T: Scalar>(
    input: &SubproblemInput<'_, T>,
    result: &HardThresholdResult<T>,
) -> Vec<usize> {
    let slack = T::of(1e-12);
    (0..result.x_next.len())
        .filter(|&i| {
            let chosen = result.x_next[i];
            let p = result.s_point[i] + result.q_vec[i];
            let other = if chosen == T::zero() { p } else { T::zero() };
            let qc = input.coordinate_contribution(i, chosen);
            let qo = input.coordinate_contribution(i, other);
            qo < qc - slack * (T::one() + qc.abs())
        })
        .collect()
}
