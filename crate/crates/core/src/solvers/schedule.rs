use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// `μ_1 = μ₀`, `μ_{k+1} = μ₀/(k+2)^σ`. Index 0 is treated as `μ₀` so that
/// `μ_k/μ_{k−1} = 1` on the first iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingSchedule<T> {
    pub mu0: T,
    pub sigma: T,
}

impl<T: Scalar> SmoothingSchedule<T> {
    pub fn new(mu0: T, sigma: T) -> Self {
        Self { mu0, sigma }
    }

    pub fn mu(&self, k: usize) -> T {
        if k <= 1 {
            self.mu0
        } else {
            self.mu0 / T::of((k + 1) as f64).powf(self.sigma)
        }
    }

    /// `μ_k/μ_{k−1}`
    pub fn ratio(&self, k: usize) -> T {
        self.mu(k) / self.mu(k.saturating_sub(1))
    }

    /// Smallest `k` with `μ_k ≤ ε`.
    pub fn first_below(&self, eps: T) -> usize {
        if self.mu0 <= eps {
            return 1;
        }
        let guess = (self.mu0 / eps)
            .as_f64()
            .powf(1.0 / self.sigma.as_f64())
            .ceil() as usize;
        let mut k = guess.saturating_sub(3).max(2);
        while self.mu(k) > eps {
            k += 1;
        }
        k
    }
}
