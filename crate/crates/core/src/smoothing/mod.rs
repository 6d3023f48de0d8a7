//! Loss functions and their smoothing families.
//!
//! A nonsmooth convex loss `f` is paired with a family `f̃(·, μ)` of C¹
//! approximations with `|f̃(x, μ) − f(x)| ≤ κμ` and a gradient that is
//! `L_f̃/μ`-Lipschitz. Smooth losses expose their gradient and `L_f` directly.

mod losses;
mod scalar_smoothers;
mod spectral;

pub use losses::{CensoredRegression, L1Regression, LeastSquares, DEFAULT_MU_BAR};
pub(crate) use scalar_smoothers::{huber, smooth_plus};
pub use scalar_smoothers::{huber_scalar, smooth_plus_scalar};
pub use spectral::{spectral_norm, SpectralNorm, LIPSCHITZ_SAFETY};

use crate::scalar::Scalar;

/// Exact loss `f` together with one element of its subdifferential.
pub trait Loss<T: Scalar> {
    fn dim(&self) -> usize;

    /// Exact, unsmoothed value `f(x)`.
    fn value(&self, x: &[T]) -> T;

    /// Writes some `ξ ∈ ∂f(x)` into `out` (the gradient when `f` is smooth).
    fn subgradient_into(&self, x: &[T], out: &mut [T]);

    /// `Some(L_f)` when `∇f` is Lipschitz, `None` for nonsmooth losses.
    fn smooth_lipschitz(&self) -> Option<T> {
        None
    }
}

/// A nonsmooth loss with its smoothing function `f̃(x, μ)`.
pub trait SmoothableLoss<T: Scalar>: Loss<T> {
    fn smoothed_value(&self, x: &[T], mu: T) -> T;

    fn smoothed_gradient_into(&self, x: &[T], mu: T, out: &mut [T]);

    /// Uniform approximation constant: `|f̃(x, μ) − f(x)| ≤ κμ`.
    fn kappa(&self) -> T;

    /// `L_f̃`, so that `∇f̃(·, μ)` is `L_f̃/μ`-Lipschitz.
    fn lip_over_mu(&self) -> T;

    /// Largest smoothing parameter for which the contract holds.
    fn mu_bar(&self) -> T;

    fn smoothed_gradient(&self, x: &[T], mu: T) -> Vec<T> {
        let mut g = vec![T::zero(); self.dim()];
        self.smoothed_gradient_into(x, mu, &mut g);
        g
    }
}

/// A convex loss with `L_f`-Lipschitz gradient.
pub trait SmoothLoss<T: Scalar>: Loss<T> {
    fn gradient_into(&self, x: &[T], out: &mut [T]);

    fn lip(&self) -> T;

    fn gradient(&self, x: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); self.dim()];
        self.gradient_into(x, &mut g);
        g
    }
}
