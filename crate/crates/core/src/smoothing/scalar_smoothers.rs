use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Huber smoothing of `|z|`: `|z|` outside `[-μ, μ]`, `z²/(2μ) + μ/2` inside.
/// Returns `(value, d/dz)`.
#[inline]
pub(crate) fn huber<T: Scalar>(z: T, mu: T) -> (T, T) {
    if z.abs() > mu {
        (z.abs(), z.signum())
    } else {
        let two = T::of(2.0);
        (z * z / (two * mu) + mu / two, z / mu)
    }
}

/// Smoothing of `max(s, 0)`: exact outside `[-μ, μ]`, `(s + μ)²/(4μ)` inside.
/// Returns `(value, d/ds)`.
#[inline]
pub(crate) fn smooth_plus<T: Scalar>(s: T, mu: T) -> (T, T) {
    if s > mu {
        (s, T::one())
    } else if s < -mu {
        (T::zero(), T::zero())
    } else {
        let t = s + mu;
        (t * t / (T::of(4.0) * mu), t / (T::of(2.0) * mu))
    }
}

fn check_mu<T: Scalar>(mu: T) -> Result<()> {
    if mu > T::zero() && mu.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "mu",
            mu.as_f64(),
            "smoothing parameter must be > 0",
        ))
    }
}

pub fn huber_scalar<T: Scalar>(z: T, mu: T) -> Result<(T, T)> {
    check_mu(mu)?;
    Ok(huber(z, mu))
}

pub fn smooth_plus_scalar<T: Scalar>(s: T, mu: T) -> Result<(T, T)> {
    check_mu(mu)?;
    Ok(smooth_plus(s, mu))
}
