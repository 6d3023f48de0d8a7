use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, DenseMatrix};
use crate::scalar::Scalar;

/// Inflation applied to power-iteration estimates before they are used as
/// Lipschitz constants; the iteration approaches the top eigenvalue from below.
pub const LIPSCHITZ_SAFETY: f64 = 1.001;

const MAX_ITER: usize = 1000;

/// Result of [`spectral_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralNorm<T> {
    /// `‖A‖ = √λ_max(AᵀA)`
    pub norm: T,
    /// `‖AᵀA‖ = λ_max(AᵀA)`
    pub gram_norm: T,
    pub iterations: usize,
    /// Set when `A` is identically zero; `norm` is then exactly 0.
    pub zero_matrix: bool,
}

impl<T: Scalar> SpectralNorm<T> {
    /// `LIPSCHITZ_SAFETY · ‖AᵀA‖`.
    pub fn lipschitz_bound(&self) -> T {
        T::of(LIPSCHITZ_SAFETY) * self.gram_norm
    }
}

/// Power iteration on `AᵀA`.
///
/// Stops once the Rayleigh quotient changes by at most `1e-8` relative (or
/// a few hundred ulps for `f32`) and the eigen-residual is small.
pub fn spectral_norm<T: Scalar>(a: &DenseMatrix<T>) -> Result<SpectralNorm<T>> {
    let n = a.cols();
    if a.is_zero() || n == 0 || a.rows() == 0 {
        return Ok(SpectralNorm {
            norm: T::zero(),
            gram_norm: T::zero(),
            iterations: 0,
            zero_matrix: true,
        });
    }
    let tol = T::of(1e-8).max(T::of(100.0) * T::epsilon());
    let res_tol = tol.sqrt();

    // deterministic start with no special alignment to coordinate axes
    let mut v: Vec<T> = (0..n)
        .map(|i| T::one() + T::of(0.1) * T::of(((i * 7919) % 13) as f64))
        .collect();
    normalize(&mut v);

    let mut av = vec![T::zero(); a.rows()];
    let mut w = vec![T::zero(); n];
    let mut lambda = T::zero();
    for it in 1..=MAX_ITER {
        a.mul_vec_into(&v, &mut av);
        let rayleigh = dot(&av, &av);
        a.tr_mul_vec_into(&av, &mut w);
        if rayleigh == T::zero() {
            // start vector in the null space; perturb and retry
            v.iter_mut()
                .enumerate()
                .for_each(|(i, x)| *x += T::of(1.0 / (i + 2) as f64));
            normalize(&mut v);
            continue;
        }
        let residual = w
            .iter()
            .zip(&v)
            .map(|(&wi, &vi)| (wi - rayleigh * vi).powi(2))
            .sum::<T>()
            .sqrt();
        let converged =
            (rayleigh - lambda).abs() <= tol * rayleigh && residual <= res_tol * rayleigh;
        lambda = rayleigh;
        if converged {
            return Ok(SpectralNorm {
                norm: lambda.sqrt(),
                gram_norm: lambda,
                iterations: it,
                zero_matrix: false,
            });
        }
        v.copy_from_slice(&w);
        normalize(&mut v);
    }
    Err(Error::SpectralNormNotConverged {
        estimate: lambda.sqrt().as_f64(),
        iterations: MAX_ITER,
    })
}

fn normalize<T: Scalar>(v: &mut [T]) {
    let nrm = norm2(v);
    if nrm > T::zero() {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
}
