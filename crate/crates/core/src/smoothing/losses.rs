use super::{huber, smooth_plus, spectral_norm, Loss, SmoothLoss, SmoothableLoss};
use crate::error::Result;
use crate::linalg::{ensure_finite, ensure_len, DenseMatrix};
use crate::scalar::Scalar;

/// Default upper limit for the smoothing parameter (the usual `μ₀`).
pub const DEFAULT_MU_BAR: f64 = 0.7;

fn check_data<T: Scalar>(a: &DenseMatrix<T>, b: &[T], context: &'static str) -> Result<()> {
    ensure_len(a.rows(), b.len(), context)?;
    ensure_finite(b, context)
}

fn residual<T: Scalar>(a: &DenseMatrix<T>, b: &[T], x: &[T]) -> Vec<T> {
    let mut r = a.mul_vec(x);
    r.iter_mut().zip(b).for_each(|(ri, &bi)| *ri -= bi);
    r
}

/// `f(x) = ‖Ax − b‖₁`, smoothed row by row with the Huber function.
#[derive(Debug, Clone)]
pub struct L1Regression<T> {
    a: DenseMatrix<T>,
    b: Vec<T>,
    lip_over_mu: T,
    mu_bar: T,
}

impl<T: Scalar> L1Regression<T> {
    pub fn new(a: DenseMatrix<T>, b: Vec<T>) -> Result<Self> {
        check_data(&a, &b, "L1Regression::new")?;
        let lip_over_mu = spectral_norm(&a)?.lipschitz_bound();
        Ok(Self {
            a,
            b,
            lip_over_mu,
            mu_bar: T::of(DEFAULT_MU_BAR),
        })
    }

    pub fn with_mu_bar(mut self, mu_bar: T) -> Self {
        self.mu_bar = mu_bar;
        self
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.a
    }

    pub fn rhs(&self) -> &[T] {
        &self.b
    }
}

impl<T: Scalar> Loss<T> for L1Regression<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[T]) -> T {
        residual(&self.a, &self.b, x).iter().map(|r| r.abs()).sum()
    }

    fn subgradient_into(&self, x: &[T], out: &mut [T]) {
        let sign: Vec<T> = residual(&self.a, &self.b, x)
            .into_iter()
            .map(|r| {
                if r == T::zero() {
                    T::zero()
                } else {
                    r.signum()
                }
            })
            .collect();
        self.a.tr_mul_vec_into(&sign, out);
    }
}

impl<T: Scalar> SmoothableLoss<T> for L1Regression<T> {
    fn smoothed_value(&self, x: &[T], mu: T) -> T {
        residual(&self.a, &self.b, x)
            .into_iter()
            .map(|r| huber(r, mu).0)
            .sum()
    }

    fn smoothed_gradient_into(&self, x: &[T], mu: T, out: &mut [T]) {
        let d: Vec<T> = residual(&self.a, &self.b, x)
            .into_iter()
            .map(|r| huber(r, mu).1)
            .collect();
        self.a.tr_mul_vec_into(&d, out);
    }

    /// Each Huber term overshoots `|z|` by at most `μ/2`.
    fn kappa(&self) -> T {
        T::of(self.a.rows() as f64 / 2.0)
    }

    fn lip_over_mu(&self) -> T {
        self.lip_over_mu
    }

    fn mu_bar(&self) -> T {
        self.mu_bar
    }
}

/// `f(x) = (1/m)‖max(Ax, 0) − b‖₁`, smoothed by composing the Huber function
/// with a smoothed positive part.
///
/// The composite is not convex in general (the censoring kink bends the
/// wrong way when `b_i > 0`), so only the approximation and Lipschitz
/// properties of the smoothing contract are guaranteed here.
#[derive(Debug, Clone)]
pub struct CensoredRegression<T> {
    a: DenseMatrix<T>,
    b: Vec<T>,
    lip_over_mu: T,
    mu_bar: T,
}

impl<T: Scalar> CensoredRegression<T> {
    pub fn new(a: DenseMatrix<T>, b: Vec<T>) -> Result<Self> {
        check_data(&a, &b, "CensoredRegression::new")?;
        let m = T::of(a.rows().max(1) as f64);
        let lip_over_mu = T::of(1.5) / m * spectral_norm(&a)?.lipschitz_bound();
        Ok(Self {
            a,
            b,
            lip_over_mu,
            mu_bar: T::of(DEFAULT_MU_BAR),
        })
    }

    pub fn with_mu_bar(mut self, mu_bar: T) -> Self {
        self.mu_bar = mu_bar;
        self
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.a
    }

    pub fn rhs(&self) -> &[T] {
        &self.b
    }

    fn inv_m(&self) -> T {
        T::one() / T::of(self.a.rows() as f64)
    }
}

impl<T: Scalar> Loss<T> for CensoredRegression<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[T]) -> T {
        let s = self.a.mul_vec(x);
        let total: T = s
            .iter()
            .zip(&self.b)
            .map(|(&si, &bi)| (si.max(T::zero()) - bi).abs())
            .sum();
        total * self.inv_m()
    }

    fn subgradient_into(&self, x: &[T], out: &mut [T]) {
        let s = self.a.mul_vec(x);
        let w: Vec<T> = s
            .iter()
            .zip(&self.b)
            .map(|(&si, &bi)| {
                if si > T::zero() && si != bi {
                    (si - bi).signum() * self.inv_m()
                } else {
                    T::zero()
                }
            })
            .collect();
        self.a.tr_mul_vec_into(&w, out);
    }
}

impl<T: Scalar> SmoothableLoss<T> for CensoredRegression<T> {
    fn smoothed_value(&self, x: &[T], mu: T) -> T {
        let s = self.a.mul_vec(x);
        let total: T = s
            .iter()
            .zip(&self.b)
            .map(|(&si, &bi)| huber(smooth_plus(si, mu).0 - bi, mu).0)
            .sum();
        total * self.inv_m()
    }

    fn smoothed_gradient_into(&self, x: &[T], mu: T, out: &mut [T]) {
        let s = self.a.mul_vec(x);
        let w: Vec<T> = s
            .iter()
            .zip(&self.b)
            .map(|(&si, &bi)| {
                let (p, dp) = smooth_plus(si, mu);
                huber(p - bi, mu).1 * dp * self.inv_m()
            })
            .collect();
        self.a.tr_mul_vec_into(&w, out);
    }

    /// `∂f̃/∂μ` per row lies in `[-1/4, 3/4]`: the Huber part contributes
    /// `[0, 1/2]` and the smoothed positive part `[0, 1/4]` through a
    /// derivative bounded by one.
    fn kappa(&self) -> T {
        T::of(0.75)
    }

    fn lip_over_mu(&self) -> T {
        self.lip_over_mu
    }

    fn mu_bar(&self) -> T {
        self.mu_bar
    }
}

/// `f(x) = ½‖Ax − b‖²`.
#[derive(Debug, Clone)]
pub struct LeastSquares<T> {
    a: DenseMatrix<T>,
    b: Vec<T>,
    lip: T,
}

impl<T: Scalar> LeastSquares<T> {
    pub fn new(a: DenseMatrix<T>, b: Vec<T>) -> Result<Self> {
        check_data(&a, &b, "LeastSquares::new")?;
        let lip = spectral_norm(&a)?.lipschitz_bound();
        Ok(Self { a, b, lip })
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.a
    }

    pub fn rhs(&self) -> &[T] {
        &self.b
    }
}

impl<T: Scalar> Loss<T> for LeastSquares<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[T]) -> T {
        let r = residual(&self.a, &self.b, x);
        T::of(0.5) * r.iter().map(|&v| v * v).sum::<T>()
    }

    fn subgradient_into(&self, x: &[T], out: &mut [T]) {
        self.gradient_into(x, out);
    }

    fn smooth_lipschitz(&self) -> Option<T> {
        Some(self.lip)
    }
}

impl<T: Scalar> SmoothLoss<T> for LeastSquares<T> {
    fn gradient_into(&self, x: &[T], out: &mut [T]) {
        let r = residual(&self.a, &self.b, x);
        self.a.tr_mul_vec_into(&r, out);
    }

    fn lip(&self) -> T {
        self.lip
    }
}
