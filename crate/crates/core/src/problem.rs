use crate::boxset::BoxSet;
use crate::error::{invalid, Result};
use crate::linalg::ensure_len;
use crate::scalar::Scalar;
use crate::smoothing::Loss;
use crate::support::l0_norm;

/// `min f(x) + λ‖x‖₀` subject to `x ∈ box`.
#[derive(Debug, Clone)]
pub struct Problem<T, Lo> {
    pub loss: Lo,
    pub bounds: BoxSet<T>,
    pub lambda: T,
}

/// Loss value, penalized objective and cardinality at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValue<T> {
    pub f_value: T,
    pub big_f: T,
    pub card: usize,
}

impl<T: Scalar, Lo: Loss<T>> Problem<T, Lo> {
    pub fn new(loss: Lo, bounds: BoxSet<T>, lambda: T) -> Result<Self> {
        ensure_len(bounds.dim(), loss.dim(), "Problem::new")?;
        // λ = 0 is admitted for the unpenalized special case
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(invalid(
                "lambda",
                lambda.as_f64(),
                "must be finite and >= 0",
            ));
        }
        Ok(Self {
            loss,
            bounds,
            lambda,
        })
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// `F(x) = f(x) + λ‖x‖₀` with the exact (unsmoothed) loss.
    pub fn objective(&self, x: &[T]) -> ObjectiveValue<T> {
        let f_value = self.loss.value(x);
        let card = l0_norm(x);
        ObjectiveValue {
            f_value,
            big_f: f_value + self.lambda * T::of(card as f64),
            card,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::smoothing::LeastSquares;

    fn ls(b: Vec<f64>, lambda: f64) -> Problem<f64, LeastSquares<f64>> {
        let n = b.len();
        let loss = LeastSquares::new(DenseMatrix::identity(n), b).unwrap();
        Problem::new(loss, BoxSet::uniform(n, -5.0, 5.0).unwrap(), lambda).unwrap()
    }

    #[test]
    fn objective_hand_values() {
        let p = ls(vec![1.0, 1.0], 0.3);
        let v = p.objective(&[1.0, 0.0]);
        assert_eq!(v.f_value, 0.5);
        assert_eq!(v.card, 1);
        assert!((v.big_f - 0.8).abs() < 1e-15);

        let z = ls(vec![0.0, 0.0], 0.3);
        let v = z.objective(&[0.0, 0.0]);
        assert_eq!(v.big_f, v.f_value);

        let v = ls(vec![1.0, 1.0], 0.3).objective(&[1.0, 1.0]);
        assert_eq!(v.f_value, 0.0);
        assert!((v.big_f - 0.6).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_lambda_and_mismatch() {
        let loss = LeastSquares::new(DenseMatrix::identity(2), vec![0.0, 0.0]).unwrap();
        assert!(Problem::new(loss.clone(), BoxSet::uniform(2, -1.0, 1.0).unwrap(), -1.0).is_err());
        assert!(Problem::new(loss, BoxSet::uniform(3, -1.0, 1.0).unwrap(), 1.0).is_err());
    }
}
