//! Componentwise interval constraints `lower <= x <= upper`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, ensure_len};
use crate::scalar::Scalar;

/// Feasible box `[lower, upper]` with `lower_i <= 0 <= upper_i` and
/// `lower_i < upper_i`. Bounds may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSet<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> BoxSet<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        ensure_len(lower.len(), upper.len(), "BoxSet::new")?;
        if lower.is_empty() {
            return Err(crate::error::invalid("dim", 0.0, "box must be nonempty"));
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            let ok = !l.is_nan() && !u.is_nan() && l <= T::zero() && u >= T::zero() && l < u;
            if !ok {
                return Err(Error::InvalidBox {
                    index: i,
                    lower: l.as_f64(),
                    upper: u.as_f64(),
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lower, upper]` in every coordinate.
    pub fn uniform(dim: usize, lower: T, upper: T) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    /// `ℝⁿ`, i.e. no constraint at all.
    pub fn unbounded(dim: usize) -> Self {
        Self {
            lower: vec![T::neg_infinity(); dim],
            upper: vec![T::infinity(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// Clamp of a single coordinate.
    #[inline]
    pub fn clamp_coord(&self, i: usize, v: T) -> T {
        v.max(self.lower[i]).min(self.upper[i])
    }

    /// Euclidean projection onto the box.
    pub fn project(&self, x: &[T]) -> Result<Vec<T>> {
        ensure_len(self.dim(), x.len(), "BoxSet::project")?;
        ensure_finite(x, "BoxSet::project input")?;
        Ok(x.iter()
            .enumerate()
            .map(|(i, &v)| self.clamp_coord(i, v))
            .collect())
    }

    pub fn project_in_place(&self, x: &mut [T]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = self.clamp_coord(i, *v);
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| l <= v && v <= u)
    }
}

/// Free-function form of [`BoxSet::project`].
pub fn project_box<T: Scalar>(x: &[T], b: &BoxSet<T>) -> Result<Vec<T>> {
    b.project(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clamps_to_bounds() {
        let b = BoxSet::uniform(2, -1.0, 1.0).unwrap();
        assert_eq!(project_box(&[2.0, -3.0], &b).unwrap(), vec![1.0, -1.0]);
        assert_eq!(project_box(&[0.5, -0.2], &b).unwrap(), vec![0.5, -0.2]);
        let r = BoxSet::<f64>::unbounded(1);
        assert_eq!(project_box(&[7.0], &r).unwrap(), vec![7.0]);
    }

    #[test]
    fn rejects_bad_boxes_and_inputs() {
        assert!(BoxSet::new(vec![0.5], vec![1.0]).is_err());
        assert!(BoxSet::new(vec![0.0], vec![0.0]).is_err());
        assert!(BoxSet::new(vec![-1.0], vec![f64::NAN]).is_err());
        assert!(BoxSet::new(vec![-1.0, 0.0], vec![1.0]).is_err());
        let b = BoxSet::uniform(2, -1.0, 1.0).unwrap();
        assert!(matches!(
            b.project(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(b.project(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn half_infinite_bounds() {
        let b = BoxSet::new(vec![0.0, f64::NEG_INFINITY], vec![f64::INFINITY, 0.0]).unwrap();
        assert_eq!(b.project(&[-3.0, -3.0]).unwrap(), vec![0.0, -3.0]);
        assert_eq!(b.project(&[1e300, 2.0]).unwrap(), vec![1e300, 0.0]);
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_nonexpansive(
            x in prop::collection::vec(-10.0f64..10.0, 5),
            y in prop::collection::vec(-10.0f64..10.0, 5),
            lo in prop::collection::vec(-3.0f64..0.0, 5),
            hi in prop::collection::vec(0.01f64..3.0, 5),
        ) {
            let b = BoxSet::new(lo, hi).unwrap();
            let px = b.project(&x).unwrap();
            let py = b.project(&y).unwrap();
            prop_assert!(b.contains(&px));
            prop_assert_eq!(b.project(&px).unwrap(), px.clone());
            let dp = crate::linalg::dist_sq(&px, &py);
            let d = crate::linalg::dist_sq(&x, &y);
            prop_assert!(dp <= d + 1e-12);
        }
    }
}
