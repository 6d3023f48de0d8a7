//! Zero-index sets `I(x) = {i : x_i = 0}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// The set of coordinates where a vector is exactly zero, together with the
/// ambient dimension so the complement (the nonzeros) is well defined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet {
    dim: usize,
    zero_indices: BTreeSet<usize>,
}

impl SupportSet {
    /// Exact-equality zero test; the thresholding step writes literal zeros.
    pub fn of<T: Scalar>(x: &[T]) -> Self {
        Self {
            dim: x.len(),
            zero_indices: x
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == T::zero())
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn from_zero_indices(dim: usize, zeros: impl IntoIterator<Item = usize>) -> Self {
        let zero_indices: BTreeSet<usize> = zeros.into_iter().collect();
        assert!(
            zero_indices.iter().all(|&i| i < dim),
            "zero index out of range"
        );
        Self { dim, zero_indices }
    }

    /// Support whose zero set is given by the set bits of `mask`.
    pub fn from_mask(dim: usize, mask: u64) -> Self {
        Self::from_zero_indices(dim, (0..dim).filter(|i| mask >> i & 1 == 1))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero_indices(&self) -> &BTreeSet<usize> {
        &self.zero_indices
    }

    pub fn is_zero(&self, i: usize) -> bool {
        self.zero_indices.contains(&i)
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.dim).filter(|i| !self.is_zero(*i)).collect()
    }

    /// `‖x‖₀` of any vector with this zero set.
    pub fn cardinality(&self) -> usize {
        self.dim - self.zero_indices.len()
    }

    /// `true` iff every zero of `self` is also a zero of `other`.
    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.zero_indices.is_subset(&other.zero_indices)
    }
}

/// Number of nonzero entries.
pub fn l0_norm<T: Scalar>(x: &[T]) -> usize {
    x.iter().filter(|&&v| v != T::zero()).count()
}

/// Returns `true` iff `a` and `b` have the same zero pattern.
pub fn same_support<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(&x, &y)| (x == T::zero()) == (y == T::zero()))
}
