use crate::scalar::Scalar;
use crate::support::SupportSet;

/// `‖[g]_{I^c}‖_∞ ≤ ε`, plus `μ ≤ ε` when a smoothing parameter is given.
/// The sup over an empty set of nonzeros is 0.
pub fn stopping_check<T: Scalar>(
    grad_at_x: &[T],
    support: &SupportSet,
    mu: Option<T>,
    epsilon: T,
) -> bool {
    if let Some(mu) = mu {
        if mu > epsilon {
            return false;
        }
    }
    grad_at_x
        .iter()
        .enumerate()
        .filter(|(i, _)| !support.is_zero(*i))
        .all(|(_, g)| g.abs() <= epsilon)
}
