use thiserror::Error;

/// Contract violations and numerical failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value in {context} at index {index}")]
    NonFinite { context: &'static str, index: usize },
    #[error("invalid box bounds at index {index}: lower={lower}, upper={upper} (need lower <= 0 <= upper, lower < upper)")]
    InvalidBox {
        index: usize,
        lower: f64,
        upper: f64,
    },
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(
        "power iteration did not converge after {iterations} iterations (last estimate {estimate})"
    )]
    SpectralNormNotConverged { estimate: f64, iterations: usize },
    #[error("dimension {dim} exceeds the enumeration limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
