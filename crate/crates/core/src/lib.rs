//! Sparse regression with an ℓ0 penalty over a box.
//!
//! Solves `min f(x) + λ‖x‖₀` subject to `l ≤ x ≤ u` by extrapolated iterative
//! hard thresholding. Nonsmooth losses are handled through a smoothing
//! parameter that is driven to zero along the iterations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boxset;
pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod scalar;
pub mod smoothing;
pub mod solvers;
pub mod subproblem;
pub mod support;

pub use boxset::{project_box, BoxSet};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use problem::{ObjectiveValue, Problem};
pub use scalar::Scalar;
pub use smoothing::{
    huber_scalar, smooth_plus_scalar, spectral_norm, CensoredRegression, L1Regression,
    LeastSquares, Loss, SmoothLoss, SmoothableLoss, SpectralNorm,
};
pub use solvers::{
    fiht_solve, sfiht_solve, BetaStrategy, FihtConfig, IterationRecord, Regime, SfihtConfig,
    SolveError, SolveResult, SolveStatus,
};
pub use subproblem::{hard_threshold_step, HardThresholdResult, SubproblemInput};
pub use support::{l0_norm, SupportSet};

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type Box64 = BoxSet<f64>;
pub type Box32 = BoxSet<f32>;
pub type L1Problem = Problem<f64, L1Regression<f64>>;
pub type CensoredProblem = Problem<f64, CensoredRegression<f64>>;
pub type LeastSquaresProblem = Problem<f64, LeastSquares<f64>>;
pub type L1Problem32 = Problem<f32, L1Regression<f32>>;
pub type LeastSquaresProblem32 = Problem<f32, LeastSquares<f32>>;
pub type Trace = Vec<IterationRecord<f64>>;
