//! Brute-force ground truth for tiny instances.
//!
//! A point is a local minimizer of `f + λ‖·‖₀` over a box exactly when it
//! minimizes `f` over the box with its own zero pattern enforced, so local
//! minimizers can be certified by solving one convex problem per zero set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_len, norm2};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::smoothing::Loss;
use crate::support::SupportSet;

/// Largest dimension accepted by the enumeration routines.
pub const MAX_ORACLE_DIM: usize = 12;

const SMOOTH_MAX_ITER: usize = 1_000_000;
const SMOOTH_TOL: f64 = 1e-9;
const SUBGRAD_STAGES: usize = 40;
const SUBGRAD_STAGE_LEN: usize = 1500;
const SCOUT_STAGES: usize = 4;
const SCOUT_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedSolution<T> {
    pub x: Vec<T>,
    pub value: T,
    /// `false` when the tolerance was not certified (always for nonsmooth losses).
    pub precise: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportCertificate<T> {
    /// Declared zero set.
    pub support: SupportSet,
    pub restricted_minimizer: Vec<T>,
    /// `f` at the restricted minimizer.
    pub restricted_value: T,
    /// `restricted_value + λ·(number of free coordinates)`.
    pub penalized_value: T,
    pub is_local_min_of_f: bool,
    pub precise: bool,
}

fn guard(dim: usize) -> Result<()> {
    if dim > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_ORACLE_DIM,
        });
    }
    Ok(())
}

fn project_restricted<T: Scalar, Lo>(problem: &Problem<T, Lo>, support: &SupportSet, x: &mut [T]) {
    problem.bounds.project_in_place(x);
    for &i in support.zero_indices() {
        x[i] = T::zero();
    }
}

/// Minimizes `f` over the box with `x_j = 0` on the declared zero set.
///
/// Smooth losses start from the origin. Nonsmooth losses may be nonconvex
/// on the box, so a short run is made from the origin and from a few
/// interior points, and the full run continues from the best of them.
pub fn solve_restricted<T: Scalar, Lo: Loss<T>>(
    problem: &Problem<T, Lo>,
    support: &SupportSet,
) -> Result<RestrictedSolution<T>> {
    let n = problem.dim();
    let origin = vec![T::zero(); n];
    if problem.loss.smooth_lipschitz().is_some() {
        return solve_restricted_from(problem, support, &origin);
    }
    guard(n)?;
    ensure_len(n, support.dim(), "solve_restricted.support")?;
    let mut starts = vec![origin];
    for t in SCOUT_FRACTIONS {
        let t = T::of(t);
        let p: Vec<T> = (0..n)
            .map(|i| {
                let lo = problem.bounds.lower()[i].max(-T::one());
                let hi = problem.bounds.upper()[i].min(T::one());
                lo + t * (hi - lo)
            })
            .collect();
        starts.push(p);
    }
    let mut best: Option<RestrictedSolution<T>> = None;
    let mut spent = 0;
    for mut x in starts {
        project_restricted(problem, support, &mut x);
        let r = restarted_subgradient(problem, support, x, SCOUT_STAGES);
        spent += r.iterations;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    let scout = best.expect("at least one start");
    let mut full = restarted_subgradient(problem, support, scout.x, SUBGRAD_STAGES);
    full.iterations += spent;
    Ok(full)
}

pub fn solve_restricted_from<T: Scalar, Lo: Loss<T>>(
    problem: &Problem<T, Lo>,
    support: &SupportSet,
    init: &[T],
) -> Result<RestrictedSolution<T>> {
    let n = problem.dim();
    guard(n)?;
    ensure_len(n, support.dim(), "solve_restricted.support")?;
    ensure_len(n, init.len(), "solve_restricted.init")?;
    let mut x = init.to_vec();
    project_restricted(problem, support, &mut x);
    Ok(match problem.loss.smooth_lipschitz() {
        Some(lf) if lf > T::zero() => projected_gradient(problem, support, x, lf),
        Some(_) => RestrictedSolution {
            value: problem.loss.value(&x),
            x,
            precise: true,
            iterations: 0,
        },
        None => restarted_subgradient(problem, support, x, SUBGRAD_STAGES),
    })
}

fn projected_gradient<T: Scalar, Lo: Loss<T>>(
    problem: &Problem<T, Lo>,
    support: &SupportSet,
    mut x: Vec<T>,
    lf: T,
) -> RestrictedSolution<T> {
    let n = x.len();
    let mut g = vec![T::zero(); n];
    let mut next = vec![T::zero(); n];
    let tol = T::of(SMOOTH_TOL);
    for it in 1..=SMOOTH_MAX_ITER {
        problem.loss.subgradient_into(&x, &mut g);
        for i in 0..n {
            next[i] = x[i] - g[i] / lf;
        }
        project_restricted(problem, support, &mut next);
        let gap = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (*a - *b) * (*a - *b))
            .sum::<T>()
            .sqrt()
            * lf;
        std::mem::swap(&mut x, &mut next);
        if gap <= tol {
            return RestrictedSolution {
                value: problem.loss.value(&x),
                x,
                precise: true,
                iterations: it,
            };
        }
    }
    RestrictedSolution {
        value: problem.loss.value(&x),
        x,
        precise: false,
        iterations: SMOOTH_MAX_ITER,
    }
}

/// Projected subgradient with normalized steps `c/√t`. Each stage restarts
/// from the best point found so far and shrinks `c` by 2.
fn restarted_subgradient<T: Scalar, Lo: Loss<T>>(
    problem: &Problem<T, Lo>,
    support: &SupportSet,
    x: Vec<T>,
    stages: usize,
) -> RestrictedSolution<T> {
    let n = x.len();
    let mut g = vec![T::zero(); n];
    let mut best = x.clone();
    let mut best_val = problem.loss.value(&best);
    let mut iterations = 0;

    problem.loss.subgradient_into(&best, &mut g);
    for &i in support.zero_indices() {
        g[i] = T::zero();
    }
    let g0 = norm2(&g);
    if g0 == T::zero() {
        return RestrictedSolution {
            x: best,
            value: best_val,
            precise: false,
            iterations,
        };
    }
    let width = problem
        .bounds
        .lower()
        .iter()
        .zip(problem.bounds.upper())
        .map(|(l, u)| *u - *l)
        .fold(T::zero(), T::max);
    let mut c = (best_val.abs() / g0).max(T::of(1e-3)).min(width);

    let mut x = best.clone();
    for _ in 0..stages {
        x.copy_from_slice(&best);
        for t in 1..=SUBGRAD_STAGE_LEN {
            iterations += 1;
            problem.loss.subgradient_into(&x, &mut g);
            for &i in support.zero_indices() {
                g[i] = T::zero();
            }
            let gn = norm2(&g);
            if gn == T::zero() {
                break;
            }
            let step = c / T::of(t as f64).sqrt() / gn;
            for i in 0..n {
                x[i] -= step * g[i];
            }
            project_restricted(problem, support, &mut x);
            let v = problem.loss.value(&x);
            if v < best_val {
                best_val = v;
                best.copy_from_slice(&x);
            }
        }
        c /= T::of(2.0);
    }
    RestrictedSolution {
        x: best,
        value: best_val,
        precise: false,
        iterations,
    }
}

/// Builds the certificate for one declared zero set.
pub fn certify_support<T: Scalar, Lo: Loss<T>>(
    problem: &Problem<T, Lo>,
    support: &SupportSet,
) -> Result<SupportCertificate<T>> {
    let sol = solve_restricted(problem, support)?;
    let free = support.cardinality();
    let actual = SupportSet::of(&sol.x);
    let is_local = if actual == *support {
        true
    } else {
        // zero pattern grew; the point must also solve its own restricted problem
        let again = solve_restricted(problem, &actual)?;
        let tol = if sol.precise && again.precise {
            T::of(1e-8)
        } else {
            T::of(1e-6) * (T::one() + sol.value.abs())
        };
        (again.value - sol.value).abs() <= tol
    };
    Ok(SupportCertificate {
        support: support.clone(),
        penalized_value: sol.value + problem.lambda * T::of(free as f64),
        restricted_value: sol.value,
        restricted_minimizer: sol.x,
        is_local_min_of_f: is_local,
        precise: sol.precise,
    })
}

/// One certificate per zero set, in the order of the bit mask `0..2ⁿ`
/// (bit `i` set means coordinate `i` is forced to zero).
pub fn enumerate_local_minimizers<T: Scalar, Lo: Loss<T> + Sync>(
    problem: &Problem<T, Lo>,
) -> Result<Vec<SupportCertificate<T>>> {
    let n = problem.dim();
    guard(n)?;
    (0..1u64 << n)
        .into_par_iter()
        .map(|mask| certify_support(problem, &SupportSet::from_mask(n, mask)))
        .collect()
}

/// Central differences with `h = 1e−6·max(1, |x_i|)`.
pub fn finite_diff_gradient<T: Scalar>(f: impl Fn(&[T]) -> T, x: &[T]) -> Vec<T> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = T::of(1e-6) * T::one().max(x[i].abs());
            p[i] = x[i] + h;
            let up = f(&p);
            p[i] = x[i] - h;
            let down = f(&p);
            p[i] = x[i];
            (up - down) / (h + h)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxset::BoxSet;
    use crate::linalg::DenseMatrix;
    use crate::smoothing::LeastSquares;

    fn ls(
        a: DenseMatrix<f64>,
        b: Vec<f64>,
        lo: f64,
        hi: f64,
        lambda: f64,
    ) -> Problem<f64, LeastSquares<f64>> {
        let n = a.cols();
        Problem::new(
            LeastSquares::new(a, b).unwrap(),
            BoxSet::uniform(n, lo, hi).unwrap(),
            lambda,
        )
        .unwrap()
    }

    #[test]
    fn hand_solved_restricted_problem() {
        let p = ls(DenseMatrix::identity(2), vec![1.0, 2.0], 0.0, 5.0, 0.1);
        let sol = solve_restricted(&p, &SupportSet::from_zero_indices(2, [0])).unwrap();
        assert!(sol.precise);
        assert_eq!(sol.x[0], 0.0);
        assert!((sol.x[1] - 2.0).abs() < 1e-9);
        assert!((sol.value - 0.5).abs() < 1e-12);

        let all = solve_restricted(&p, &SupportSet::from_zero_indices(2, [0, 1])).unwrap();
        assert_eq!(all.x, vec![0.0, 0.0]);
        assert_eq!(all.value, p.loss.value(&[0.0, 0.0]));
    }

    #[test]
    fn one_dimensional_enumeration() {
        let p = ls(DenseMatrix::identity(1), vec![2.0], 0.0, 5.0, 10.0);
        let certs = enumerate_local_minimizers(&p).unwrap();
        assert_eq!(certs.len(), 2);
        // mask 0: nothing forced, x = 2, F = 0 + 10
        assert!((certs[0].restricted_minimizer[0] - 2.0).abs() < 1e-9);
        assert!(
            (certs[0].penalized_value - 10.0).abs() < 1e-9,
            "{:?}",
            certs[0]
        );
        // mask 1: x = 0, F = 2
        assert_eq!(certs[1].restricted_minimizer, vec![0.0]);
        assert_eq!(certs[1].penalized_value, 2.0);
        assert!(certs.iter().all(|c| c.is_local_min_of_f));
    }

    #[test]
    fn guard_rejects_large_dimension() {
        let p = ls(DenseMatrix::identity(13), vec![0.0; 13], -1.0, 1.0, 0.1);
        assert!(matches!(
            enumerate_local_minimizers(&p),
            Err(Error::DimensionTooLarge { dim: 13, .. })
        ));
    }

    #[test]
    fn finite_differences_on_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1] - x[1];
        let g = finite_diff_gradient(f, &[1.5, -2.0]);
        assert!((g[0] - (3.0 - 6.0)).abs() < 1e-9 * 3.0);
        assert!((g[1] - (4.5 - 1.0)).abs() < 1e-9 * 3.5);
    }
}
