#![allow(dead_code)]

use l0box_core::{BoxSet, DenseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(m, n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn uniform_in(rng: &mut ChaCha8Rng, bounds: &BoxSet<f64>) -> Vec<f64> {
    bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(&l, &u)| rng.random_range(l.max(-3.0)..=u.min(3.0)))
        .collect()
}

/// Sparse planted signal `x` and `b = A x + noise`.
pub fn planted(
    rng: &mut ChaCha8Rng,
    a: &DenseMatrix<f64>,
    s: usize,
    lo: f64,
    hi: f64,
    noise: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = a.cols();
    let mut x = vec![0.0; n];
    for i in 0..s.min(n) {
        x[(i * 7) % n] = rng.random_range(lo..hi);
    }
    let mut b = a.mul_vec(&x);
    for v in &mut b {
        *v += noise * rng.sample::<f64, _>(StandardNormal);
    }
    (x, b)
}

pub fn rel_err(fd: f64, g: f64) -> f64 {
    if g.abs() >= 1e-3 {
        (fd - g).abs() / g.abs()
    } else {
        (fd - g).abs()
    }
}
