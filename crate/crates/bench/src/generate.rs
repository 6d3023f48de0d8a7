//! Seeded synthetic instances for the three benchmark families.

use std::fmt;
use std::str::FromStr;

use l0box_core::{BoxSet, DenseMatrix, FihtConfig, SfihtConfig};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Generator name written into every summary.
pub const RNG_NAME: &str = "rand_chacha::ChaCha8Rng 0.9 (seed_from_u64)";
/// How normal and uniform draws are derived from the generator.
pub const RNG_DERIVATION: &str = "normals: rand_distr 0.5 StandardNormal (ziggurat); uniforms: rand 0.9 random_range; permutations: Fisher-Yates shuffle";
/// Give up after this many seed bumps for a rank-deficient draw.
const MAX_SEED_BUMPS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    /// ℓ1 regression, `m < n`, box `[−1, 1]`.
    LinReg41,
    /// Censored ℓ1 regression, `m > n`, box `[0, 1]`.
    Censored42,
    /// Least squares, `m < n`, box `[0, 5]`.
    LeastSq43,
}

impl ExampleId {
    pub const ALL: [ExampleId; 3] = [
        ExampleId::LinReg41,
        ExampleId::Censored42,
        ExampleId::LeastSq43,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ExampleId::LinReg41 => "41",
            ExampleId::Censored42 => "42",
            ExampleId::LeastSq43 => "43",
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        match self {
            ExampleId::LinReg41 => (-1.0, 1.0),
            ExampleId::Censored42 => (0.0, 1.0),
            ExampleId::LeastSq43 => (0.0, 5.0),
        }
    }

    pub fn default_noise(self) -> f64 {
        match self {
            ExampleId::LinReg41 => 0.005,
            _ => 0.01,
        }
    }

    /// Desk-scale `(m, n, s)`.
    pub fn desk_size(self) -> (usize, usize, usize) {
        match self {
            ExampleId::LinReg41 => (60, 200, 80),
            ExampleId::Censored42 => (200, 40, 12),
            ExampleId::LeastSq43 => (100, 300, 60),
        }
    }

    pub fn full_size(self) -> (usize, usize, usize) {
        match self {
            ExampleId::LinReg41 => (300, 1000, 400),
            ExampleId::Censored42 => (1000, 200, 60),
            ExampleId::LeastSq43 => (500, 5000, 1000),
        }
    }

    /// Penalty giving supports that are neither empty nor full at desk scale.
    pub fn default_lambda(self) -> f64 {
        match self {
            ExampleId::LinReg41 => 0.0125,
            ExampleId::Censored42 => 0.006,
            ExampleId::LeastSq43 => 0.005,
        }
    }

    pub fn is_smoothed(self) -> bool {
        !matches!(self, ExampleId::LeastSq43)
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ExampleId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "41" | "4.1" | "lin_reg41" => Ok(ExampleId::LinReg41),
            "42" | "4.2" | "censored42" => Ok(ExampleId::Censored42),
            "43" | "4.3" | "least_sq43" => Ok(ExampleId::LeastSq43),
            _ => Err(BenchError::Spec(format!(
                "unknown example '{s}' (expected 41, 42 or 43)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverSettings {
    Smoothed(SfihtConfig<f64>),
    Smooth(FihtConfig<f64>),
}

impl SolverSettings {
    pub fn name(&self) -> &'static str {
        match self {
            SolverSettings::Smoothed(c)
                if c.beta_strategy == l0box_core::BetaStrategy::NoExtrapolation =>
            {
                "siht"
            }
            SolverSettings::Smoothed(_) => "sfiht",
            SolverSettings::Smooth(c) if !c.extrapolate => "iht",
            SolverSettings::Smooth(_) => "fiht",
        }
    }

    /// The matching zero-extrapolation baseline.
    pub fn baseline(&self) -> Self {
        match self {
            SolverSettings::Smoothed(c) => {
                SolverSettings::Smoothed(c.clone().without_extrapolation())
            }
            SolverSettings::Smooth(c) => SolverSettings::Smooth(c.clone().without_extrapolation()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub example: ExampleId,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub noise_scale: f64,
    pub seed: u64,
    pub lambda: f64,
    pub solver: SolverSettings,
    /// Also run the zero-extrapolation baseline on the same data.
    pub baseline: bool,
}

impl ExperimentSpec {
    pub fn desk(example: ExampleId, seed: u64) -> Self {
        let (m, n, s) = example.desk_size();
        Self::sized(example, m, n, s, seed)
    }

    pub fn full_scale(example: ExampleId, seed: u64) -> Self {
        let (m, n, s) = example.full_size();
        Self::sized(example, m, n, s, seed)
    }

    pub fn sized(example: ExampleId, m: usize, n: usize, s: usize, seed: u64) -> Self {
        let solver = match example {
            ExampleId::LinReg41 => {
                SolverSettings::Smoothed(SfihtConfig::linear_regression_preset())
            }
            ExampleId::Censored42 => SolverSettings::Smoothed(SfihtConfig {
                x0: Some(vec![0.1; n]),
                ..SfihtConfig::censored_preset()
            }),
            ExampleId::LeastSq43 => SolverSettings::Smooth(FihtConfig::least_squares_preset()),
        };
        Self {
            example,
            m,
            n,
            s,
            noise_scale: example.default_noise(),
            seed,
            lambda: example.default_lambda(),
            solver,
            baseline: true,
        }
    }

    /// A small instance with `n = dim` for the enumeration oracle.
    pub fn tiny(example: ExampleId, dim: usize, seed: u64) -> Self {
        let m = match example {
            ExampleId::Censored42 => 4 * dim,
            _ => (dim / 2).max(1),
        };
        Self::sized(example, m, dim, dim.div_ceil(2), seed)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::Spec(msg));
        if self.m == 0 || self.n == 0 {
            return bad("m and n must be positive".into());
        }
        if self.s > self.n {
            return bad(format!("s = {} exceeds n = {}", self.s, self.n));
        }
        match self.example {
            ExampleId::LinReg41 | ExampleId::LeastSq43 if self.m >= self.n => {
                return bad(format!("example {} needs m < n", self.example))
            }
            ExampleId::Censored42 if self.m <= self.n => {
                return bad("example 42 needs m > n".into())
            }
            _ => {}
        }
        if self.example.is_smoothed() != matches!(self.solver, SolverSettings::Smoothed(_)) {
            return bad(format!(
                "solver {} does not fit example {}",
                self.solver.name(),
                self.example
            ));
        }
        if !(self.noise_scale >= 0.0) || !(self.lambda >= 0.0) {
            return bad("noise_scale and lambda must be nonnegative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedInstance {
    pub a: DenseMatrix<f64>,
    pub b: Vec<f64>,
    pub x_star: Vec<f64>,
    pub bounds: BoxSet<f64>,
    /// Seed that produced the data (differs from the requested one after a bump).
    pub seed_used: u64,
    pub seed_bumps: u64,
}

fn normals(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.sample(StandardNormal)).collect()
}

/// Orthonormalizes the rows of an `m × n` row-major matrix through a QR
/// factorization of its transpose; `None` when the draw is rank deficient.
fn orthonormal_rows(m: usize, n: usize, g: &[f64]) -> Option<DenseMatrix<f64>> {
    let gt = DMatrix::from_fn(n, m, |i, j| g[j * n + i]);
    let qr = gt.qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..m).map(|i| r[(i, i)].abs()).collect();
    let largest = diag.iter().copied().fold(0.0, f64::max);
    if !(largest > 0.0) || diag.iter().any(|&d| d <= 1e-10 * largest) {
        return None;
    }
    let q = qr.q();
    Some(DenseMatrix::from_fn(m, n, |i, j| q[(j, i)]))
}

fn draw(spec: &ExperimentSpec, seed: u64) -> Option<GeneratedInstance> {
    let (m, n, s) = (spec.m, spec.n, spec.s);
    let (lo, hi) = spec.example.bounds();
    let bounds = BoxSet::uniform(n, lo, hi).expect("valid preset box");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();

    let (a, x_star, b) = match spec.example {
        ExampleId::LinReg41 | ExampleId::LeastSq43 => {
            perm.shuffle(&mut rng);
            let xbar = normals(&mut rng, s);
            let mut x_star = vec![0.0; n];
            for (i, v) in perm[..s].iter().zip(xbar) {
                x_star[*i] = v.clamp(lo, hi);
            }
            let a = orthonormal_rows(m, n, &normals(&mut rng, m * n))?;
            let noise = normals(&mut rng, m);
            let b: Vec<f64> = a
                .mul_vec(&x_star)
                .into_iter()
                .zip(noise)
                .map(|(ax, e)| ax + spec.noise_scale * e)
                .collect();
            (a, x_star, b)
        }
        ExampleId::Censored42 => {
            let a = DenseMatrix::new(m, n, normals(&mut rng, m * n)).expect("sized buffer");
            perm.shuffle(&mut rng);
            let mut x_star = vec![0.0; n];
            for &i in &perm[..s] {
                x_star[i] = rng.random_range(0.1..1.0);
            }
            let noise = normals(&mut rng, m);
            let b: Vec<f64> = a
                .mul_vec(&x_star)
                .into_iter()
                .zip(noise)
                .map(|(ax, e)| (ax + spec.noise_scale * e).max(0.0))
                .collect();
            (a, x_star, b)
        }
    };
    Some(GeneratedInstance {
        a,
        b,
        x_star,
        bounds,
        seed_used: seed,
        seed_bumps: seed.wrapping_sub(spec.seed),
    })
}

/// Deterministic in `spec.seed`. A rank-deficient draw is retried with the
/// next seed and the bump is recorded in the instance.
pub fn generate_instance(spec: &ExperimentSpec) -> Result<GeneratedInstance, BenchError> {
    spec.validate()?;
    (0..MAX_SEED_BUMPS)
        .find_map(|bump| draw(spec, spec.seed.wrapping_add(bump)))
        .ok_or_else(|| BenchError::Spec("could not draw a full-rank matrix".into()))
}
