//! Runs a solver (and optionally its baseline) on one generated instance.

use std::time::Instant;

use l0box_core::diagnostics::Violation;
use l0box_core::oracle::{certify_support, enumerate_local_minimizers, SupportCertificate};
use l0box_core::SupportSet;
use l0box_core::{
    fiht_solve, sfiht_solve, BoxSet, CensoredRegression, DenseMatrix, IterationRecord,
    L1Regression, LeastSquares, Problem, SolveError, SolveResult, SolveStatus,
};
use serde::{Deserialize, Serialize};

use crate::generate::{
    generate_instance, ExampleId, ExperimentSpec, GeneratedInstance, SolverSettings,
};
use crate::rate::{rate_probe, RateMode, RateReport};
use crate::BenchError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverRun {
    pub solver: String,
    pub iterations: usize,
    pub status: SolveStatus,
    pub final_card: usize,
    pub final_f: f64,
    pub final_big_f: f64,
    pub support_changes: usize,
    pub last_support_change: Option<usize>,
    pub max_beta: f64,
    /// Solver wall time, data generation excluded.
    pub seconds: f64,
    pub violations: Vec<Violation>,
    pub rate: Option<RateReport>,
    #[serde(skip)]
    pub x_final: Vec<f64>,
    #[serde(skip)]
    pub trace: Vec<IterationRecord<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub seed_used: u64,
    pub x_star_card: usize,
    pub runs: Vec<SolverRun>,
}

/// The loss of the example family applied to the generated data.
pub enum BuiltProblem {
    LinReg(Problem<f64, L1Regression<f64>>),
    Censored(Problem<f64, CensoredRegression<f64>>),
    LeastSq(Problem<f64, LeastSquares<f64>>),
}

pub fn build_problem(
    example: ExampleId,
    a: DenseMatrix<f64>,
    b: Vec<f64>,
    bounds: BoxSet<f64>,
    lambda: f64,
) -> Result<BuiltProblem, BenchError> {
    Ok(match example {
        ExampleId::LinReg41 => {
            BuiltProblem::LinReg(Problem::new(L1Regression::new(a, b)?, bounds, lambda)?)
        }
        ExampleId::Censored42 => BuiltProblem::Censored(Problem::new(
            CensoredRegression::new(a, b)?,
            bounds,
            lambda,
        )?),
        ExampleId::LeastSq43 => {
            BuiltProblem::LeastSq(Problem::new(LeastSquares::new(a, b)?, bounds, lambda)?)
        }
    })
}

impl BuiltProblem {
    /// Certificates for every zero pattern, in bit-mask order.
    pub fn enumerate_certificates(&self) -> Result<Vec<SupportCertificate<f64>>, BenchError> {
        Ok(match self {
            BuiltProblem::LinReg(p) => enumerate_local_minimizers(p)?,
            BuiltProblem::Censored(p) => enumerate_local_minimizers(p)?,
            BuiltProblem::LeastSq(p) => enumerate_local_minimizers(p)?,
        })
    }

    /// Certificate for the zero pattern of `x`.
    pub fn certify_point(&self, x: &[f64]) -> Result<SupportCertificate<f64>, BenchError> {
        let sup = SupportSet::of(x);
        Ok(match self {
            BuiltProblem::LinReg(p) => certify_support(p, &sup)?,
            BuiltProblem::Censored(p) => certify_support(p, &sup)?,
            BuiltProblem::LeastSq(p) => certify_support(p, &sup)?,
        })
    }

    pub fn penalized_value(&self, x: &[f64]) -> Result<f64, BenchError> {
        Ok(match self {
            BuiltProblem::LinReg(p) => p.objective(x).big_f,
            BuiltProblem::Censored(p) => p.objective(x).big_f,
            BuiltProblem::LeastSq(p) => p.objective(x).big_f,
        })
    }
}

fn unwrap_solve(
    r: Result<SolveResult<f64>, SolveError<f64>>,
    name: &str,
) -> Result<SolveResult<f64>, BenchError> {
    r.map_err(|e| match e {
        SolveError::Invalid(err) => BenchError::Core(err),
        SolveError::Aborted {
            iteration,
            reason,
            trace,
        } => BenchError::Aborted {
            solver: name.to_string(),
            iteration,
            reason,
            partial_trace: trace,
        },
    })
}

/// Runs one solver configuration on a built problem.
pub fn solve(
    problem: &BuiltProblem,
    settings: &SolverSettings,
) -> Result<SolveResult<f64>, BenchError> {
    match (problem, settings) {
        (BuiltProblem::LinReg(p), SolverSettings::Smoothed(c)) => {
            unwrap_solve(sfiht_solve(p, c), settings.name())
        }
        (BuiltProblem::Censored(p), SolverSettings::Smoothed(c)) => {
            unwrap_solve(sfiht_solve(p, c), settings.name())
        }
        (BuiltProblem::LeastSq(p), SolverSettings::Smooth(c)) => {
            unwrap_solve(fiht_solve(p, c), settings.name())
        }
        _ => Err(BenchError::Spec(format!(
            "solver {} does not fit the loss",
            settings.name()
        ))),
    }
}

fn timed_run(
    problem: &BuiltProblem,
    settings: &SolverSettings,
    sigma: Option<f64>,
) -> Result<SolverRun, BenchError> {
    let start = Instant::now();
    let res = solve(problem, settings)?;
    let seconds = start.elapsed().as_secs_f64();
    let mode = match sigma {
        Some(s) => RateMode::Smoothed { sigma: s },
        None => RateMode::Smooth,
    };
    Ok(SolverRun {
        solver: settings.name().to_string(),
        iterations: res.iterations,
        status: res.status,
        final_card: res.final_objective.card,
        final_f: res.final_objective.f_value,
        final_big_f: res.final_objective.big_f,
        support_changes: res.support_change_count,
        last_support_change: res.last_support_change,
        max_beta: res.max_beta(),
        seconds,
        violations: res.violations.clone(),
        rate: rate_probe(&res.trace, mode).ok(),
        x_final: res.x_final,
        trace: res.trace,
    })
}

/// Runs the configured solver and, if requested, its baseline on the same
/// instance. Timing covers the solver calls only.
pub fn run_on_instance(
    spec: &ExperimentSpec,
    inst: &GeneratedInstance,
) -> Result<ExperimentReport, BenchError> {
    let problem = build_problem(
        spec.example,
        inst.a.clone(),
        inst.b.clone(),
        inst.bounds.clone(),
        spec.lambda,
    )?;
    let sigma = match &spec.solver {
        SolverSettings::Smoothed(c) => Some(c.sigma),
        SolverSettings::Smooth(_) => None,
    };
    let mut runs = vec![timed_run(&problem, &spec.solver, sigma)?];
    if spec.baseline {
        let base = spec.solver.baseline();
        if base != spec.solver {
            runs.push(timed_run(&problem, &base, sigma)?);
        }
    }
    Ok(ExperimentReport {
        spec: spec.clone(),
        seed_used: inst.seed_used,
        x_star_card: l0box_core::l0_norm(&inst.x_star),
        runs,
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, BenchError> {
    let inst = generate_instance(spec)?;
    run_on_instance(spec, &inst)
}
