use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use l0box_bench::config::RunOptions;
use l0box_bench::experiment::build_problem;
use l0box_bench::report::{write_partial_trace, TableCell};
use l0box_bench::{
    audit_trace, generate_instance, markdown_table, read_trace_file, run_on_instance,
    write_artifacts, BenchError, ExampleId, ExperimentSpec, SolverSettings,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "l0box",
    version,
    about = "Iterative hard thresholding for box-constrained l0 problems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance, run the solver and its baseline, write artifacts.
    Run {
        #[command(flatten)]
        opts: RunOptions,
        /// TOML file with the same keys as the flags.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Enumerate every zero pattern of a small instance and print certificates.
    Oracle {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value = "43")]
        example: String,
    },
    /// Check a trace CSV; exits nonzero if anything is wrong.
    Audit { trace: PathBuf },
    /// Markdown table of iterations and time over several tolerances.
    Table {
        #[command(flatten)]
        opts: RunOptions,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated stopping tolerances.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3, 1e-4])]
        epsilons: Vec<f64>,
    },
}

fn merged(opts: RunOptions, config: Option<PathBuf>) -> Result<RunOptions, BenchError> {
    Ok(match config {
        Some(p) => opts.over(RunOptions::from_file(&p)?),
        None => opts,
    })
}

fn run(opts: RunOptions, config: Option<PathBuf>) -> Result<(), BenchError> {
    let opts = merged(opts, config)?;
    let spec = opts.to_spec()?;
    let out = opts
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("out/ex{}_seed{}", spec.example, spec.seed)));
    let inst = generate_instance(&spec)?;
    let report = match run_on_instance(&spec, &inst) {
        Ok(r) => r,
        Err(BenchError::Aborted {
            solver,
            iteration,
            reason,
            partial_trace,
        }) => {
            let p = write_partial_trace(&out, &solver, &partial_trace)?;
            eprintln!("partial trace kept at {}", p.display());
            return Err(BenchError::Aborted {
                solver,
                iteration,
                reason,
                partial_trace,
            });
        }
        Err(e) => return Err(e),
    };
    write_artifacts(&report, &out)?;
    for r in &report.runs {
        println!(
            "{:6} {:?} k={} card={} F={:.6e} support_changes={} max_beta={:.4} time={:.3}s",
            r.solver,
            r.status,
            r.iterations,
            r.final_card,
            r.final_big_f,
            r.support_changes,
            r.max_beta,
            r.seconds
        );
    }
    println!("artifacts in {}", out.display());
    Ok(())
}

#[derive(Serialize)]
struct OracleOutput {
    example: ExampleId,
    dim: usize,
    seed: u64,
    lambda: f64,
    best: l0box_core::oracle::SupportCertificate<f64>,
    certificates: Vec<l0box_core::oracle::SupportCertificate<f64>>,
}

fn oracle(dim: usize, seed: u64, lambda: Option<f64>, example: &str) -> Result<(), BenchError> {
    let example: ExampleId = example.parse()?;
    if dim == 0 || dim > l0box_core::oracle::MAX_ORACLE_DIM {
        return Err(BenchError::Spec(format!(
            "--dim must be in 1..={}",
            l0box_core::oracle::MAX_ORACLE_DIM
        )));
    }
    let mut spec = ExperimentSpec::tiny(example, dim, seed);
    if let Some(l) = lambda {
        spec.lambda = l;
    }
    spec.validate()?;
    let inst = generate_instance(&spec)?;
    let problem = build_problem(example, inst.a, inst.b, inst.bounds, spec.lambda)?;
    let certificates = problem.enumerate_certificates()?;
    let best = certificates
        .iter()
        .filter(|c| c.is_local_min_of_f)
        .min_by(|a, b| a.penalized_value.total_cmp(&b.penalized_value))
        .cloned()
        .ok_or_else(|| BenchError::Solver("no certificate".into()))?;
    let out = OracleOutput {
        example,
        dim,
        seed,
        lambda: spec.lambda,
        best,
        certificates,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn audit(path: PathBuf) -> Result<bool, BenchError> {
    let trace = read_trace_file(&path)?;
    let report = audit_trace(&trace);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.is_clean())
}

fn table(opts: RunOptions, config: Option<PathBuf>, epsilons: Vec<f64>) -> Result<(), BenchError> {
    let opts = merged(opts, config)?;
    let base = opts.to_spec()?;
    let inst = generate_instance(&base)?;
    let mut cells = Vec::new();
    for &eps in &epsilons {
        let mut spec = base.clone();
        spec.baseline = true;
        match &mut spec.solver {
            SolverSettings::Smoothed(c) => c.epsilon = eps,
            SolverSettings::Smooth(c) => c.epsilon = eps,
        }
        let report = run_on_instance(&spec, &inst)?;
        cells.extend(report.runs.iter().map(|r| TableCell::from_run(eps, r)));
    }
    print!("{}", markdown_table(&cells));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run { opts, config } => run(opts, config).map(|_| true),
        Cmd::Oracle {
            dim,
            seed,
            lambda,
            example,
        } => oracle(dim, seed, lambda, &example).map(|_| true),
        Cmd::Audit { trace } => audit(trace),
        Cmd::Table {
            opts,
            config,
            epsilons,
        } => table(opts, config, epsilons).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
