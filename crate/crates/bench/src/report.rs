//! Run artifacts: trace files, the JSON summary and markdown tables.

use std::fs;
use std::path::{Path, PathBuf};

use l0box_core::IterationRecord;
use serde::{Deserialize, Serialize};

use crate::experiment::{ExperimentReport, SolverRun};
use crate::generate::{ExperimentSpec, RNG_DERIVATION, RNG_NAME};
use crate::trace_csv::write_trace_file;
use crate::BenchError;

pub const SCHEMA_VERSION: u32 = 1;

const F_INF_NOTE: &str = "rate probes take F_inf as the last recorded F of the same run";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RngInfo {
    pub name: String,
    pub derivation: String,
}

impl Default for RngInfo {
    fn default() -> Self {
        Self {
            name: RNG_NAME.to_string(),
            derivation: RNG_DERIVATION.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub rng: RngInfo,
    pub spec: ExperimentSpec,
    pub seed_used: u64,
    pub x_star_card: usize,
    pub f_inf_note: String,
    pub runs: Vec<SolverRun>,
}

impl From<&ExperimentReport> for Summary {
    fn from(r: &ExperimentReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            rng: RngInfo::default(),
            spec: r.spec.clone(),
            seed_used: r.seed_used,
            x_star_card: r.x_star_card,
            f_inf_note: F_INF_NOTE.to_string(),
            runs: r.runs.clone(),
        }
    }
}

pub fn trace_path(dir: &Path, solver: &str) -> PathBuf {
    dir.join(format!("trace_{solver}.csv"))
}

/// Writes `trace_<solver>.csv` per run and `summary.json` into `dir`.
pub fn write_artifacts(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for run in &report.runs {
        let p = trace_path(dir, &run.solver);
        write_trace_file(&p, &run.trace)?;
        written.push(p);
    }
    let p = dir.join("summary.json");
    fs::write(
        &p,
        serde_json::to_string_pretty(&Summary::from(report))? + "\n",
    )?;
    written.push(p);
    Ok(written)
}

/// Keeps what an aborted solver produced before it stopped.
pub fn write_partial_trace(
    dir: &Path,
    solver: &str,
    trace: &[IterationRecord<f64>],
) -> Result<PathBuf, BenchError> {
    fs::create_dir_all(dir)?;
    let p = dir.join(format!("trace_{solver}.partial.csv"));
    write_trace_file(&p, trace)?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub epsilon: f64,
    pub solver: String,
    pub iterations: usize,
    pub seconds: f64,
}

impl TableCell {
    pub fn from_run(epsilon: f64, run: &SolverRun) -> Self {
        Self {
            epsilon,
            solver: run.solver.to_uppercase(),
            iterations: run.iterations,
            seconds: run.seconds,
        }
    }
}

fn eps_label(e: f64) -> String {
    let exp = e.log10().round();
    if (10f64.powf(exp) - e).abs() <= 1e-12 * e {
        format!("1e{}", exp as i32)
    } else {
        format!("{e}")
    }
}

/// Table with one column per (ε, solver) pair and rows for wall time and
/// iterations. The smaller iteration count in each ε group is bolded.
pub fn markdown_table(cells: &[TableCell]) -> String {
    let mut eps: Vec<f64> = Vec::new();
    let mut solvers: Vec<String> = Vec::new();
    for c in cells {
        if !eps.contains(&c.epsilon) {
            eps.push(c.epsilon);
        }
        if !solvers.contains(&c.solver) {
            solvers.push(c.solver.clone());
        }
    }
    let find = |e: f64, s: &str| cells.iter().find(|c| c.epsilon == e && c.solver == s);
    let mut head = vec!["ε".to_string()];
    let mut algo = vec!["Algorithm".to_string()];
    let mut time = vec!["Time".to_string()];
    let mut iters = vec!["Iterations".to_string()];
    for &e in &eps {
        let best = solvers
            .iter()
            .filter_map(|s| find(e, s))
            .map(|c| c.iterations)
            .min();
        let unique_best = solvers
            .iter()
            .filter_map(|s| find(e, s))
            .filter(|c| Some(c.iterations) == best)
            .count()
            == 1;
        for s in &solvers {
            head.push(eps_label(e));
            algo.push(s.clone());
            match find(e, s) {
                Some(c) => {
                    time.push(format!("{:.3}", c.seconds));
                    if unique_best && Some(c.iterations) == best {
                        iters.push(format!("**{}**", c.iterations));
                    } else {
                        iters.push(c.iterations.to_string());
                    }
                }
                None => {
                    time.push("-".into());
                    iters.push("-".into());
                }
            }
        }
    }
    let row = |v: &[String]| format!("| {} |\n", v.join(" | "));
    let mut out = row(&head);
    out += &row(&vec!["---".to_string(); head.len()]);
    out += &row(&algo);
    out += &row(&time);
    out += &row(&iters);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(e: f64, s: &str, it: usize) -> TableCell {
        TableCell {
            epsilon: e,
            solver: s.into(),
            iterations: it,
            seconds: it as f64 / 1000.0,
        }
    }

    #[test]
    fn table_shape() {
        let t = markdown_table(&[
            cell(1e-2, "SFIHT", 217),
            cell(1e-2, "SIHT", 4150),
            cell(1e-4, "SFIHT", 11155),
            cell(1e-4, "SIHT", 11155),
        ]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "| ε | 1e-2 | 1e-2 | 1e-4 | 1e-4 |");
        assert_eq!(lines[2], "| Algorithm | SFIHT | SIHT | SFIHT | SIHT |");
        assert_eq!(lines[3], "| Time | 0.217 | 4.150 | 11.155 | 11.155 |");
        assert_eq!(lines[4], "| Iterations | **217** | 4150 | 11155 | 11155 |");
    }

    #[test]
    fn eps_labels() {
        assert_eq!(eps_label(1e-3), "1e-3");
        assert_eq!(eps_label(2.5e-3), "0.0025");
    }
}
