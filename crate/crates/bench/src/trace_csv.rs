//! Per-iteration trace files.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a trace
//! read back is bit-identical to the one written.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use l0box_core::{IterationRecord, Regime};

use crate::BenchError;

pub const COLUMNS: [&str; 10] = [
    "k",
    "regime",
    "beta_k",
    "mu_k",
    "card",
    "f_exact",
    "f_smooth",
    "F",
    "energy",
    "step_norm",
];

pub fn write_trace<W: Write>(out: W, trace: &[IterationRecord<f64>]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in trace {
        w.write_record([
            r.k.to_string(),
            r.regime.as_str().to_string(),
            r.beta.to_string(),
            r.mu.map(|m| m.to_string()).unwrap_or_default(),
            r.card.to_string(),
            r.f_exact.to_string(),
            r.f_smooth.to_string(),
            r.big_f.to_string(),
            r.energy.to_string(),
            r.step_norm.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(path: &Path, trace: &[IterationRecord<f64>]) -> Result<(), BenchError> {
    write_trace(File::create(path)?, trace)
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    line: usize,
) -> Result<T, BenchError> {
    let raw = rec.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| BenchError::Trace(format!("line {line}: bad {} value '{raw}'", COLUMNS[i])))
}

/// Reads a trace written by [`write_trace`]. Gradient counts are not stored
/// and come back as zero.
pub fn read_trace<R: Read>(input: R) -> Result<Vec<IterationRecord<f64>>, BenchError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(BenchError::Trace(format!(
            "unexpected header '{}'",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let regime = rec
            .get(1)
            .and_then(Regime::parse)
            .ok_or_else(|| BenchError::Trace(format!("line {line}: bad regime")))?;
        let mu = match rec.get(3) {
            Some("") | None => None,
            Some(_) => Some(field(&rec, 3, line)?),
        };
        out.push(IterationRecord {
            k: field(&rec, 0, line)?,
            beta: field(&rec, 2, line)?,
            regime,
            mu,
            card: field(&rec, 4, line)?,
            f_exact: field(&rec, 5, line)?,
            f_smooth: field(&rec, 6, line)?,
            big_f: field(&rec, 7, line)?,
            energy: field(&rec, 8, line)?,
            step_norm: field(&rec, 9, line)?,
            grad_evals: 0,
        });
    }
    Ok(out)
}

pub fn read_trace_file(path: &Path) -> Result<Vec<IterationRecord<f64>>, BenchError> {
    read_trace(File::open(path)?)
}
