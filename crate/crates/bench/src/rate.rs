//! Empirical convergence-rate probes on objective traces.
//!
//! `F_∞` is approximated by the last traced objective value, which is
//! reasonable once the support has settled.

use l0box_core::IterationRecord;
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Traces shorter than this are rejected.
pub const MIN_TRACE_LEN: usize = 200;
/// Required decay, as a multiple of σ, for the smoothed-solver slope.
pub const SLOPE_FACTOR: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RateMode {
    /// Log-log slope of the gap over the trailing half, expected `≤ −0.8σ`.
    Smoothed { sigma: f64 },
    /// `max k²·gap` over the 4th quarter divided by the same over the 3rd.
    Smooth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub mode: RateMode,
    pub f_inf: f64,
    pub points: usize,
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
    pub quarter_ratio: Option<f64>,
    /// The gap vanished before enough points were available.
    pub beyond_measurement: bool,
    pub pass: bool,
}

/// Probes a solver trace with `F_∞` taken from its last record.
pub fn rate_probe(
    trace: &[IterationRecord<f64>],
    mode: RateMode,
) -> Result<RateReport, BenchError> {
    if trace.len() < MIN_TRACE_LEN {
        return Err(BenchError::Trace(format!(
            "rate probe needs at least {MIN_TRACE_LEN} records, got {}",
            trace.len()
        )));
    }
    let ks: Vec<f64> = trace.iter().map(|r| r.k as f64).collect();
    let fs: Vec<f64> = trace.iter().map(|r| r.big_f).collect();
    let f_inf = *fs.last().expect("nonempty trace");
    Ok(rate_probe_series(&ks, &fs, f_inf, mode))
}

/// Same probe on raw `(k, F_k)` series with an explicit limit.
pub fn rate_probe_series(ks: &[f64], fs: &[f64], f_inf: f64, mode: RateMode) -> RateReport {
    let floor = f64::EPSILON * f_inf.abs().max(1.0);
    let gaps: Vec<f64> = fs.iter().map(|f| (f - f_inf).max(0.0)).collect();
    let mut report = RateReport {
        mode,
        f_inf,
        points: ks.len(),
        slope: None,
        slope_stderr: None,
        quarter_ratio: None,
        beyond_measurement: false,
        pass: false,
    };
    match mode {
        RateMode::Smoothed { sigma } => {
            let start = ks.len() / 2;
            if gaps[start..].iter().all(|&g| g <= floor) {
                report.beyond_measurement = true;
                report.pass = true;
                return report;
            }
            let xs: Vec<f64> = ks[start..].iter().map(|k| k.ln()).collect();
            let ys: Vec<f64> = gaps[start..].iter().map(|g| (g + floor).ln()).collect();
            if let Some((slope, se)) = least_squares_slope(&xs, &ys) {
                report.slope = Some(slope);
                report.slope_stderr = Some(se);
                report.pass = slope <= -SLOPE_FACTOR * sigma;
            }
        }
        RateMode::Smooth => {
            let q = ks.len() / 4;
            let weighted = |range: std::ops::Range<usize>| {
                range.map(|i| ks[i] * ks[i] * gaps[i]).fold(0.0, f64::max)
            };
            let q3 = weighted(2 * q..3 * q);
            let q4 = weighted(3 * q..ks.len());
            if q3 <= floor {
                report.beyond_measurement = true;
                report.pass = true;
                return report;
            }
            let ratio = q4 / q3;
            report.quarter_ratio = Some(ratio);
            report.pass = ratio < 1.0;
        }
    }
    report
}

/// Ordinary least-squares slope and its standard error.
fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - icpt - slope * x).powi(2))
        .sum();
    Some((slope, (ssr / (nf - 2.0) / sxx).sqrt()))
}
