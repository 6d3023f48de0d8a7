//! Invariant checks that only need a trace file.

use l0box_core::diagnostics::ENERGY_SLACK;
use l0box_core::IterationRecord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIssue {
    pub k: usize,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceAudit {
    pub records: usize,
    pub support_changes: usize,
    pub issues: Vec<TraceIssue>,
}

impl TraceAudit {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks record numbering, the energy and smoothing-parameter sequences,
/// and the range of the extrapolation coefficients.
pub fn audit_trace(trace: &[IterationRecord<f64>]) -> TraceAudit {
    let mut issues = Vec::new();
    let mut push = |k: usize, kind: &str, detail: String| {
        issues.push(TraceIssue {
            k,
            kind: kind.to_string(),
            detail,
        })
    };
    for r in trace {
        if !(0.0..1.0).contains(&r.beta) {
            push(r.k, "beta_range", format!("beta = {}", r.beta));
        }
        let finite = [r.f_exact, r.f_smooth, r.big_f, r.energy, r.step_norm]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            push(r.k, "non_finite", "non-finite value in record".into());
        }
    }
    let mut changes = 0;
    for w in trace.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.k != a.k + 1 {
            push(b.k, "numbering", format!("k = {} follows {}", b.k, a.k));
        }
        if b.energy - a.energy > ENERGY_SLACK * (1.0 + b.energy.abs()) {
            push(
                b.k,
                "energy_increase",
                format!("{} -> {}", a.energy, b.energy),
            );
        }
        match (a.mu, b.mu) {
            (Some(x), Some(y)) if !(y <= x) => push(b.k, "mu_increase", format!("{x} -> {y}")),
            (Some(_), None) | (None, Some(_)) => push(
                b.k,
                "mu_missing",
                "mixed smoothed and smooth records".into(),
            ),
            _ => {}
        }
        if a.card != b.card {
            changes += 1;
        }
    }
    TraceAudit {
        records: trace.len(),
        support_changes: changes,
        issues,
    }
}
