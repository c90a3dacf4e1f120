//! Order-of-convergence estimation from solve histories.
//!
//! The computational order is read off successive step norms d_k: each
//! consecutive triple (d_{k-1}, d_k, d_{k+1}) of strictly positive,
//! non-stalling norms yields p_k = ln(d_{k+1}/d_k) / ln(d_k/d_{k-1}), and
//! the reported order is the maximum surviving p_k. Degenerate triples
//! (a zero norm, a repeated norm, a non-positive or non-finite quotient)
//! are skipped rather than allowed to poison the maximum.

use thiserror::Error;

use crate::linalg::{NormKind, Vector};
use crate::solver::SolveTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CocError {
    #[error("need at least three usable consecutive step norms")]
    InsufficientData,
}

/// Surviving order estimates, keyed by the middle iteration index of the
/// triple each was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct CocEstimate {
    pub per_k: Vec<(usize, f64)>,
    pub p_max: f64,
    pub valid_count: usize,
}

impl CocEstimate {
    /// The estimates alone, in iteration order.
    pub fn values(&self) -> Vec<f64> {
        self.per_k.iter().map(|&(_, p)| p).collect()
    }
}

/// Order estimates from a bare step-norm sequence; `ds[0]` is taken to be
/// the first step norm d_1.
pub fn coc_from_step_norms(ds: &[f64]) -> Result<CocEstimate, CocError> {
    if ds.len() < 3 {
        return Err(CocError::InsufficientData);
    }
    let mut per_k = Vec::new();
    for (i, w) in ds.windows(3).enumerate() {
        let (d0, d1, d2) = (w[0], w[1], w[2]);
        if d0 <= 0.0 || d1 <= 0.0 || d2 <= 0.0 {
            continue;
        }
        let den = (d1 / d0).ln();
        if den == 0.0 {
            continue;
        }
        let p = (d2 / d1).ln() / den;
        if !p.is_finite() || p <= 0.0 {
            continue;
        }
        per_k.push((i + 2, p));
    }
    if per_k.is_empty() {
        return Err(CocError::InsufficientData);
    }
    let p_max = per_k
        .iter()
        .map(|&(_, p)| p)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CocEstimate {
        valid_count: per_k.len(),
        per_k,
        p_max,
    })
}

/// Order estimate for a finished solve. Needs at least four records
/// (three step norms).
pub fn coc_estimate(trace: &SolveTrace) -> Result<CocEstimate, CocError> {
    if trace.records.len() < 4 {
        return Err(CocError::InsufficientData);
    }
    coc_from_step_norms(&trace.step_norms())
}

/// ||x(k) - alpha|| for every record of the trace, in the given norm.
pub fn error_norms(trace: &SolveTrace, alpha: &Vector, kind: NormKind) -> Vec<f64> {
    trace
        .records
        .iter()
        .map(|r| r.x.sub(alpha).norm(kind))
        .collect()
}
