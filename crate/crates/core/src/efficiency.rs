//! The computational-cost calculus for the three multipoint methods.
//!
//! Per iteration, a method that evaluates F twice costs 2n scalar-function
//! evaluations (weight mu0 each), two Jacobians cost 2n^2 derivative-entry
//! evaluations (weight mu1 each), and the linear algebra contributes a
//! polynomial count of products plus l-weighted quotients. The efficiency
//! index E = p^(1/C) then ranks order against cost, and the closed-form
//! boundaries g and f locate where one method overtakes another.
//!
//! These are the published closed forms, evaluated verbatim; the
//! instrumented counters of the linear algebra layer are reported
//! separately and deviate from them by a fixed per-n polynomial (see the
//! operation-count tests).

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::solver::MethodId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EffError {
    #[error("no cost formula for method {0}")]
    UnsupportedMethod(MethodId),
}

/// Cost-model parameters: system size n, evaluation-to-product weights
/// mu0 (scalar function entries) and mu1 (Jacobian entries), and the
/// quotient-to-product weight l.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub n: usize,
    pub mu0: f64,
    pub mu1: f64,
    pub l: f64,
}

impl CostModel {
    pub fn new(n: usize, mu0: f64, mu1: f64, l: f64) -> Self {
        assert!(n >= 2, "cost model needs n >= 2");
        assert!(
            mu0 > 0.0 && mu1 > 0.0,
            "evaluation weights must be positive"
        );
        assert!(l >= 1.0, "quotient weight must be at least 1");
        CostModel { n, mu0, mu1, l }
    }
}

/// Per-iteration cost of one full step of `m` under the model.
pub fn cost(m: MethodId, cm: &CostModel) -> Result<f64, EffError> {
    let n = cm.n as f64;
    let evals = 2.0 * n * cm.mu0 + 2.0 * n * n * cm.mu1;
    match m {
        MethodId::Pg6 => {
            Ok(evals + (n / 2.0) * (2.0 * n * n + 15.0 * n - 3.0 + 3.0 * cm.l * (n + 1.0)))
        }
        MethodId::Cordero5 => {
            Ok(evals + (n / 2.0) * (2.0 * n * n + 9.0 * n - 3.0 + 3.0 * cm.l * (n + 1.0)))
        }
        MethodId::Cordero6 => {
            Ok(evals + (n / 3.0) * (2.0 * n * n + 18.0 * n + 4.0 + 3.0 * cm.l * (n + 1.0)))
        }
        MethodId::Newton => Err(EffError::UnsupportedMethod(m)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub method: MethodId,
    pub order_p: f64,
    pub cost_c: f64,
    pub index_e: f64,
}

/// Efficiency index E = p^(1/C) of `m` under the model.
pub fn index(m: MethodId, cm: &CostModel) -> Result<EfficiencyReport, EffError> {
    let c = cost(m, cm)?;
    let p = m.order() as f64;
    Ok(EfficiencyReport {
        method: m,
        order_p: p,
        cost_c: c,
        index_e: p.powf(1.0 / c),
    })
}

/// Efficiency ratio of `mi` against `mj`: R = ln E_i / ln E_j, which is
/// (C_j ln p_i) / (C_i ln p_j). R > 1 means `mi` wins. Independent of the
/// logarithm base.
pub fn ratio(mi: MethodId, mj: MethodId, cm: &CostModel) -> Result<f64, EffError> {
    let ci = cost(mi, cm)?;
    let cj = cost(mj, cm)?;
    let pi = mi.order() as f64;
    let pj = mj.order() as f64;
    Ok((cj * pi.ln()) / (ci * pj.ln()))
}

/// The mu0 threshold at which pg6 and cordero5 tie: for mu0 above
/// g(n, mu1, l) the sixth-order scheme is the more efficient of the two.
pub fn boundary_g(n: usize, mu1: f64, l: f64) -> f64 {
    assert!(n >= 2, "boundary needs n >= 2");
    let n = n as f64;
    let s = 6.0_f64.ln();
    let t = 5.0_f64.ln();
    let num = 4.0 * n * (t - s) * mu1
        + 2.0 * n * n * (t - s)
        + 3.0 * n * (5.0 * t - 3.0 * s)
        + 3.0 * (s - t)
        + 3.0 * n * (t - s) * l
        + 3.0 * (t - s) * l;
    num / (4.0 * (s - t))
}

/// Cost gap between the two sixth-order schemes: boundary_f > 0 exactly
/// when the three-factorization scheme costs more per iteration than the
/// two-factorization one, independent of mu0 and mu1.
pub fn boundary_f(n: usize, l: f64) -> f64 {
    assert!(n >= 2, "boundary needs n >= 2");
    let n = n as f64;
    2.0 * n * n + 9.0 * n + 3.0 * l * (n + 1.0) - 17.0
}

/// One sweep line: the efficiency report of `method` at size `n` plus its
/// ratio against each reference method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: MethodId,
    pub n: usize,
    pub mu0: f64,
    pub mu1: f64,
    pub l: f64,
    #[serde(rename = "C")]
    pub cost_c: f64,
    #[serde(rename = "E")]
    pub index_e: f64,
    #[serde(rename = "R_vs_cordero5")]
    pub r_vs_cordero5: f64,
    #[serde(rename = "R_vs_cordero6")]
    pub r_vs_cordero6: f64,
}

/// Evaluate every method at every n in the range; one row per (n, method)
/// in range order.
pub fn efficiency_sweep(
    methods: &[MethodId],
    n_range: RangeInclusive<usize>,
    mu0: f64,
    mu1: f64,
    l: f64,
) -> Result<Vec<SweepRow>, EffError> {
    let mut rows = Vec::new();
    for n in n_range {
        let cm = CostModel::new(n, mu0, mu1, l);
        for &m in methods {
            let rep = index(m, &cm)?;
            rows.push(SweepRow {
                method: m,
                n,
                mu0,
                mu1,
                l,
                cost_c: rep.cost_c,
                index_e: rep.index_e,
                r_vs_cordero5: ratio(m, MethodId::Cordero5, &cm)?,
                r_vs_cordero6: ratio(m, MethodId::Cordero6, &cm)?,
            });
        }
    }
    Ok(rows)
}

/// Smallest n in the range where pg6 overtakes cordero5 (ratio > 1), if any.
pub fn crossover(n_range: RangeInclusive<usize>, mu0: f64, mu1: f64, l: f64) -> Option<usize> {
    n_range.into_iter().find(|&n| {
        let cm = CostModel::new(n, mu0, mu1, l);
        ratio(MethodId::Pg6, MethodId::Cordero5, &cm).expect("both methods are costable") > 1.0
    })
}
