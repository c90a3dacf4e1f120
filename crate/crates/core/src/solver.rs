//! The iterative methods and the solve driver.
//!
//! Four schemes share one driver. Per full iteration they require:
//!
//! | method   | residuals | jacobians | LU factorizations |
//! |----------|-----------|-----------|-------------------|
//! | newton   | 1         | 1         | 1                 |
//! | pg6      | 2         | 2         | 3                 |
//! | cordero5 | 2         | 2         | 3                 |
//! | cordero6 | 2         | 2         | 2                 |
//!
//! pg6 and cordero5 factor F'(x) once and reuse the factors for every
//! right-hand side against it; cordero6 reuses the factors of 3F'(y)-F'(x)
//! the same way. Combined matrices are formed explicitly as scaled sums,
//! never through inverses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    lu_factor, lu_solve, mat_combine, mat_vec, LuFactors, Matrix, NormKind, OpCount, Vector,
};
use crate::problem::NonlinearProblem;

/// Iterates with any component beyond this magnitude are treated as
/// diverged and the solve stops with `MaxIterReached`.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodId {
    Newton,
    Pg6,
    Cordero5,
    Cordero6,
}

impl MethodId {
    pub const ALL: [MethodId; 4] = [
        MethodId::Newton,
        MethodId::Pg6,
        MethodId::Cordero5,
        MethodId::Cordero6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::Newton => "newton",
            MethodId::Pg6 => "pg6",
            MethodId::Cordero5 => "cordero5",
            MethodId::Cordero6 => "cordero6",
        }
    }

    /// Theoretical order of convergence.
    pub fn order(self) -> u32 {
        match self {
            MethodId::Newton => 2,
            MethodId::Pg6 => 6,
            MethodId::Cordero5 => 5,
            MethodId::Cordero6 => 6,
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "newton" => Ok(MethodId::Newton),
            "pg6" => Ok(MethodId::Pg6),
            "cordero5" => Ok(MethodId::Cordero5),
            "cordero6" => Ok(MethodId::Cordero6),
            other => Err(format!(
                "unknown method {other:?}, expected newton, pg6, cordero5, or cordero6"
            )),
        }
    }
}

/// Which matrix a step had to factor when the factorization failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMatrix {
    Jx,
    Jy,
    SumJxJy,
    Diff3JyJx,
}

impl fmt::Display for StepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepMatrix::Jx => "F'(x)",
            StepMatrix::Jy => "F'(y)",
            StepMatrix::SumJxJy => "F'(x)+F'(y)",
            StepMatrix::Diff3JyJx => "3F'(y)-F'(x)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{matrix} is singular to working precision")]
pub struct StepError {
    pub matrix: StepMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub norm: NormKind,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-12,
            max_iter: 100,
            norm: NormKind::L2,
        }
    }
}

/// One row of a solve history. Record 0 is the start and has no step norm;
/// record k >= 1 holds the k-th iterate and ||x(k) - x(k-1)|| in the
/// configured norm. The error norm against the registered solution is
/// carried when the problem has one.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub x: Vector,
    pub step_norm: Option<f64>,
    pub error_norm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIterReached,
    SingularJacobian,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Converged => "Converged",
            SolveStatus::MaxIterReached => "MaxIterReached",
            SolveStatus::SingularJacobian => "SingularJacobian",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Full history of one solve session.
///
/// Invariant: `records` is nonempty and record k holds iterate k. When
/// `status` is `Converged`, either the final step norm is below the
/// configured tolerance or the final iterate's residual is exactly zero
/// (the driver stops on an exact root without taking a further step).
#[derive(Debug)]
pub struct SolveTrace {
    pub records: Vec<IterationRecord>,
    pub status: SolveStatus,
    pub ops: OpCount,
    pub method: MethodId,
    pub problem_name: String,
}

impl SolveTrace {
    /// Number of full iterations taken (records minus the start row).
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }

    pub fn final_iterate(&self) -> &Vector {
        &self.records.last().expect("records nonempty").x
    }

    /// Successive step norms, in iteration order (record 0 contributes none).
    pub fn step_norms(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.step_norm).collect()
    }
}

fn eval_residual(p: &NonlinearProblem, x: &Vector, ops: &mut OpCount) -> Vector {
    ops.residual_evals += 1;
    p.residual(x)
}

fn eval_jacobian(p: &NonlinearProblem, x: &Vector, ops: &mut OpCount) -> Matrix {
    ops.jacobian_evals += 1;
    p.jacobian(x)
}

fn factor(m: &Matrix, which: StepMatrix, ops: &mut OpCount) -> Result<LuFactors, StepError> {
    lu_factor(m, ops).map_err(|_| StepError { matrix: which })
}

fn newton_update(
    p: &NonlinearProblem,
    x: &Vector,
    fx: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    let jx = eval_jacobian(p, x, ops);
    let lux = factor(&jx, StepMatrix::Jx, ops)?;
    let d = lu_solve(&lux, fx, ops);
    Ok(x.sub(&d))
}

// y = x - F'(x)^-1 F(x),
// z = x - 2 [F'(x) + F'(y)]^-1 F(x),
// x_next = z - [3F'(y) - F'(x)]^-1 [F'(x) + F'(y)] F'(x)^-1 F(z).
fn pg6_update(
    p: &NonlinearProblem,
    x: &Vector,
    fx: &Vector,
    ops: &mut OpCount,
) -> Result<(Vector, Vector, Vector), StepError> {
    let jx = eval_jacobian(p, x, ops);
    let lux = factor(&jx, StepMatrix::Jx, ops)?;
    let d1 = lu_solve(&lux, fx, ops);
    let y = x.sub(&d1);
    let jy = eval_jacobian(p, &y, ops);
    let sum = mat_combine(&jx, &jy, 1.0, 1.0, ops);
    let lus = factor(&sum, StepMatrix::SumJxJy, ops)?;
    let d2 = lu_solve(&lus, fx, ops);
    let z = x.sub_scaled(2.0, &d2, ops);
    let dif = mat_combine(&jy, &jx, 3.0, -1.0, ops);
    let lud = factor(&dif, StepMatrix::Diff3JyJx, ops)?;
    let fz = eval_residual(p, &z, ops);
    let d3 = lu_solve(&lux, &fz, ops);
    let v = mat_vec(&sum, &d3, ops);
    let d4 = lu_solve(&lud, &v, ops);
    Ok((z.sub(&d4), y, z))
}

// Same y and z as pg6; the final stage solves against F'(y) instead.
fn cordero5_update(
    p: &NonlinearProblem,
    x: &Vector,
    fx: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    let jx = eval_jacobian(p, x, ops);
    let lux = factor(&jx, StepMatrix::Jx, ops)?;
    let d1 = lu_solve(&lux, fx, ops);
    let y = x.sub(&d1);
    let jy = eval_jacobian(p, &y, ops);
    let sum = mat_combine(&jx, &jy, 1.0, 1.0, ops);
    let lus = factor(&sum, StepMatrix::SumJxJy, ops)?;
    let d2 = lu_solve(&lus, fx, ops);
    let z = x.sub_scaled(2.0, &d2, ops);
    let luy = factor(&jy, StepMatrix::Jy, ops)?;
    let fz = eval_residual(p, &z, ops);
    let d3 = lu_solve(&luy, &fz, ops);
    Ok(z.sub(&d3))
}

// y = x - (2/3) F'(x)^-1 F(x),
// z = x - (1/2) [3F'(y) - F'(x)]^-1 [3F'(y) + F'(x)] F'(x)^-1 F(x),
// x_next = z - 2 [3F'(y) - F'(x)]^-1 F(z); the factors of 3F'(y) - F'(x)
// serve both of the last two stages.
fn cordero6_update(
    p: &NonlinearProblem,
    x: &Vector,
    fx: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    let jx = eval_jacobian(p, x, ops);
    let lux = factor(&jx, StepMatrix::Jx, ops)?;
    let d1 = lu_solve(&lux, fx, ops);
    let y = x.sub_scaled(2.0 / 3.0, &d1, ops);
    let jy = eval_jacobian(p, &y, ops);
    let sum3 = mat_combine(&jy, &jx, 3.0, 1.0, ops);
    let dif = mat_combine(&jy, &jx, 3.0, -1.0, ops);
    let lud = factor(&dif, StepMatrix::Diff3JyJx, ops)?;
    let v = mat_vec(&sum3, &d1, ops);
    let w = lu_solve(&lud, &v, ops);
    let z = x.sub_scaled(0.5, &w, ops);
    let fz = eval_residual(p, &z, ops);
    let d3 = lu_solve(&lud, &fz, ops);
    Ok(z.sub_scaled(2.0, &d3, ops))
}

fn update_from_residual(
    method: MethodId,
    p: &NonlinearProblem,
    x: &Vector,
    fx: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    match method {
        MethodId::Newton => newton_update(p, x, fx, ops),
        MethodId::Pg6 => pg6_update(p, x, fx, ops).map(|(xn, _, _)| xn),
        MethodId::Cordero5 => cordero5_update(p, x, fx, ops),
        MethodId::Cordero6 => cordero6_update(p, x, fx, ops),
    }
}

/// One Newton iteration from x, evaluating F itself.
pub fn newton_step(
    p: &NonlinearProblem,
    x: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    let fx = eval_residual(p, x, ops);
    newton_update(p, x, &fx, ops)
}

/// One sixth-order three-point iteration from x, evaluating F itself.
/// Returns the next iterate together with the two stage points y and z.
pub fn pg6_step(
    p: &NonlinearProblem,
    x: &Vector,
    ops: &mut OpCount,
) -> Result<(Vector, Vector, Vector), StepError> {
    let fx = eval_residual(p, x, ops);
    pg6_update(p, x, &fx, ops)
}

/// One fifth-order three-point iteration from x, evaluating F itself.
pub fn cordero5_step(
    p: &NonlinearProblem,
    x: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    let fx = eval_residual(p, x, ops);
    cordero5_update(p, x, &fx, ops)
}

/// One sixth-order two-factorization iteration from x, evaluating F itself.
pub fn cordero6_step(
    p: &NonlinearProblem,
    x: &Vector,
    ops: &mut OpCount,
) -> Result<Vector, StepError> {
    let fx = eval_residual(p, x, ops);
    cordero6_update(p, x, &fx, ops)
}

/// Iterate `method` from `x0` until the step norm drops below `cfg.tol`,
/// the residual is exactly zero, the iteration budget is spent, or a
/// Jacobian-type matrix fails to factor. Failures are absorbed into the
/// returned status; the trace always holds every iterate reached.
pub fn solve(
    p: &NonlinearProblem,
    method: MethodId,
    x0: &Vector,
    cfg: &SolverConfig,
) -> SolveTrace {
    assert_eq!(x0.dim(), p.dim(), "start dimension mismatch");
    assert!(cfg.tol >= 0.0, "tolerance must be nonnegative");
    let error_norm_of = |x: &Vector| p.known_solution().map(|alpha| x.sub(alpha).norm(cfg.norm));
    let mut ops = OpCount::default();
    let mut records = vec![IterationRecord {
        k: 0,
        x: x0.clone(),
        step_norm: None,
        error_norm: error_norm_of(x0),
    }];
    let mut x_cur = x0.clone();
    let mut k = 0usize;
    let status = loop {
        if x_cur.as_slice().iter().any(|c| c.abs() > DIVERGENCE_GUARD) {
            break SolveStatus::MaxIterReached;
        }
        if k == cfg.max_iter {
            break SolveStatus::MaxIterReached;
        }
        let fx = eval_residual(p, &x_cur, &mut ops);
        if fx.as_slice().iter().all(|&c| c == 0.0) {
            // exact root: stop without stepping; a start already at the root
            // still gets one record so convergence is visible in the trace
            if k == 0 {
                records.push(IterationRecord {
                    k: 1,
                    x: x_cur.clone(),
                    step_norm: Some(0.0),
                    error_norm: error_norm_of(&x_cur),
                });
            }
            break SolveStatus::Converged;
        }
        let x_next = match update_from_residual(method, p, &x_cur, &fx, &mut ops) {
            Ok(v) => v,
            Err(_) => break SolveStatus::SingularJacobian,
        };
        let d = x_next.sub(&x_cur).norm(cfg.norm);
        records.push(IterationRecord {
            k: k + 1,
            x: x_next.clone(),
            step_norm: Some(d),
            error_norm: error_norm_of(&x_next),
        });
        x_cur = x_next;
        k += 1;
        if d < cfg.tol {
            break SolveStatus::Converged;
        }
    };
    SolveTrace {
        records,
        status,
        ops,
        method,
        problem_name: p.name().to_string(),
    }
}
