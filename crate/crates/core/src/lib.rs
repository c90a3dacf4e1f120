//! Dense nonlinear-system solver suite.
//!
//! Four damped-free iterative methods (Newton plus three multipoint schemes
//! of order five and six) over hand-rolled dense linear algebra, with every
//! product, quotient, residual evaluation, Jacobian evaluation, and LU
//! factorization tallied per solve session. Companion modules estimate the
//! computational order of convergence from solve traces and evaluate the
//! classical efficiency-index cost model the operation counts feed into.

pub mod convergence;
pub mod efficiency;
pub mod linalg;
pub mod problem;
pub mod solver;

pub use convergence::{coc_estimate, coc_from_step_norms, error_norms, CocEstimate, CocError};
pub use efficiency::{
    boundary_f, boundary_g, cost, crossover, efficiency_sweep, index, ratio, CostModel, EffError,
    EfficiencyReport, SweepRow,
};
pub use linalg::{
    lu_factor, lu_solve, mat_combine, mat_vec, LinalgError, LuFactors, Matrix, NormKind, OpCount,
    Vector,
};
pub use problem::{
    bvp_problem, fd_jacobian_check, lookup, problem1, BvpSpec, NonlinearProblem, ProblemError,
    ProblemSpec, ALPHA7,
};
pub use solver::{
    cordero5_step, cordero6_step, newton_step, pg6_step, solve, IterationRecord, MethodId,
    SolverConfig, SolveStatus, SolveTrace, StepError, StepMatrix,
};
