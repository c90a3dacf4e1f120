//! Dense vectors and matrices with an explicit arithmetic ledger.
//!
//! Every factorization, triangular solve, matrix-vector product, and scaled
//! matrix combination reports its products and quotients to an [`OpCount`]
//! owned by the calling session. Comparisons, row swaps, and additions are
//! free, matching the classical accounting for LU-based solvers. Explicit
//! inverses are never formed; every inverse application is a factorization
//! plus triangular solves.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

/// Relative pivot threshold: a factorization fails when the best available
/// pivot falls below this times the largest magnitude entry of the input.
pub const SINGULARITY_RTOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular to working precision")]
    SingularMatrix,
}

/// Per-session tally of the operations the cost model charges for.
///
/// Counters only ever increase; a fresh session starts from zero. Sessions
/// are passed explicitly so concurrent solves never share a ledger.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub products: u64,
    pub quotients: u64,
    pub residual_evals: u64,
    pub jacobian_evals: u64,
    pub lu_factorizations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        }
    }
}

impl FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(format!("unknown norm {other:?}, expected l1, l2, or linf")),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Column vector of finite reals. Finiteness is checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    comps: Vec<f64>,
}

impl Vector {
    pub fn new(comps: Vec<f64>) -> Self {
        assert!(!comps.is_empty(), "vector must have at least one component");
        assert!(
            comps.iter().all(|c| c.is_finite()),
            "vector components must be finite"
        );
        Vector { comps }
    }

    pub fn fill(dim: usize, value: f64) -> Self {
        Self::new(vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.comps
    }

    /// self - other. Additions are uncounted.
    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Vector::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// self - c * other. Charges n products unless |c| is exactly 1.
    pub fn sub_scaled(&self, c: f64, other: &Vector, ops: &mut OpCount) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        if c != 1.0 && c != -1.0 {
            ops.products += self.dim() as u64;
        }
        Vector::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - c * b)
                .collect(),
        )
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::L1 => {
                let mut acc = 0.0;
                for a in &self.comps {
                    acc += a.abs();
                }
                acc
            }
            NormKind::Linf => {
                let mut m = 0.0f64;
                for a in &self.comps {
                    if a.abs() > m {
                        m = a.abs();
                    }
                }
                m
            }
            NormKind::L2 => {
                let mut acc = 0.0;
                for a in &self.comps {
                    acc += a * a;
                }
                acc.sqrt()
            }
        }
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.comps[i]
    }
}

/// Dense square matrix, row-major. Entries are finite by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        assert!(n > 0, "matrix must have at least one row");
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend_from_slice(row);
        }
        assert!(
            entries.iter().all(|e| e.is_finite()),
            "matrix entries must be finite"
        );
        Matrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix must have at least one row");
        Matrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for e in &self.entries {
            if e.abs() > m {
                m = e.abs();
            }
        }
        m
    }
}

/// Entrywise ca * a + cb * b.
///
/// Charges 2n^2 products when both coefficients differ from +-1, n^2 when
/// exactly one does, and nothing when both are unit: forming a plain sum or
/// difference of two matrices costs no products.
pub fn mat_combine(a: &Matrix, b: &Matrix, ca: f64, cb: f64, ops: &mut OpCount) -> Matrix {
    assert_eq!(a.n, b.n, "matrix dimension mismatch");
    let n = a.n;
    let unit = |c: f64| c == 1.0 || c == -1.0;
    let non_unit = (!unit(ca)) as u64 + (!unit(cb)) as u64;
    ops.products += non_unit * (n * n) as u64;
    let entries = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| ca * x + cb * y)
        .collect();
    Matrix { n, entries }
}

/// Standard matrix-vector product; charges n^2 products.
pub fn mat_vec(a: &Matrix, v: &Vector, ops: &mut OpCount) -> Vector {
    assert_eq!(a.n, v.dim(), "matrix-vector dimension mismatch");
    let n = a.n;
    ops.products += (n * n) as u64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += a.get(i, j) * v[j];
        }
        out.push(acc);
    }
    Vector::new(out)
}

/// P * A = L * U with row permutation `perm`: row i of the permuted system
/// is row perm[i] of the original. The diagonal of `lower` is exactly 1.
#[derive(Debug, Clone)]
pub struct LuFactors {
    pub lower: Matrix,
    pub upper: Matrix,
    pub perm: Vec<usize>,
}

/// LU factorization with partial (row) pivoting.
///
/// Charges exactly n(n-1)(2n-1)/6 products and n(n-1)/2 quotients, counted
/// structurally: pivot comparisons and row swaps are free, and zero entries
/// are eliminated at the same charge as any other. Fails with
/// [`LinalgError::SingularMatrix`] when the best available pivot magnitude
/// drops below [`SINGULARITY_RTOL`] times the largest entry of the input.
pub fn lu_factor(a: &Matrix, ops: &mut OpCount) -> Result<LuFactors, LinalgError> {
    let n = a.n;
    ops.lu_factorizations += 1;
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(LinalgError::SingularMatrix);
    }
    let threshold = SINGULARITY_RTOL * scale;
    let mut w = a.entries.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best = k;
        for i in k + 1..n {
            if w[i * n + k].abs() > w[best * n + k].abs() {
                best = i;
            }
        }
        if w[best * n + k].abs() < threshold {
            return Err(LinalgError::SingularMatrix);
        }
        if best != k {
            for j in 0..n {
                w.swap(k * n + j, best * n + j);
            }
            perm.swap(k, best);
        }
        let pivot = w[k * n + k];
        for i in k + 1..n {
            let m = w[i * n + k] / pivot;
            ops.quotients += 1;
            w[i * n + k] = m;
            for j in k + 1..n {
                w[i * n + j] -= m * w[k * n + j];
                ops.products += 1;
            }
        }
    }
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, w[i * n + j]);
        }
        for j in i..n {
            upper.set(i, j, w[i * n + j]);
        }
    }
    Ok(LuFactors { lower, upper, perm })
}

/// Forward plus backward substitution; charges n(n-1) products and n
/// quotients (the unit diagonal of L needs no division).
pub fn lu_solve(f: &LuFactors, b: &Vector, ops: &mut OpCount) -> Vector {
    let n = f.lower.n;
    assert_eq!(b.dim(), n, "right-hand side dimension mismatch");
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut acc = b[f.perm[i]];
        for j in 0..i {
            acc -= f.lower.get(i, j) * y[j];
            ops.products += 1;
        }
        y[i] = acc;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in i + 1..n {
            acc -= f.upper.get(i, j) * x[j];
            ops.products += 1;
        }
        x[i] = acc / f.upper.get(i, i);
        ops.quotients += 1;
    }
    Vector::new(x)
}
