//! QR decomposition by Givens rotations, plain and sorted.
//!
//! The reduction algorithms and the processing-element array both consume
//! the factors in the form `(Qᴴ, R)` with `Qᴴ·H = R`. Givens rotations are
//! used (rather than Householder reflections) so that the sequential code
//! and the array's vectoring/rotation cells share the exact same arithmetic.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative tolerance for declaring a diagonal of R negligible.
pub const RANK_TOL: f64 = 1e-12;

/// Unitary 2x2 rotation `[[a*/h, b*/h], [-b/h, a/h]]` with
/// `h = sqrt(|a|^2 + |b|^2)`, which maps the pair `(a, b)` to `(h, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GivensRotation {
    pub g11: Complex64,
    pub g12: Complex64,
    pub g21: Complex64,
    pub g22: Complex64,
}

impl GivensRotation {
    /// Rotation zeroing `b` against `a`, or `None` when both are negligible.
    pub fn zeroing(a: Complex64, b: Complex64) -> Option<Self> {
        let h = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if h < 1e-12 {
            return None;
        }
        Some(Self {
            g11: a.conj() / h,
            g12: b.conj() / h,
            g21: -b / h,
            g22: a / h,
        })
    }

    #[inline]
    pub fn apply(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (self.g11 * x + self.g12 * y, self.g21 * x + self.g22 * y)
    }
}

/// QR factors stored as `Qᴴ` (m x n) and upper-triangular `R` (m x m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QrFactors {
    pub q_h: ComplexMatrix,
    pub r: ComplexMatrix,
}

impl QrFactors {
    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// `Qᴴᴴ · R`, which reconstructs the (column-permuted) input.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.q_h.hermitian().mul(&self.r)
    }
}

/// QR decomposition of an `n x m` matrix with `n >= m`.
///
/// Post-conditions: `q_h * h = r`, `r` exactly upper triangular with real
/// non-negative diagonal (phase-normalized), `q_h * q_hᴴ = I_m`.
pub fn qr_givens(h: &ComplexMatrix) -> Result<QrFactors> {
    let (factors, _) = triangularize(h, false)?;
    Ok(factors)
}

/// Sorted QR: at each elimination step the not-yet-processed column with the
/// smallest residual norm is chosen next (ties keep the earlier column).
///
/// Returns the factors of the column-permuted input together with the
/// permutation: slot `s` of the permuted matrix holds original column
/// `perm[s]`, i.e. `h · P = Qᴴᴴ · R` with `P[perm[s], s] = 1`.
pub fn sorted_qr(h: &ComplexMatrix) -> Result<(QrFactors, Vec<usize>)> {
    triangularize(h, true)
}

fn triangularize(h: &ComplexMatrix, sorted: bool) -> Result<(QrFactors, Vec<usize>)> {
    let n = h.rows();
    let m = h.cols();
    if n < m {
        return Err(Error::ShapeMismatch {
            context: "QR input needs at least as many rows as columns",
        });
    }
    let max_col_norm = (0..m)
        .map(|c| h.col_norm_sqr(c).sqrt())
        .fold(0.0, f64::max);
    let rank_floor = RANK_TOL * max_col_norm;

    let mut a = h.clone();
    let mut q_h_full = ComplexMatrix::identity(n);
    let mut perm: Vec<usize> = (0..m).collect();

    for j in 0..m {
        if sorted {
            // Residual norm of candidate c: rows j.. of column c.
            let mut best = j;
            let mut best_norm = residual_norm_sqr(&a, j, j);
            for c in (j + 1)..m {
                let norm = residual_norm_sqr(&a, j, c);
                if norm < best_norm {
                    best = c;
                    best_norm = norm;
                }
            }
            if best != j {
                a.swap_columns(j, best);
                perm.swap(j, best);
            }
        }
        // Zero rows j+1..n of column j, folding weight upward row by row.
        for i in (j + 1..n).rev() {
            let b = a[(i, j)];
            if b == Complex64::new(0.0, 0.0) {
                continue;
            }
            let g = GivensRotation::zeroing(a[(i - 1, j)], b)
                .expect("rotation defined since |b| > 0");
            for c in j..m {
                let (x, y) = g.apply(a[(i - 1, c)], a[(i, c)]);
                a[(i - 1, c)] = x;
                a[(i, c)] = y;
            }
            for c in 0..n {
                let (x, y) = g.apply(q_h_full[(i - 1, c)], q_h_full[(i, c)]);
                q_h_full[(i - 1, c)] = x;
                q_h_full[(i, c)] = y;
            }
            a[(i, j)] = Complex64::new(0.0, 0.0);
        }
        if a[(j, j)].norm() <= rank_floor {
            return Err(Error::RankDeficient { col: j });
        }
    }

    // Phase-normalize so every diagonal of R is real non-negative.
    for j in 0..m {
        let d = a[(j, j)];
        let norm = d.norm();
        let phase = (d / norm).conj();
        for c in j..m {
            a[(j, c)] *= phase;
        }
        for c in 0..n {
            q_h_full[(j, c)] *= phase;
        }
        a[(j, j)] = Complex64::new(norm, 0.0);
    }

    let mut r = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            r[(i, j)] = a[(i, j)];
        }
    }
    let mut q_h = ComplexMatrix::zeros(m, n);
    for i in 0..m {
        for c in 0..n {
            q_h[(i, c)] = q_h_full[(i, c)];
        }
    }
    Ok((QrFactors { q_h, r }, perm))
}

fn residual_norm_sqr(a: &ComplexMatrix, from_row: usize, col: usize) -> f64 {
    (from_row..a.rows()).map(|i| a[(i, col)].norm_sqr()).sum()
}

/// Permutation matrix with `P[perm[s], s] = 1`, as a Gaussian-integer matrix.
pub fn permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let m = perm.len();
    let mut p = ComplexMatrix::zeros(m, m);
    for (slot, &orig) in perm.iter().enumerate() {
        p[(orig, slot)] = Complex64::new(1.0, 0.0);
    }
    p
}
