//! Orthogonality defect of a lattice basis and its reduced-basis bound.

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::qr::qr_givens;

/// Orthogonality defect `κ = Π ||h_i||² / det(HᴴH) >= 1`, equal to 1 exactly
/// when the columns are orthogonal. Computed in log space through the QR
/// factorization (`det(HᴴH) = Π r_ii²`).
pub fn orthogonality_defect(h: &ComplexMatrix) -> Result<f64> {
    let factors = qr_givens(h)?;
    Ok(defect_from_r(&factors.r))
}

/// Defect of the basis whose QR factor is `r`; column norms of `r` equal the
/// basis column norms because `Q` has orthonormal columns.
pub fn defect_from_r(r: &ComplexMatrix) -> f64 {
    let m = r.cols();
    let mut log_kappa = 0.0;
    for j in 0..m {
        log_kappa += r.col_norm_sqr(j).ln() - r[(j, j)].norm_sqr().ln();
    }
    log_kappa.exp()
}

/// Upper bound `2^{-m} (2 / (2δ - 1))^{m(m+1)/2}` on the defect of a basis
/// that is size-reduced and satisfies the swap condition everywhere.
pub fn defect_bound(m: usize, delta: f64) -> f64 {
    let base = 2.0 / (2.0 * delta - 1.0);
    let exponent = (m * (m + 1) / 2) as f64;
    2f64.powi(-(m as i32)) * base.powf(exponent)
}
