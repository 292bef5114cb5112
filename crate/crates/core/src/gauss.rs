//! Exact Gaussian-integer arithmetic for unimodularity checks.
//!
//! The bookkeeping matrix `T` produced by lattice reduction must have
//! Gaussian-integer entries and `|det T| = 1` at all times. Floating-point
//! determinants cannot certify that, so `T` is lifted onto `BigInt` pairs
//! and the determinant is computed exactly with fraction-free (Bareiss)
//! elimination.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Tolerance for snapping a float to the integer grid.
const INTEGER_TOL: f64 = 1e-9;

/// Exact Gaussian integer `re + i*im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: i64, im: i64) -> Self {
        Self { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.sign() == num_bigint::Sign::NoSign && self.im.sign() == num_bigint::Sign::NoSign
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact quotient; panics if `other` does not divide `self` evenly.
    /// Bareiss elimination only produces exact divisions.
    fn div_exact(&self, other: &Self) -> Self {
        use num_integer::Integer;
        let num = self.mul(&other.conj());
        let den = other.norm_sqr();
        let (q_re, r_re) = num.re.div_rem(&den);
        let (q_im, r_im) = num.im.div_rem(&den);
        let zero = BigInt::from(0);
        assert!(r_re == zero && r_im == zero, "non-exact division in Bareiss step");
        Self { re: q_re, im: q_im }
    }

    /// `true` when this is one of the four Gaussian units 1, -1, i, -i.
    pub fn is_unit(&self) -> bool {
        self.norm_sqr() == BigInt::from(1)
    }
}

/// Exact Gaussian-integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussMatrix {
    pub dim: usize,
    pub entries: Vec<GaussInt>,
}

impl GaussMatrix {
    /// Lifts a square float matrix onto the Gaussian-integer grid.
    ///
    /// Fails with `NonInteger` when any component deviates from the nearest
    /// integer by more than `1e-9`.
    pub fn from_complex(t: &ComplexMatrix) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::ShapeMismatch { context: "Gaussian-integer lift needs a square matrix" });
        }
        let dim = t.rows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = t[(i, j)];
                let re = z.re.round();
                let im = z.im.round();
                if (z.re - re).abs() > INTEGER_TOL || (z.im - im).abs() > INTEGER_TOL {
                    return Err(Error::NonInteger { row: i, col: j });
                }
                entries.push(GaussInt::new(re as i64, im as i64));
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![GaussInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = GaussInt::one();
        }
        Self { dim, entries }
    }

    fn get(&self, i: usize, j: usize) -> &GaussInt {
        &self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: GaussInt) {
        self.entries[i * self.dim + j] = v;
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> GaussInt {
        let n = self.dim;
        if n == 0 {
            return GaussInt::one();
        }
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev_pivot = GaussInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                // Find a row to swap in; determinant is zero if none exists.
                let Some(swap) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return GaussInt::zero();
                };
                for c in 0..n {
                    let tmp = a.get(k, c).clone();
                    a.set(k, c, a.get(swap, c).clone());
                    a.set(swap, c, tmp);
                }
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j).mul(a.get(k, k)).sub(&a.get(i, k).mul(a.get(k, j)));
                    a.set(i, j, num.div_exact(&prev_pivot));
                }
            }
            prev_pivot = a.get(k, k).clone();
        }
        let det = a.get(n - 1, n - 1).clone();
        if sign_flip {
            GaussInt::new(-1, 0).mul(&det)
        } else {
            det
        }
    }

    /// `true` iff `|det| = 1`.
    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_unit()
    }

    /// Exact inverse of a unimodular matrix via the adjugate.
    ///
    /// Returns `None` when the determinant is not a Gaussian unit (the
    /// inverse would then not be Gaussian-integer).
    pub fn unimodular_inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if !det.is_unit() {
            return None;
        }
        let n = self.dim;
        // det is a unit, so 1/det = conj(det).
        let det_inv = det.conj();
        let mut inv = Self::identity(n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i).determinant();
                let sign = if (i + j) % 2 == 0 { GaussInt::one() } else { GaussInt::new(-1, 0) };
                inv.set(i, j, minor.mul(&sign).mul(&det_inv));
            }
        }
        Some(inv)
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == drop_row {
                continue;
            }
            for j in 0..n {
                if j == drop_col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        Self { dim: n - 1, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self { dim: n, entries: vec![GaussInt::zero(); n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur.add(&a.mul(other.get(k, j))));
                }
            }
        }
        out
    }
}

/// Exact determinant of a Gaussian-integer float matrix.
///
/// Errors with `NonInteger` if any entry deviates from the integer grid by
/// more than `1e-9`.
pub fn det_gaussian_integer(t: &ComplexMatrix) -> Result<Complex64> {
    let det = GaussMatrix::from_complex(t)?.determinant();
    let re: f64 = bigint_to_f64(&det.re);
    let im: f64 = bigint_to_f64(&det.im);
    Ok(Complex64::new(re, im))
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_identity() {
        let d = det_gaussian_integer(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(d, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn det_transposition_is_minus_one() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(det_gaussian_integer(&t).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn det_triangular_with_imaginary_offdiag() {
        let t = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ]);
        assert_eq!(det_gaussian_integer(&t).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_integer_entries() {
        let t = ComplexMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]);
        match det_gaussian_integer(&t) {
            Err(Error::NonInteger { row: 0, col: 1 }) => {}
            other => panic!("expected NonInteger, got {other:?}"),
        }
    }

    #[test]
    fn det_with_zero_pivot_needs_row_swap() {
        // [[0, 1, 0], [1, 0, 0], [0, 0, i]] -> det = -i
        let mut t = ComplexMatrix::zeros(3, 3);
        t[(0, 1)] = Complex64::new(1.0, 0.0);
        t[(1, 0)] = Complex64::new(1.0, 0.0);
        t[(2, 2)] = Complex64::new(0.0, 1.0);
        assert_eq!(det_gaussian_integer(&t).unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn unimodular_inverse_roundtrips() {
        // [[1, 1+i], [0, 1]] is unimodular.
        let mut t = ComplexMatrix::identity(2);
        t[(0, 1)] = Complex64::new(1.0, 1.0);
        let g = GaussMatrix::from_complex(&t).unwrap();
        let inv = g.unimodular_inverse().unwrap();
        let prod = g.mul(&inv);
        assert_eq!(prod, GaussMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_has_zero_det() {
        let t = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(det_gaussian_integer(&t).unwrap(), Complex64::new(0.0, 0.0));
    }
}
