//! Sequential lattice reduction on QR factors.
//!
//! Three algorithms share the same elementary steps (size reduction,
//! condition check, Givens rotation + column swap) and differ only in
//! control flow:
//!
//! - `Clll`: conventional complex LLL. One column is size-reduced per
//!   iteration, the swap index walks up and down.
//! - `FsrLll`: every iteration starts with a full size reduction of all
//!   columns, then the smallest violating pair in the current window is
//!   rotated and swapped.
//! - `Aslr`: all-swap reduction. After a full size reduction, every
//!   violating pair of the current parity is rotated and swapped in one
//!   round; parities alternate until both are clean.
//!
//! All elementary updates go through the helpers in this module so that the
//! systolic array simulator, which replays the same arithmetic cell by cell,
//! produces bit-identical results.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::qr::{GivensRotation, QrFactors};

pub const CMUL_FLOPS: u64 = 6;
pub const CADD_FLOPS: u64 = 2;
const ZERO_DIAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Clll,
    FsrLll,
    Aslr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Lovasz,
    Siegel,
}

/// Parity of a column pair, following the 1-based convention in which the
/// pair `(k-1, k)` is "even" when `k` is even. Even pairs are disjoint among
/// themselves, as are odd pairs, which is what allows simultaneous swaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn toggle(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// 0-based indices `k` (second column of each pair) of this parity.
    /// 1-based even k = 2, 4, ... maps to 0-based 1, 3, ...
    pub fn pair_indices(self, m: usize) -> Vec<usize> {
        let start = match self {
            Parity::Even => 1,
            Parity::Odd => 2,
        };
        (start..m).step_by(2).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionParams {
    /// Reduction quality parameter, in (1/2, 1).
    pub delta: f64,
    pub condition: Condition,
    pub algorithm: Algorithm,
    /// Iteration cap; `None` means `1000 * m^2`.
    pub max_iterations: Option<usize>,
}

impl ReductionParams {
    /// Defaults: `delta = 0.99`; Lovász condition for the conventional LLL,
    /// Siegel for the two array-oriented algorithms.
    pub fn new(algorithm: Algorithm) -> Self {
        let condition = match algorithm {
            Algorithm::Clll => Condition::Lovasz,
            Algorithm::FsrLll | Algorithm::Aslr => Condition::Siegel,
        };
        Self {
            delta: 0.99,
            condition,
            algorithm,
            max_iterations: None,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_condition(mut self, condition: Condition) -> Self {
        self.condition = condition;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.5 && self.delta < 1.0) {
            return Err(Error::DomainError("delta must lie in (1/2, 1)"));
        }
        Ok(())
    }

    pub fn max_iterations_for(&self, m: usize) -> usize {
        self.max_iterations.unwrap_or(1000 * m * m)
    }
}

/// Histogram of rounded size-reduction coefficients, bucketed by
/// `max(|re|, |im|)`. Tracks how often coefficients stay in the tiny range
/// that hardware can resolve with comparators instead of a divider.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuHistogram {
    pub zero: u64,
    pub one: u64,
    pub two: u64,
    pub larger: u64,
}

impl MuHistogram {
    pub fn record(&mut self, mu: Complex64) {
        let mag = mu.re.abs().max(mu.im.abs());
        if mag == 0.0 {
            self.zero += 1;
        } else if mag <= 1.0 {
            self.one += 1;
        } else if mag <= 2.0 {
            self.two += 1;
        } else {
            self.larger += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.zero + self.one + self.two + self.larger
    }

    pub fn merge(&mut self, other: &MuHistogram) {
        self.zero += other.zero;
        self.one += other.one;
        self.two += other.two;
        self.larger += other.larger;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStats {
    /// Individual column swaps.
    pub column_swaps: u64,
    /// Swap rounds; all simultaneous swaps of one all-swap round count once.
    /// Equals `column_swaps` for the single-swap algorithms.
    pub parallel_swap_rounds: u64,
    /// Size-reduction passes (full passes, or single-column passes for the
    /// conventional LLL).
    pub size_reduction_rounds: u64,
    /// Real additions and multiplications, complex multiply = 6 and complex
    /// add = 2. QR factorization is not included.
    pub flops: u64,
    pub mu_histogram: MuHistogram,
}

/// Working state threaded through the elementary reduction steps.
#[derive(Debug, Clone)]
pub struct ReductionState {
    pub q_h: ComplexMatrix,
    pub r: ComplexMatrix,
    pub t: ComplexMatrix,
    pub order: Parity,
    pub stats: ReductionStats,
}

impl ReductionState {
    pub fn new(qr: &QrFactors) -> Result<Self> {
        Self::with_initial_t(qr, ComplexMatrix::identity(qr.dim()))
    }

    /// Starts bookkeeping from a given unimodular matrix, e.g. the
    /// permutation produced by sorted QR.
    pub fn with_initial_t(qr: &QrFactors, t0: ComplexMatrix) -> Result<Self> {
        let m = qr.r.rows();
        if !qr.r.is_square() || qr.q_h.rows() != m || qr.q_h.cols() < m {
            return Err(Error::ShapeMismatch {
                context: "reduction needs square R and Q^H with at least m columns",
            });
        }
        if t0.rows() != m || t0.cols() != m {
            return Err(Error::ShapeMismatch { context: "initial T must be m x m" });
        }
        Ok(Self {
            q_h: qr.q_h.clone(),
            r: qr.r.clone(),
            t: t0,
            order: Parity::Even,
            stats: ReductionStats::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    fn into_outcome(self, converged: bool) -> ReductionOutcome {
        ReductionOutcome {
            q_h: self.q_h,
            r: self.r,
            t: self.t,
            stats: self.stats,
            converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionOutcome {
    pub q_h: ComplexMatrix,
    pub r: ComplexMatrix,
    pub t: ComplexMatrix,
    pub stats: ReductionStats,
    /// `false` when the iteration cap cut the run short; the fields then
    /// hold the partial result.
    pub converged: bool,
}

/// Component-wise nearest Gaussian integer of `num / den`, halves rounding
/// away from zero.
#[inline]
pub fn mu_round(num: Complex64, den: Complex64) -> Complex64 {
    let q = num / den;
    Complex64::new(q.re.round(), q.im.round())
}

/// Size-reduction coefficient `mu = round(r[row, col] / r[row, row])`.
pub fn mu_coeff(r: &ComplexMatrix, row: usize, col: usize) -> Result<Complex64> {
    debug_assert!(row < col);
    let den = r[(row, row)];
    if den.norm() < ZERO_DIAG_TOL {
        return Err(Error::ZeroDiagonal { index: row });
    }
    Ok(mu_round(r[(row, col)], den))
}

/// One column operation: size-reduce column `col` against column `row`.
///
/// Updates rows `0..=row` of the R column and all rows of the T column.
/// A zero coefficient short-circuits: no update, no flops.
pub fn size_reduce_entry(state: &mut ReductionState, row: usize, col: usize) -> Result<Complex64> {
    let mu = mu_coeff(&state.r, row, col)?;
    state.stats.mu_histogram.record(mu);
    if mu == Complex64::new(0.0, 0.0) {
        return Ok(mu);
    }
    let m = state.dim();
    for l in 0..=row {
        let src = state.r[(l, row)];
        state.r[(l, col)] -= mu * src;
    }
    for l in 0..m {
        let src = state.t[(l, row)];
        state.t[(l, col)] -= mu * src;
    }
    state.stats.flops += (row as u64 + 1 + m as u64) * (CMUL_FLOPS + CADD_FLOPS);
    Ok(mu)
}

/// Full size reduction: column operations for `col = m-1 .. 1` and, inside
/// each, `row = col-1 .. 0`. Afterwards every recomputed coefficient has
/// both components in `[-1/2, 1/2]`.
pub fn full_size_reduction(state: &mut ReductionState) -> Result<()> {
    let m = state.dim();
    for col in (1..m).rev() {
        for row in (0..col).rev() {
            size_reduce_entry(state, row, col)?;
        }
    }
    state.stats.size_reduction_rounds += 1;
    Ok(())
}

/// Swap condition at the pair `(k-1, k)`, `k` 0-based in `1..m`.
///
/// Both forms avoid the division by comparing against
/// `|r[k-1, k-1]|^2` directly:
/// - Lovász holds iff `delta * |r[k-1,k-1]|^2 <= |r[k,k]|^2 + |r[k-1,k]|^2`
/// - Siegel holds iff `(delta - 1/2) * |r[k-1,k-1]|^2 <= |r[k,k]|^2`
pub fn swap_condition_holds(r: &ComplexMatrix, k: usize, delta: f64, condition: Condition) -> bool {
    debug_assert!(k >= 1 && k < r.rows());
    let upper = r[(k - 1, k - 1)].norm_sqr();
    let lower = r[(k, k)].norm_sqr();
    match condition {
        Condition::Lovasz => delta * upper <= lower + r[(k - 1, k)].norm_sqr(),
        Condition::Siegel => (delta - 0.5) * upper <= lower,
    }
}

/// Givens rotation followed by the column swap at pair `(k-1, k)`.
///
/// The rotation zeroes `r[k, k]` against `r[k-1, k]` so that R stays upper
/// triangular once the columns are exchanged. It acts on rows `k-1` and `k`
/// of R (columns `k-1..m`) and of `Qᴴ` (all columns); T columns are swapped
/// alongside R's but are never rotated.
pub fn givens_swap_step(state: &mut ReductionState, k: usize) -> Result<()> {
    let m = state.dim();
    let n = state.q_h.cols();
    let a = state.r[(k - 1, k)];
    let b = state.r[(k, k)];
    let g = GivensRotation::zeroing(a, b).ok_or(Error::DegenerateRotation { pair: k })?;
    // |a|^2, |b|^2 and their sum: 7 real operations.
    state.stats.flops += 7;
    for c in (k - 1)..m {
        let (x, y) = g.apply(state.r[(k - 1, c)], state.r[(k, c)]);
        state.r[(k - 1, c)] = x;
        state.r[(k, c)] = y;
        state.stats.flops += 4 * CMUL_FLOPS + 2 * CADD_FLOPS;
    }
    for c in 0..n {
        let (x, y) = g.apply(state.q_h[(k - 1, c)], state.q_h[(k, c)]);
        state.q_h[(k - 1, c)] = x;
        state.q_h[(k, c)] = y;
        state.stats.flops += 4 * CMUL_FLOPS + 2 * CADD_FLOPS;
    }
    state.r.swap_columns(k - 1, k);
    state.t.swap_columns(k - 1, k);
    // Zero below the diagonal by construction.
    state.r[(k, k - 1)] = Complex64::new(0.0, 0.0);
    state.stats.column_swaps += 1;
    Ok(())
}

/// Conventional complex LLL, used as the reference oracle.
pub fn reduce_clll(qr: &QrFactors, params: &ReductionParams) -> Result<ReductionOutcome> {
    debug_assert_eq!(params.algorithm, Algorithm::Clll);
    reduce_with_initial_t(qr, ComplexMatrix::identity(qr.dim()), params)
}

/// LLL with full size reduction.
pub fn reduce_fsr_lll(qr: &QrFactors, params: &ReductionParams) -> Result<ReductionOutcome> {
    debug_assert_eq!(params.algorithm, Algorithm::FsrLll);
    reduce_with_initial_t(qr, ComplexMatrix::identity(qr.dim()), params)
}

/// All-swap lattice reduction.
pub fn reduce_aslr(qr: &QrFactors, params: &ReductionParams) -> Result<ReductionOutcome> {
    debug_assert_eq!(params.algorithm, Algorithm::Aslr);
    reduce_with_initial_t(qr, ComplexMatrix::identity(qr.dim()), params)
}

/// Runs the algorithm selected in `params`, with `T` starting from identity.
pub fn reduce(qr: &QrFactors, params: &ReductionParams) -> Result<ReductionOutcome> {
    reduce_with_initial_t(qr, ComplexMatrix::identity(qr.dim()), params)
}

/// Runs the algorithm selected in `params` with an explicit initial `T`
/// (the permutation matrix when sorted QR feeds the reduction).
pub fn reduce_with_initial_t(
    qr: &QrFactors,
    t0: ComplexMatrix,
    params: &ReductionParams,
) -> Result<ReductionOutcome> {
    params.validate()?;
    let state = ReductionState::with_initial_t(qr, t0)?;
    match params.algorithm {
        Algorithm::Clll => run_clll(state, params),
        Algorithm::FsrLll => run_fsr(state, params),
        Algorithm::Aslr => run_aslr(state, params),
    }
}

fn run_clll(mut state: ReductionState, params: &ReductionParams) -> Result<ReductionOutcome> {
    let m = state.dim();
    let max_iter = params.max_iterations_for(m);
    let mut iterations = 0usize;
    let mut k = 1usize;
    while k < m {
        iterations += 1;
        if iterations > max_iter {
            return Ok(state.into_outcome(false));
        }
        for row in (0..k).rev() {
            size_reduce_entry(&mut state, row, k)?;
        }
        state.stats.size_reduction_rounds += 1;
        if swap_condition_holds(&state.r, k, params.delta, params.condition) {
            k += 1;
        } else {
            givens_swap_step(&mut state, k)?;
            state.stats.parallel_swap_rounds += 1;
            k = k.saturating_sub(1).max(1);
        }
    }
    Ok(state.into_outcome(true))
}

fn run_fsr(mut state: ReductionState, params: &ReductionParams) -> Result<ReductionOutcome> {
    let m = state.dim();
    let max_iter = params.max_iterations_for(m);
    let mut iterations = 0usize;
    let mut k = 1usize;
    loop {
        iterations += 1;
        if iterations > max_iter {
            return Ok(state.into_outcome(false));
        }
        full_size_reduction(&mut state)?;
        let violator = (k..m)
            .find(|&kk| !swap_condition_holds(&state.r, kk, params.delta, params.condition));
        match violator {
            Some(kp) => {
                givens_swap_step(&mut state, kp)?;
                state.stats.parallel_swap_rounds += 1;
                k = kp.saturating_sub(1).max(1);
            }
            None => break,
        }
    }
    Ok(state.into_outcome(true))
}

fn run_aslr(mut state: ReductionState, params: &ReductionParams) -> Result<ReductionOutcome> {
    let m = state.dim();
    let max_iter = params.max_iterations_for(m);
    let mut iterations = 0usize;
    state.order = Parity::Even;
    'outer: loop {
        iterations += 1;
        if iterations > max_iter {
            return Ok(state.into_outcome(false));
        }
        full_size_reduction(&mut state)?;
        // Parity checks reuse the same size-reduced matrix: a clean parity
        // hands over to the other one without another full size reduction.
        let mut consecutive_clean = 0;
        loop {
            let violations: Vec<usize> = state
                .order
                .pair_indices(m)
                .into_iter()
                .filter(|&k| !swap_condition_holds(&state.r, k, params.delta, params.condition))
                .collect();
            if violations.is_empty() {
                consecutive_clean += 1;
                state.order = state.order.toggle();
                if consecutive_clean >= 2 {
                    break 'outer;
                }
            } else {
                // Disjoint row pairs: these swaps commute, the loop order is
                // immaterial and matches the array's parallel round.
                for &k in &violations {
                    givens_swap_step(&mut state, k)?;
                }
                state.stats.parallel_swap_rounds += 1;
                state.order = state.order.toggle();
                break;
            }
        }
    }
    Ok(state.into_outcome(true))
}

/// Checks the size-reduction bound `|re|, |im| <= 1/2` for every recomputed
/// coefficient, within `tol`.
pub fn is_size_reduced(r: &ComplexMatrix, tol: f64) -> bool {
    let m = r.rows();
    for col in 1..m {
        for row in 0..col {
            let q = r[(row, col)] / r[(row, row)];
            if q.re.abs() > 0.5 + tol || q.im.abs() > 0.5 + tol {
                return false;
            }
        }
    }
    true
}

/// Checks the selected swap condition at every pair.
pub fn all_pairs_satisfy(r: &ComplexMatrix, delta: f64, condition: Condition) -> bool {
    (1..r.rows()).all(|k| swap_condition_holds(r, k, delta, condition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::qr_givens;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::new(rows, cols, (0..rows * cols).map(|_| rng.next_cn()).collect())
    }

    fn random_state(seed: u64, m: usize) -> (ComplexMatrix, ReductionState) {
        let mut rng = SplitMix64::new(seed);
        let h = random_matrix(&mut rng, m, m);
        let qr = qr_givens(&h).unwrap();
        let state = ReductionState::new(&qr).unwrap();
        (h, state)
    }

    /// `Q̃ᴴᴴ · R̃ = H · T` is the invariant every elementary step preserves.
    fn lattice_identity_error(h: &ComplexMatrix, state: &ReductionState) -> f64 {
        let lhs = state.q_h.hermitian().mul(&state.r);
        let rhs = h.mul(&state.t);
        lhs.sub(&rhs).frobenius_norm() / h.frobenius_norm().max(1.0)
    }

    #[test]
    fn mu_rounding_examples() {
        let mut r = ComplexMatrix::identity(2);
        r[(0, 1)] = c(3.2, 1.1);
        assert_eq!(mu_coeff(&r, 0, 1).unwrap(), c(3.0, 1.0));
        r[(0, 1)] = c(0.3, 0.0);
        assert_eq!(mu_coeff(&r, 0, 1).unwrap(), c(0.0, 0.0));
        // Ties round half away from zero.
        r[(0, 1)] = c(1.5, 0.5);
        assert_eq!(mu_coeff(&r, 0, 1).unwrap(), c(2.0, 1.0));
        r[(0, 1)] = c(-1.5, -0.5);
        assert_eq!(mu_coeff(&r, 0, 1).unwrap(), c(-2.0, -1.0));
    }

    #[test]
    fn mu_zero_diagonal_rejected() {
        let mut r = ComplexMatrix::zeros(2, 2);
        r[(0, 1)] = c(1.0, 0.0);
        r[(1, 1)] = c(1.0, 0.0);
        match mu_coeff(&r, 0, 1) {
            Err(Error::ZeroDiagonal { index: 0 }) => {}
            other => panic!("expected ZeroDiagonal, got {other:?}"),
        }
    }

    #[test]
    fn tie_rule_leaves_entry_size_reduced() {
        // After reducing with mu = 2+i the recomputed ratio is back inside
        // the half-box.
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(2),
            r: ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.5, 0.5)], vec![c(0.0, 0.0), c(1.0, 0.0)]]),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        let mu = size_reduce_entry(&mut state, 0, 1).unwrap();
        assert_eq!(mu, c(2.0, 1.0));
        assert!(is_size_reduced(&state.r, 1e-12));
    }

    #[test]
    fn size_reduce_zero_mu_is_free() {
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(2),
            r: ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.3, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        let before = state.clone();
        let mu = size_reduce_entry(&mut state, 0, 1).unwrap();
        assert_eq!(mu, c(0.0, 0.0));
        assert_eq!(state.r, before.r);
        assert_eq!(state.t, before.t);
        assert_eq!(state.stats.flops, 0);
    }

    #[test]
    fn size_reduce_hand_example() {
        // r = [[1, 2.3], [0, 1]]: mu = 2, r12 -> 0.3, t12 -> -2.
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(2),
            r: ComplexMatrix::from_real_rows(&[vec![1.0, 2.3], vec![0.0, 1.0]]),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        size_reduce_entry(&mut state, 0, 1).unwrap();
        assert!((state.r[(0, 1)].re - 0.3).abs() < 1e-12);
        assert_eq!(state.t[(0, 1)], c(-2.0, 0.0));
        assert_eq!(state.t[(0, 0)], c(1.0, 0.0));
        // 1 R entry and 2 T entries updated, 8 flops each.
        assert_eq!(state.stats.flops, 24);
    }

    #[test]
    fn size_reduce_preserves_lattice_identity() {
        let (h, mut state) = random_state(21, 4);
        for col in (1..4).rev() {
            for row in (0..col).rev() {
                size_reduce_entry(&mut state, row, col).unwrap();
                assert!(lattice_identity_error(&h, &state) < 1e-12);
            }
        }
    }

    #[test]
    fn full_size_reduction_identity_is_noop() {
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(4),
            r: ComplexMatrix::identity(4),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        full_size_reduction(&mut state).unwrap();
        assert_eq!(state.r, ComplexMatrix::identity(4));
        assert_eq!(state.t, ComplexMatrix::identity(4));
        assert_eq!(state.stats.flops, 0);
    }

    #[test]
    fn full_size_reduction_hand_example() {
        // r12 = 0.9 + 0.6i reduces with mu = 1+i to -0.1 - 0.4i.
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(2),
            r: ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.9, 0.6)], vec![c(0.0, 0.0), c(1.0, 0.0)]]),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        full_size_reduction(&mut state).unwrap();
        assert!((state.r[(0, 1)] - c(-0.1, -0.4)).norm() < 1e-12);
        assert_eq!(state.t[(0, 1)], c(-1.0, -1.0));
    }

    #[test]
    fn full_size_reduction_bounds_every_coefficient() {
        let (_, mut state) = random_state(22, 8);
        full_size_reduction(&mut state).unwrap();
        assert!(is_size_reduced(&state.r, 1e-12));
    }

    #[test]
    fn siegel_examples() {
        let mut r = ComplexMatrix::identity(2);
        // |r00| = 1, |r11| = 1: holds (0.49 <= 1).
        assert!(swap_condition_holds(&r, 1, 0.99, Condition::Siegel));
        // |r11| = 0.6: fails (0.36 < 0.49).
        r[(1, 1)] = c(0.6, 0.0);
        assert!(!swap_condition_holds(&r, 1, 0.99, Condition::Siegel));
    }

    #[test]
    fn lovasz_implies_siegel_on_size_reduced_matrices() {
        for seed in 0..200 {
            let (_, mut state) = random_state(1000 + seed, 5);
            full_size_reduction(&mut state).unwrap();
            for k in 1..5 {
                for &delta in &[0.51, 0.75, 0.99] {
                    if swap_condition_holds(&state.r, k, delta, Condition::Lovasz) {
                        assert!(
                            swap_condition_holds(&state.r, k, delta, Condition::Siegel),
                            "seed {seed} pair {k} delta {delta}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn givens_pure_exchange() {
        let g = GivensRotation::zeroing(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(g.g11, c(0.0, 0.0));
        assert_eq!(g.g12, c(1.0, 0.0));
        assert_eq!(g.g21, c(-1.0, 0.0));
        assert_eq!(g.g22, c(0.0, 0.0));
        let (x, y) = g.apply(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!((x, y), (c(1.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn givens_swap_pythagorean() {
        // a = 3, b = 4: the new leading diagonal after the swap is 5.
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(2),
            r: ComplexMatrix::from_real_rows(&[vec![1.0, 3.0], vec![0.0, 4.0]]),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        givens_swap_step(&mut state, 1).unwrap();
        assert!((state.r[(0, 0)].re - 5.0).abs() < 1e-12);
        assert_eq!(state.r[(1, 0)], c(0.0, 0.0));
        assert_eq!(state.stats.column_swaps, 1);
    }

    #[test]
    fn givens_swap_preserves_unitarity_and_lattice() {
        let (h, mut state) = random_state(23, 4);
        full_size_reduction(&mut state).unwrap();
        givens_swap_step(&mut state, 1).unwrap();
        let qqh = state.q_h.mul(&state.q_h.hermitian());
        assert!(qqh.sub(&ComplexMatrix::identity(4)).frobenius_norm() < 1e-9);
        assert!(lattice_identity_error(&h, &state) < 1e-9);
    }

    #[test]
    fn degenerate_rotation_rejected() {
        let qr = QrFactors {
            q_h: ComplexMatrix::identity(2),
            r: ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]),
        };
        let mut state = ReductionState::new(&qr).unwrap();
        state.r[(0, 1)] = c(0.0, 0.0);
        state.r[(1, 1)] = c(0.0, 0.0);
        match givens_swap_step(&mut state, 1) {
            Err(Error::DegenerateRotation { pair: 1 }) => {}
            other => panic!("expected DegenerateRotation, got {other:?}"),
        }
    }

    fn outcome_is_valid(h: &ComplexMatrix, out: &ReductionOutcome, params: &ReductionParams) {
        assert!(out.converged);
        assert!(is_size_reduced(&out.r, 1e-9));
        assert!(all_pairs_satisfy(&out.r, params.delta, params.condition));
        let lhs = out.q_h.hermitian().mul(&out.r);
        let rhs = h.mul(&out.t);
        assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-8 * h.frobenius_norm());
        let g = crate::gauss::GaussMatrix::from_complex(&out.t).unwrap();
        assert!(g.is_unimodular());
    }

    #[test]
    fn identity_input_reduces_to_itself() {
        let qr = qr_givens(&ComplexMatrix::identity(4)).unwrap();
        for alg in [Algorithm::Clll, Algorithm::FsrLll, Algorithm::Aslr] {
            let params = ReductionParams::new(alg);
            let out = reduce(&qr, &params).unwrap();
            assert_eq!(out.r, ComplexMatrix::identity(4), "{alg:?}");
            assert_eq!(out.t, ComplexMatrix::identity(4));
            assert_eq!(out.stats.column_swaps, 0);
        }
    }

    #[test]
    fn fsr_on_already_reduced_input_stops_after_one_pass() {
        let (_, state) = random_state(31, 4);
        let params = ReductionParams::new(Algorithm::FsrLll);
        let first = run_fsr(state, &params).unwrap();
        // Re-run on the reduced factors: no swaps, a single pass.
        let qr = QrFactors { q_h: first.q_h.clone(), r: first.r.clone() };
        let again = reduce_fsr_lll(&qr, &params).unwrap();
        assert_eq!(again.stats.column_swaps, 0);
        assert_eq!(again.stats.size_reduction_rounds, 1);
    }

    #[test]
    fn fsr_reduces_random_bases() {
        for seed in 0..50 {
            let (h, _) = random_state(41 + seed, 4);
            let qr = qr_givens(&h).unwrap();
            let params = ReductionParams::new(Algorithm::FsrLll);
            let out = reduce_fsr_lll(&qr, &params).unwrap();
            outcome_is_valid(&h, &out, &params);
        }
    }

    #[test]
    fn aslr_reduces_random_bases() {
        for seed in 0..50 {
            let (h, _) = random_state(91 + seed, 8);
            let qr = qr_givens(&h).unwrap();
            let params = ReductionParams::new(Algorithm::Aslr);
            let out = reduce_aslr(&qr, &params).unwrap();
            outcome_is_valid(&h, &out, &params);
        }
    }

    #[test]
    fn clll_reduces_random_bases() {
        for seed in 0..50 {
            let (h, _) = random_state(141 + seed, 4);
            let qr = qr_givens(&h).unwrap();
            let params = ReductionParams::new(Algorithm::Clll);
            let out = reduce_clll(&qr, &params).unwrap();
            outcome_is_valid(&h, &out, &params);
        }
    }

    #[test]
    fn aslr_first_round_swaps_both_even_pairs() {
        // diag(1, 0.1, 1, 0.1): both even pairs fail Siegel independently,
        // so the first round performs two swaps but counts as one round.
        let r = ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.1, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.1],
        ]);
        let qr = QrFactors { q_h: ComplexMatrix::identity(4), r };
        let params = ReductionParams::new(Algorithm::Aslr);
        let out = reduce_aslr(&qr, &params).unwrap();
        assert!(out.stats.column_swaps >= 2);
        assert!(out.stats.parallel_swap_rounds < out.stats.column_swaps);
        assert!(all_pairs_satisfy(&out.r, params.delta, params.condition));
    }

    #[test]
    fn clll_hand_traceable_two_by_two() {
        // Lovász fails after size reduction; one swap, defect reduced.
        let r = ComplexMatrix::from_real_rows(&[vec![1.0, 0.6], vec![0.0, 0.5]]);
        let h = r.clone();
        let qr = QrFactors { q_h: ComplexMatrix::identity(2), r };
        let params = ReductionParams::new(Algorithm::Clll);
        let out = reduce_clll(&qr, &params).unwrap();
        assert!(out.stats.column_swaps >= 1);
        let before = crate::defect::orthogonality_defect(&h).unwrap();
        let reduced = out.q_h.hermitian().mul(&out.r);
        let after = crate::defect::orthogonality_defect(&reduced).unwrap();
        assert!(after <= before + 1e-12, "after {after} before {before}");
    }

    #[test]
    fn fsr_and_clll_outputs_span_the_same_lattice() {
        for seed in 0..20 {
            let (_, state) = random_state(241 + seed, 4);
            let qr = QrFactors { q_h: state.q_h.clone(), r: state.r.clone() };
            let lovasz = ReductionParams::new(Algorithm::FsrLll).with_condition(Condition::Lovasz);
            let a = reduce_fsr_lll(&qr, &lovasz).unwrap();
            let b = reduce_clll(&qr, &ReductionParams::new(Algorithm::Clll)).unwrap();
            let ta = crate::gauss::GaussMatrix::from_complex(&a.t).unwrap();
            let tb = crate::gauss::GaussMatrix::from_complex(&b.t).unwrap();
            let rel = ta.unimodular_inverse().unwrap().mul(&tb);
            assert!(rel.is_unimodular(), "seed {seed}");
        }
    }

    #[test]
    fn aslr_round_row_pairs_are_disjoint() {
        for m in [4usize, 5, 8, 9] {
            for parity in [Parity::Even, Parity::Odd] {
                let ks = parity.pair_indices(m);
                let mut rows: Vec<usize> = ks.iter().flat_map(|&k| [k - 1, k]).collect();
                rows.sort_unstable();
                rows.dedup();
                assert_eq!(rows.len(), 2 * ks.len(), "m={m} {parity:?}");
            }
        }
    }

    #[test]
    fn parity_indices_match_convention() {
        assert_eq!(Parity::Even.pair_indices(4), vec![1, 3]);
        assert_eq!(Parity::Odd.pair_indices(4), vec![2]);
        assert_eq!(Parity::Even.pair_indices(5), vec![1, 3]);
        assert_eq!(Parity::Odd.pair_indices(5), vec![2, 4]);
    }

    #[test]
    fn flop_microtests() {
        assert_eq!(CMUL_FLOPS, 6);
        assert_eq!(CADD_FLOPS, 2);
    }

    #[test]
    fn iteration_cap_flags_truncation() {
        let (_, state) = random_state(301, 6);
        let qr = QrFactors { q_h: state.q_h.clone(), r: state.r.clone() };
        let params = ReductionParams {
            max_iterations: Some(1),
            ..ReductionParams::new(Algorithm::Clll)
        };
        let out = reduce_clll(&qr, &params).unwrap();
        assert!(!out.converged);
    }

    #[test]
    fn delta_out_of_range_rejected() {
        let qr = qr_givens(&ComplexMatrix::identity(2)).unwrap();
        let params = ReductionParams::new(Algorithm::Clll).with_delta(0.4);
        assert!(matches!(reduce(&qr, &params), Err(Error::DomainError(_))));
    }

    #[test]
    fn sorted_qr_initial_t_keeps_lattice_identity() {
        let mut rng = SplitMix64::new(305);
        let h = random_matrix(&mut rng, 4, 4);
        let (qr, perm) = crate::qr::sorted_qr(&h).unwrap();
        let t0 = crate::qr::permutation_matrix(&perm);
        let params = ReductionParams::new(Algorithm::FsrLll);
        let out = reduce_with_initial_t(&qr, t0, &params).unwrap();
        let lhs = out.q_h.hermitian().mul(&out.r);
        let rhs = h.mul(&out.t);
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-8 * h.frobenius_norm());
        let g = crate::gauss::GaussMatrix::from_complex(&out.t).unwrap();
        assert!(g.is_unimodular());
    }
}
