//! Seedable random numbers with a fully documented algorithm.
//!
//! Monte-Carlo results must be reproducible bit-for-bit from `(seed, trial)`
//! alone, including by implementations in other languages, so this module
//! pins the generator instead of relying on a library whose stream may
//! change between versions.
//!
//! Generator: SplitMix64 (Steele, Lea, Flood 2014). State update is
//! `s += 0x9E3779B97F4A7C15`; output is the "mix" finalizer below.
//!
//! Stream splitting is counter-based: the generator for trial `t` under
//! root seed `r` is seeded with `mix(r ^ mix(t + 0x9E3779B97F4A7C15))`,
//! so trials are independent of evaluation order.
//!
//! Derived values:
//! - `next_f64`   uniform in (0, 1]: `((x >> 11) + 1) / 2^53`
//! - `next_cn`    standard circular complex Gaussian (unit `E[|z|^2]`)
//!   via Box-Muller on two uniforms, components scaled by `1/sqrt(2)`
//! - `next_index` uniform in `0..n` for power-of-two `n`, from the top bits

use num_complex::Complex64;

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for one trial index under a root seed.
    pub fn stream(root_seed: u64, trial: u64) -> Self {
        Self::new(mix(root_seed ^ mix(trial.wrapping_add(GOLDEN))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in (0, 1].
    pub fn next_f64(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Standard circularly symmetric complex Gaussian with `E[|z|^2] = 1`.
    pub fn next_cn(&mut self) -> Complex64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        // Each real component ~ N(0, 1/2).
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(radius * angle.cos() * scale, radius * angle.sin() * scale)
    }

    /// Uniform index in `0..n`; `n` must be a power of two.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n.is_power_of_two());
        let bits = n.trailing_zeros();
        (self.next_u64() >> (64 - bits)) as usize
    }
}
