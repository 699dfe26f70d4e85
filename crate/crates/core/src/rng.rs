//! Seeded random numbers with a pinned algorithm.
//!
//! Every random draw in the crate comes from [`SplitMix64`] so that identical
//! seeds reproduce identical graphs, initial states and samples in any
//! language. The generator is Steele, Lea and Flood's SplitMix64:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! Conversions are pinned as well:
//!
//! * `next_f64` returns `(next_u64() >> 11) * 2^-53`, uniform on `[0, 1)`.
//! * `below(n)` returns `floor(next_f64() * n)`.
//! * `normal()` uses the basic Box-Muller transform with `u1 = 1 - next_f64()`,
//!   `u2 = next_f64()`, returning `sqrt(-2 ln u1) * cos(2 pi u2)`; one
//!   Gaussian per two uniforms, the sine branch is discarded.
//!
//! Child seeds are derived with [`derive_seed`], which folds each part into the
//! running hash through the SplitMix64 finalizer [`mix64`].

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a master seed and a path of integer labels.
///
/// `h = master; for p in parts { h = mix64(h ^ mix64(p + GOLDEN_GAMMA)) }`
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(master, |h, &p| {
        mix64(h ^ mix64(p.wrapping_add(GOLDEN_GAMMA)))
    })
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let k = (self.next_f64() * n as f64) as usize;
        k.min(n - 1)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Standard normal deviate (Box-Muller, cosine branch).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
