//! SplitMix64 stream and the derived uniform / normal draws used by the
//! matrix generators.
//!
//! ```text
//!   state += 0x9E3779B97F4A7C15
//!   z = state
//!   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!   out = z ^ (z >> 31)
//! ```
//!
//! `uniform()` maps the top 53 bits to `((x >> 11) + 0.5) * 2^-53`, which is
//! strictly inside (0, 1). `normal()` is Box-Muller on two consecutive
//! uniforms, keeping only the cosine branch.

use rand_core::{RngCore, SeedableRng};

/// The stream state is the seed itself; no extra mixing of the seed.
#[derive(Debug, Clone)]
pub struct SplitMix64(rand_xoshiro::SplitMix64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(rand_xoshiro::SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
