//! Deterministic test-signal and filter-bank generation.
//!
//! Both components of every sample are uniform on [-1, 1) with 24 bits of
//! resolution, so each value is exactly representable in single precision.

use num_complex::Complex32;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::{Error, FilterBank, Result, SingleBuffer};

pub struct SignalRng(Xoshiro256PlusPlus);

impl SignalRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_uniform(&mut self) -> f32 {
        let bits = (self.0.next_u64() >> 40) as u32;
        bits as f32 / (1u32 << 23) as f32 - 1.0
    }

    pub fn next_complex(&mut self) -> Complex32 {
        let re = self.next_uniform();
        let im = self.next_uniform();
        Complex32::new(re, im)
    }

    pub fn fill(&mut self, n: usize) -> Vec<Complex32> {
        (0..n).map(|_| self.next_complex()).collect()
    }
}

pub fn generate_signal(seed: u64, n: usize) -> Result<SingleBuffer> {
    if n == 0 {
        return Err(Error::invalid("signal length must be at least 1"));
    }
    SingleBuffer::new(SignalRng::new(seed).fill(n))
}

/// `m` templates of `k` taps each, drawn from one stream in template order.
pub fn generate_bank(seed: u64, m: usize, k: usize) -> Result<FilterBank> {
    if m == 0 || k == 0 {
        return Err(Error::invalid("filter count and tap count must be at least 1"));
    }
    let mut rng = SignalRng::new(seed);
    let templates = (0..m).map(|_| SingleBuffer::new(rng.fill(k))).collect::<Result<Vec<_>>>()?;
    FilterBank::new(templates)
}
