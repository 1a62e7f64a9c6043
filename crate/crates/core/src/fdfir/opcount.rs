//! Operation counting by instrumented execution.
//!
//! These routines perform the real arithmetic with a plain radix-2 FFT and
//! tally every complex multiply and add as it happens. A complex multiply
//! counts 6 real operations, a complex add 2, so a multiply-accumulate is
//! 8. The tallies are meant to be compared against the closed-form
//! workload model, not to measure the optimized engine.

use std::f64::consts::PI;

use num_complex::Complex32;

use super::conv::OlsGeometry;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpTally {
    pub complex_mults: u64,
    pub complex_adds: u64,
}

impl OpTally {
    pub fn flops(&self) -> u64 {
        6 * self.complex_mults + 2 * self.complex_adds
    }

    fn mul(&mut self, a: Complex32, b: Complex32) -> Complex32 {
        self.complex_mults += 1;
        a * b
    }

    fn add(&mut self, a: Complex32, b: Complex32) -> Complex32 {
        self.complex_adds += 1;
        a + b
    }

    fn sub(&mut self, a: Complex32, b: Complex32) -> Complex32 {
        self.complex_adds += 1;
        a - b
    }
}

/// Radix-2 DIT transform; every butterfly multiplies by its twiddle, even
/// a trivial one.
fn counted_fft(data: &mut [Complex32], inverse: bool, tally: &mut OpTally) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            for k in 0..half {
                let phase = sign * PI * k as f64 / half as f64;
                let w = Complex32::new(phase.cos() as f32, phase.sin() as f32);
                let a = block[k];
                let b = tally.mul(block[k + half], w);
                block[k] = tally.add(a, b);
                block[k + half] = tally.sub(a, b);
            }
        }
        half *= 2;
    }
    if inverse {
        let scale = 1.0 / n as f32;
        data.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Overlap-save convolution of `x` with `h` at transform length `n_ft`,
/// returning the output and the operations it took (the filter's own
/// transform excluded).
pub fn count_ols(x: &[Complex32], h: &[Complex32], n_ft: usize) -> Result<(Vec<Complex32>, OpTally)> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::invalid("convolution operands must be nonempty"));
    }
    if !n_ft.is_power_of_two() {
        return Err(Error::invalid("transform length must be a power of two"));
    }
    let geometry = OlsGeometry::for_taps(x.len(), n_ft, h.len())?;
    let mut scratch = OpTally::default();
    let mut spectrum = h.to_vec();
    spectrum.resize(n_ft, Complex32::new(0.0, 0.0));
    counted_fft(&mut spectrum, false, &mut scratch);

    let mut tally = OpTally::default();
    let mut y = vec![Complex32::new(0.0, 0.0); x.len()];
    let mut buf = vec![Complex32::new(0.0, 0.0); n_ft];
    for c in 0..geometry.chunks {
        let start = (c * geometry.stride) as isize - geometry.overlap as isize;
        for (j, slot) in buf.iter_mut().enumerate() {
            let idx = start + j as isize;
            *slot = if idx >= 0 && (idx as usize) < x.len() { x[idx as usize] } else { Complex32::new(0.0, 0.0) };
        }
        counted_fft(&mut buf, false, &mut tally);
        for (b, s) in buf.iter_mut().zip(&spectrum) {
            *b = tally.mul(*b, *s);
        }
        counted_fft(&mut buf, true, &mut tally);
        let out = c * geometry.stride;
        for j in 0..geometry.stride {
            if out + j < y.len() {
                y[out + j] = buf[geometry.overlap + j];
            }
        }
    }
    Ok((y, tally))
}

/// Direct-form convolution counting one multiply-accumulate per tap per
/// output, including taps that fall before the start of the input.
pub fn count_naive_td(x: &[Complex32], h: &[Complex32]) -> Result<(Vec<Complex32>, OpTally)> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::invalid("convolution operands must be nonempty"));
    }
    let mut tally = OpTally::default();
    let y = (0..x.len())
        .map(|i| {
            let mut acc = Complex32::new(0.0, 0.0);
            for (k, &hk) in h.iter().enumerate() {
                let xv = if i >= k { x[i - k] } else { Complex32::new(0.0, 0.0) };
                let p = tally.mul(xv, hk);
                acc = tally.add(acc, p);
            }
            acc
        })
        .collect();
    Ok((y, tally))
}
