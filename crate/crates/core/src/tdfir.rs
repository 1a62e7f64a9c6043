//! Time-domain FIR filtering in single precision.
//!
//! Every routine returns exactly `x.len()` samples of the causal
//! convolution; samples past the end of the input are never produced.

use num_complex::Complex32;

use crate::{Error, Result};

/// Overlap-add geometry: the coefficient array is cut into
/// `sub_filters = ceil(K / K')` pieces of exactly `K'` taps, the last one
/// zero-padded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OlaConfig {
    sub_filter_len: usize,
}

impl OlaConfig {
    pub fn new(sub_filter_len: usize) -> Result<Self> {
        if sub_filter_len == 0 {
            return Err(Error::invalid("sub-filter length K' must be at least 1"));
        }
        Ok(Self { sub_filter_len })
    }

    /// `K' = floor(n_dsp / dsp_per_complex_mult)`, the tap count a device
    /// with `n_dsp` multipliers can evaluate fully in parallel.
    pub fn for_dsp_budget(n_dsp: usize, dsp_per_complex_mult: usize) -> Result<Self> {
        if dsp_per_complex_mult == 0 {
            return Err(Error::invalid("dsp_per_complex_mult must be at least 1"));
        }
        Self::new(n_dsp / dsp_per_complex_mult)
    }

    pub fn sub_filter_len(&self) -> usize {
        self.sub_filter_len
    }

    /// Number of sub-filters `R` for a `taps`-long coefficient array.
    pub fn sub_filters(&self, taps: usize) -> usize {
        taps.div_ceil(self.sub_filter_len)
    }
}

fn check_operands(x: &[Complex32], h: &[Complex32]) -> Result<()> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::invalid("convolution operands must be nonempty"));
    }
    Ok(())
}

/// Direct evaluation of `y[i] = sum_k x[i-k] h[k]`, taps accumulated in
/// ascending order.
pub fn conv_naive_td(x: &[Complex32], h: &[Complex32]) -> Result<Vec<Complex32>> {
    check_operands(x, h)?;
    let mut y = vec![Complex32::new(0.0, 0.0); x.len()];
    accumulate_shifted(x, h, 0, &mut y);
    Ok(y)
}

/// Adds `sum_k x[i - shift - k] h[k]` into `y[i]` for every `i`.
fn accumulate_shifted(x: &[Complex32], h: &[Complex32], shift: usize, y: &mut [Complex32]) {
    let n = y.len();
    for (i, out) in y.iter_mut().enumerate().skip(shift) {
        let last = i - shift;
        let taps = h.len().min(last + 1);
        let mut acc = Complex32::new(0.0, 0.0);
        for (k, &hk) in h[..taps].iter().enumerate() {
            acc += x[last - k] * hk;
        }
        *out += acc;
    }
    debug_assert_eq!(y.len(), n);
}

/// Splits `h` into `ceil(K / K')` sub-arrays of exactly `K'` taps.
pub fn split_coefficients(h: &[Complex32], sub_filter_len: usize) -> Result<Vec<Vec<Complex32>>> {
    let cfg = OlaConfig::new(sub_filter_len)?;
    let k_prime = cfg.sub_filter_len();
    Ok(h.chunks(k_prime)
        .map(|piece| {
            let mut sub = piece.to_vec();
            sub.resize(k_prime, Complex32::new(0.0, 0.0));
            sub
        })
        .collect())
}

/// Overlap-add: sub-filter `r` is convolved with the full input and its
/// output accumulated at an offset of `r * K'` samples, in ascending `r`.
pub fn conv_ola_td(x: &[Complex32], h: &[Complex32], cfg: OlaConfig) -> Result<Vec<Complex32>> {
    check_operands(x, h)?;
    let subs = split_coefficients(h, cfg.sub_filter_len())?;
    let mut y = vec![Complex32::new(0.0, 0.0); x.len()];
    let mut partial = vec![Complex32::new(0.0, 0.0); x.len()];
    for (r, sub) in subs.iter().enumerate() {
        let shift = r * cfg.sub_filter_len();
        if shift >= x.len() {
            break;
        }
        partial.iter_mut().for_each(|v| *v = Complex32::new(0.0, 0.0));
        accumulate_shifted(x, sub, shift, &mut partial);
        for (out, p) in y.iter_mut().zip(&partial).skip(shift) {
            *out += p;
        }
    }
    Ok(y)
}
