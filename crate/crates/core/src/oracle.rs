//! Double-precision reference implementations. These stay deliberately
//! naive: an O(N^2) DFT and the causal direct sum, evaluated term by term.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Textbook DFT. The inverse carries the 1/N scaling.
pub fn dft_oracle(x: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    if x.is_empty() {
        return Err(Error::invalid("DFT of an empty sequence"));
    }
    let n = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let scale = if inverse { 1.0 / n as f64 } else { 1.0 };
    let out = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                // reduce k*j mod n before scaling so the angle stays small
                let phase = sign * 2.0 * PI * ((k * j) % n) as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, phase);
            }
            acc * scale
        })
        .collect();
    Ok(out)
}

/// Same-length causal convolution `y[i] = sum_k x[i-k] h[k]`, with `x`
/// treated as zero before its first sample.
pub fn conv_oracle(x: &[Complex64], h: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::invalid("convolution operands must be nonempty"));
    }
    let out = (0..x.len())
        .map(|i| {
            let taps = h.len().min(i + 1);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &hk) in h[..taps].iter().enumerate() {
                acc += x[i - k] * hk;
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Widens a single-precision slice for use with the oracles.
pub fn widen(x: &[num_complex::Complex32]) -> Vec<Complex64> {
    x.iter().map(|c| Complex64::new(c.re as f64, c.im as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SignalRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(seed: u64, n: usize) -> Vec<Complex64> {
        widen(&SignalRng::new(seed).fill(n))
    }

    fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn dft_of_impulse_and_constant() {
        let spec = dft_oracle(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], false).unwrap();
        assert!(max_abs_diff(&spec, &[c(1.0, 0.0); 4]) < 1e-15);
        let spec = dft_oracle(&[c(1.0, 0.0); 4], false).unwrap();
        assert!(max_abs_diff(&spec, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-14);
    }

    #[test]
    fn dft_inverts() {
        let x = random(11, 64);
        let back = dft_oracle(&dft_oracle(&x, false).unwrap(), true).unwrap();
        assert!(max_abs_diff(&x, &back) < 1e-10);
    }

    #[test]
    fn dft_parseval() {
        let x = random(12, 100);
        let spec = dft_oracle(&x, false).unwrap();
        let time: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let freq: f64 = spec.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64;
        assert!((time - freq).abs() / time < 1e-10);
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(dft_oracle(&[], false).is_err());
        assert!(conv_oracle(&[], &[c(1.0, 0.0)]).is_err());
        assert!(conv_oracle(&[c(1.0, 0.0)], &[]).is_err());
    }

    #[test]
    fn conv_small_cases() {
        let x = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert_eq!(conv_oracle(&x, &[c(1.0, 0.0)]).unwrap(), x.to_vec());
        assert_eq!(conv_oracle(&x, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), vec![c(1.0, 0.0), c(3.0, 0.0), c(5.0, 0.0)]);
        assert_eq!(conv_oracle(&[c(0.0, 1.0)], &[c(0.0, 1.0)]).unwrap(), vec![c(-1.0, 0.0)]);
    }

    #[test]
    fn conv_is_linear() {
        let (x1, x2, h) = (random(1, 64), random(2, 64), random(3, 17));
        let (a, b) = (c(0.7, -0.2), c(-1.3, 0.4));
        let mixed: Vec<_> = x1.iter().zip(&x2).map(|(p, q)| a * p + b * q).collect();
        let lhs = conv_oracle(&mixed, &h).unwrap();
        let (y1, y2) = (conv_oracle(&x1, &h).unwrap(), conv_oracle(&x2, &h).unwrap());
        let rhs: Vec<_> = y1.iter().zip(&y2).map(|(p, q)| a * p + b * q).collect();
        let scale = rhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(max_abs_diff(&lhs, &rhs) / scale < 1e-12);
    }
}
