use num_complex::{Complex32, Complex64};
use serde::Serialize;

use crate::{Error, Result};

/// Anything that can be compared as a complex double. Real values are
/// treated as complex values with zero imaginary part.
pub trait AsComplex64: Copy {
    fn to_c64(self) -> Complex64;
}

impl AsComplex64 for Complex32 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl AsComplex64 for Complex64 {
    fn to_c64(self) -> Complex64 {
        self
    }
}

impl AsComplex64 for f32 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
}

impl AsComplex64 for f64 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub rrmse: f64,
    pub max_abs_err: f64,
    pub n_compared: usize,
}

/// Relative root-mean-square error
/// `sqrt(sum |t - r|^2 / sum |r|^2)`.
///
/// An identically zero reference falls back to the absolute
/// `sqrt(sum |t|^2)`.
pub fn rrmse<T: AsComplex64, R: AsComplex64>(test: &[T], reference: &[R]) -> Result<ErrorReport> {
    if test.len() != reference.len() {
        return Err(Error::invalid(format!(
            "length mismatch: test has {} samples, reference {}",
            test.len(),
            reference.len()
        )));
    }
    if test.is_empty() {
        return Err(Error::invalid("nothing to compare"));
    }
    let (mut err_sq, mut ref_sq, mut max_abs) = (0.0f64, 0.0f64, 0.0f64);
    for (&t, &r) in test.iter().zip(reference) {
        let d = t.to_c64() - r.to_c64();
        err_sq += d.norm_sqr();
        ref_sq += r.to_c64().norm_sqr();
        max_abs = max_abs.max(d.norm());
    }
    let rrmse = if ref_sq > 0.0 { (err_sq / ref_sq).sqrt() } else { err_sq.sqrt() };
    Ok(ErrorReport { rrmse, max_abs_err: max_abs, n_compared: test.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SignalRng;
    use proptest::prelude::*;

    #[test]
    fn identical_is_zero() {
        let x = SignalRng::new(5).fill(32);
        let r = rrmse(&x, &x).unwrap();
        assert_eq!(r.rrmse, 0.0);
        assert_eq!(r.max_abs_err, 0.0);
        assert_eq!(r.n_compared, 32);
    }

    #[test]
    fn single_element_ratio() {
        let r = rrmse(&[Complex64::new(1.001, 0.0)], &[Complex64::new(1.0, 0.0)]).unwrap();
        assert!((r.rrmse - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn zero_reference_is_absolute() {
        let r = rrmse(&[3.0f64, 4.0], &[0.0f64, 0.0]).unwrap();
        assert!((r.rrmse - 5.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_lengths() {
        assert!(rrmse(&[1.0f32], &[1.0f64, 2.0]).is_err());
        assert!(rrmse::<f32, f64>(&[], &[]).is_err());
    }

    #[test]
    fn single_precision_rounding_floor() {
        // a double buffer with full 53-bit mantissas, rounded to single
        let mut rng = SignalRng::new(2024);
        let reference: Vec<Complex64> = (0..4096)
            .map(|_| {
                let a = rng.next_uniform() as f64 + rng.next_uniform() as f64 * 1e-8;
                let b = rng.next_uniform() as f64 + rng.next_uniform() as f64 * 1e-8;
                Complex64::new(a, b)
            })
            .collect();
        let single: Vec<Complex32> = reference.iter().map(|c| Complex32::new(c.re as f32, c.im as f32)).collect();
        let r = rrmse(&single, &reference).unwrap();
        assert!(r.rrmse > 0.0 && r.rrmse < 1e-6, "{}", r.rrmse);
    }

    proptest! {
        #[test]
        fn joint_scaling_invariant(seed in 0u64..1000, c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
            let mut rng = SignalRng::new(seed);
            let reference: Vec<Complex64> = (0..64).map(|_| rng.next_complex()).map(AsComplex64::to_c64).collect();
            let test: Vec<Complex64> = reference.iter().map(|v| v * (1.0 + 1e-3 * rng.next_uniform() as f64)).collect();
            let base = rrmse(&test, &reference).unwrap().rrmse;
            let st: Vec<_> = test.iter().map(|v| v * c).collect();
            let sr: Vec<_> = reference.iter().map(|v| v * c).collect();
            let scaled = rrmse(&st, &sr).unwrap().rrmse;
            prop_assert!((scaled - base).abs() <= 1e-12 * base.max(1e-300));
        }
    }
}
