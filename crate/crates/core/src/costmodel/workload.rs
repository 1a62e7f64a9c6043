//! Closed-form operation counts.
//!
//! A complex multiply is 6 operations; inside a time-domain
//! multiply-accumulate it is 8 (two more additions for the running sum).
//! An FFT of `n` points costs `C * n * log2(n)` operations, `C = 5` for a
//! radix-2 style engine.

use serde::Serialize;

use crate::{Error, PlanKind, Result};

pub const DEFAULT_FFT_CONSTANT: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkloadParams {
    pub n: usize,
    pub k: usize,
    pub k_prime: Option<usize>,
    pub n_ft: Option<usize>,
    pub m: usize,
    pub fft_constant: f64,
}

impl WorkloadParams {
    pub fn new(n: usize, k: usize, m: usize) -> Self {
        Self { n, k, k_prime: None, n_ft: None, m, fft_constant: DEFAULT_FFT_CONSTANT }
    }

    pub fn with_k_prime(mut self, k_prime: usize) -> Self {
        self.k_prime = Some(k_prime);
        self
    }

    pub fn with_n_ft(mut self, n_ft: usize) -> Self {
        self.n_ft = Some(n_ft);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Workload {
    pub single_filter: f64,
    /// Per-filter cost in a large bank, where a shared input transform is
    /// amortized away.
    pub avg_per_filter: f64,
}

pub fn workload_flops(kind: PlanKind, p: &WorkloadParams) -> Result<Workload> {
    if p.n == 0 || p.k == 0 || p.m == 0 {
        return Err(Error::invalid("N, K and M must be positive"));
    }
    if !(p.fft_constant.is_finite() && p.fft_constant > 0.0) {
        return Err(Error::invalid("FFT constant must be positive"));
    }
    let (n, k, c) = (p.n as f64, p.k as f64, p.fft_constant);
    let w = match kind {
        PlanKind::NaiveTd => {
            let v = 8.0 * k * n;
            Workload { single_filter: v, avg_per_filter: v }
        }
        PlanKind::OlaTd => {
            let kp = p.k_prime.filter(|&v| v > 0).ok_or_else(|| Error::invalid("OLA workload needs K'"))?;
            let v = 8.0 * kp as f64 * n * p.k.div_ceil(kp) as f64;
            Workload { single_filter: v, avg_per_filter: v }
        }
        PlanKind::NaiveFd => {
            let log_n = n.log2();
            Workload { single_filter: n * (6.0 + 2.0 * c * log_n), avg_per_filter: n * (6.0 + c * log_n) }
        }
        PlanKind::Aols | PlanKind::Tols => {
            let n_ft = p.n_ft.ok_or_else(|| Error::invalid("overlap-save workload needs N_FT"))?;
            let chunks = model_chunks(p.n, p.k, n_ft)? as f64;
            let log_ft = (n_ft as f64).log2();
            let n_ft = n_ft as f64;
            Workload {
                single_filter: chunks * n_ft * (6.0 + 2.0 * c * log_ft),
                avg_per_filter: chunks * n_ft * (6.0 + c * log_ft),
            }
        }
    };
    Ok(w)
}

/// Chunk count `ceil(N / (N_FT - K))` used throughout the cycle and
/// workload model.
pub fn model_chunks(n: usize, k: usize, n_ft: usize) -> Result<usize> {
    if n_ft <= k {
        return Err(Error::invalid(format!("transform length {n_ft} must exceed the filter length {k}")));
    }
    Ok(n.div_ceil(n_ft - k))
}

/// Operations to filter one input with `m` filters: kinds that share the
/// input transform pay it once, the others pay the single-filter cost per
/// filter.
pub fn bank_flops(kind: PlanKind, p: &WorkloadParams) -> Result<f64> {
    let w = workload_flops(kind, p)?;
    let m = p.m as f64;
    Ok(match kind {
        PlanKind::NaiveFd | PlanKind::Aols => w.single_filter + (m - 1.0) * w.avg_per_filter,
        _ => m * w.single_filter,
    })
}

/// Sustained operations per second needed to run `m` direct-form filters
/// of `k` taps over `n` points within `t_limit_s` seconds.
pub fn required_performance(n: usize, k: usize, m: usize, t_limit_s: f64) -> Result<f64> {
    if !(t_limit_s.is_finite() && t_limit_s > 0.0) {
        return Err(Error::invalid("time limit must be positive"));
    }
    if n == 0 || k == 0 || m == 0 {
        return Err(Error::invalid("N, K and M must be positive"));
    }
    Ok(8.0 * n as f64 * k as f64 * m as f64 / t_limit_s)
}
