//! Reference task dimensions and the published kernel configurations,
//! with their measured kernel clocks and theoretical latencies.

use super::latency::Problem;
use super::sweep::{
    Candidate,
    ReferenceKind::{PerFilter, SingleFilter},
};
use crate::ExecutionPlan;

/// Input points per dedispersion trial.
pub const TASK_INPUT_LEN: usize = 1 << 22;
/// Longest template.
pub const TASK_TAPS: usize = 421;
/// Templates applied per trial (the plane adds the unfiltered input).
pub const TASK_FILTERS: usize = 84;
/// Time budget per trial: 536.87 s of integration over 6000 trials.
pub const TASK_TIME_LIMIT_S: f64 = 0.0895;

pub fn task_problem(m: usize) -> Problem {
    Problem { n: TASK_INPUT_LEN, k: TASK_TAPS, m }
}

/// Single-filter kernels; `reference_ms` is the single-filter latency.
/// The `S`/`N` suffixes of the time-domain kernels distinguish two kernel
/// coding styles with identical structure but different clocks.
pub fn single_filter_kernels() -> Vec<Candidate> {
    vec![
        Candidate::new(ExecutionPlan::naive_td().with_sub_filter_len(64), 254.77)
            .named("TD-Naive-64S")
            .reference(115.24, SingleFilter),
        Candidate::new(ExecutionPlan::naive_td().with_sub_filter_len(64), 270.05)
            .named("TD-Naive-64N")
            .reference(108.72, SingleFilter),
        Candidate::new(ExecutionPlan::ola_td(64), 236.01).named("OLA-64S").reference(124.40, SingleFilter),
        Candidate::new(ExecutionPlan::ola_td(64), 255.29).named("OLA-64N").reference(115.01, SingleFilter),
        Candidate::new(ExecutionPlan::naive_fd(), 183.55).named("FD-Naive"),
        Candidate::new(ExecutionPlan::aols(1024, 8), 222.17).named("AOLS-1024").reference(7.98, SingleFilter),
        Candidate::new(ExecutionPlan::aols(2048, 8), 205.59).named("AOLS-2048").reference(6.41, SingleFilter),
        Candidate::new(ExecutionPlan::aols(4096, 8), 173.97).named("AOLS-4096").reference(6.72, SingleFilter),
        Candidate::new(ExecutionPlan::tols(1024, 8), 168.26).named("TOLS-1024").reference(5.27, SingleFilter),
    ]
}

/// The overlap-save subset of [`single_filter_kernels`].
pub fn single_filter_ols_kernels() -> Vec<Candidate> {
    single_filter_kernels().into_iter().filter(|c| c.plan.kind.is_overlap_save()).collect()
}

/// Replicated 4-point power-output kernels; `reference_ms` is the
/// steady-state per-filter latency for a full bank. The 4096-point rows
/// are not reproduced by the cycle model and come out flagged.
pub fn power_kernels() -> Vec<Candidate> {
    let p = |n_ft, replicas| ExecutionPlan::aols(n_ft, 4).with_power(replicas);
    vec![
        Candidate::new(p(1024, 2), 216.35).named("2xAOLS-1024-P").reference(4.12, PerFilter),
        Candidate::new(p(1024, 3), 214.27).named("3xAOLS-1024-P").reference(2.77, PerFilter),
        Candidate::new(p(2048, 2), 220.21).named("2xAOLS-2048-P").reference(3.00, PerFilter),
        Candidate::new(p(2048, 3), 205.68).named("3xAOLS-2048-P").reference(2.14, PerFilter),
        Candidate::new(p(4096, 2), 182.68).named("2xAOLS-4096-P").reference(4.56, PerFilter),
        Candidate::new(p(4096, 3), 177.24).named("3xAOLS-4096-P").reference(3.13, PerFilter),
    ]
}

/// [`power_kernels`] without the 4096-point rows.
pub fn power_kernels_reproducible() -> Vec<Candidate> {
    power_kernels().into_iter().filter(|c| c.plan.n_ft != Some(4096)).collect()
}
