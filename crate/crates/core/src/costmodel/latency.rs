use serde::{Deserialize, Serialize};

use super::device::DeviceModel;
use super::resources::{bandwidth_bits_per_cycle, dsp_usage};
use super::workload::{bank_flops, model_chunks, workload_flops, WorkloadParams};
use crate::fdfir::partition_filters;
use crate::{Error, ExecutionPlan, PlanKind, Result};

/// Kernel launches to run `m` filters of `r` sub-filters each with `p`
/// replicas.
///
/// | kind              | launches          |
/// |-------------------|-------------------|
/// | naive-td, ola-td  | `r * m`           |
/// | naive-fd, aols    | `ceil(m/p) + 1`   |
/// | tols              | `ceil(m/p)`       |
pub fn launch_count(kind: PlanKind, r: usize, m: usize, p: usize) -> Result<usize> {
    if r == 0 || m == 0 || p == 0 {
        return Err(Error::invalid("R, M and P must be at least 1"));
    }
    if p > 1 && kind.is_time_domain() {
        return Err(Error::invalid(format!("{kind} kernels are not replicated")));
    }
    Ok(match kind {
        PlanKind::NaiveTd | PlanKind::OlaTd => r * m,
        PlanKind::NaiveFd | PlanKind::Aols => m.div_ceil(p) + 1,
        PlanKind::Tols => m.div_ceil(p),
    })
}

/// Launches summed over `d` devices sharing the filters round-robin; every
/// device with work performs its own forward pass.
pub fn launch_count_partitioned(kind: PlanKind, r: usize, m: usize, p: usize, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::invalid("device count must be at least 1"));
    }
    partition_filters(m, d).iter().filter(|g| !g.is_empty()).map(|g| launch_count(kind, r, g.len(), p)).sum()
}

/// Clock cycles of one launch over `n` input points.
///
/// Time-domain kernels consume one point per cycle. Overlap-save kernels
/// stream `ceil(n / (n_ft - k))` chunks of `n_ft` points at
/// `points_per_cycle` points per cycle. The naive frequency-domain kernel
/// streams the input padded to a power of two at the same rate.
pub fn cycles_per_launch(
    kind: PlanKind,
    n: usize,
    k: usize,
    n_ft: Option<usize>,
    points_per_cycle: usize,
) -> Result<u64> {
    if n == 0 || points_per_cycle == 0 {
        return Err(Error::invalid("N and points per cycle must be positive"));
    }
    Ok(match kind {
        PlanKind::NaiveTd | PlanKind::OlaTd => n as u64,
        PlanKind::NaiveFd => n.next_power_of_two().div_ceil(points_per_cycle) as u64,
        PlanKind::Aols | PlanKind::Tols => {
            let n_ft = n_ft.ok_or_else(|| Error::invalid("overlap-save plans need N_FT"))?;
            (model_chunks(n, k, n_ft)? * n_ft.div_ceil(points_per_cycle)) as u64
        }
    })
}

/// Problem dimensions for a cost evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub n: usize,
    pub k: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport {
    pub label: String,
    pub kind: PlanKind,
    pub plan: ExecutionPlan,
    pub problem: Problem,
    pub sub_filters: usize,
    /// Workload of a single filter.
    pub flops_single: f64,
    /// Workload of the whole bank, the shared input transform paid once.
    pub flops: f64,
    pub launches_single: usize,
    /// Launches for the whole bank, summed over devices.
    pub launches: usize,
    pub cycles_per_launch: u64,
    pub f_max: f64,
    pub latency_single_ms: f64,
    /// Wall time for the whole bank: the busiest device, one-off forward
    /// pass included.
    pub latency_ms: f64,
    /// Steady-state latency per filter, one-off forward pass excluded.
    pub avg_latency_per_filter_ms: f64,
    /// `latency_ms / M`; the ranking key of [`sweep`](super::sweep).
    pub amortized_latency_per_filter_ms: f64,
    pub dsp_used: usize,
    pub dsp_fraction: f64,
    pub dsp_extrapolated: bool,
    pub bandwidth_bits_per_cycle: usize,
    /// Sustained memory transfer per kernel cycle at `f_max`.
    pub bandwidth_capacity_bits_per_cycle: f64,
    /// DSP blocks fit and the bandwidth fits the memory interface; a plan
    /// only throttled by the peak rate at `f_max` stays feasible.
    pub feasible: bool,
    pub notes: Vec<String>,
}

/// Theoretical latency and resource report for `plan` at `f_max` MHz.
pub fn theoretical_latency(
    plan: &ExecutionPlan,
    device: &DeviceModel,
    f_max: f64,
    problem: Problem,
) -> Result<CostReport> {
    if !(f_max.is_finite() && f_max > 0.0) {
        return Err(Error::invalid("f_max must be positive"));
    }
    let Problem { n, k, m } = problem;
    if n == 0 || k == 0 || m == 0 {
        return Err(Error::invalid("N, K and M must be positive"));
    }
    plan.validate_shape(Some(k))?;
    device.validate()?;

    let kind = plan.kind;
    let r = plan.sub_filters(k);
    let p = plan.replicas;
    let cycles = cycles_per_launch(kind, n, k, plan.n_ft, plan.points_per_cycle)?;
    let ms_per_launch = cycles as f64 / (f_max * 1e3);

    let launches_single = launch_count(kind, r, 1, p)?;
    let busiest = m.div_ceil(plan.devices);
    let launches_busiest = launch_count(kind, r, busiest, p)?;
    let launches = launch_count_partitioned(kind, r, m, p, plan.devices)?;
    let forward = usize::from(kind.shares_forward_pass());

    let latency_single_ms = launches_single as f64 * ms_per_launch;
    let latency_ms = launches_busiest as f64 * ms_per_launch;
    let avg_latency_per_filter_ms = (launches_busiest - forward) as f64 * ms_per_launch / m as f64;

    let mut params = WorkloadParams::new(n, k, m);
    params.k_prime = plan.sub_filter_len.or(if kind == PlanKind::OlaTd { Some(device.parallel_taps()) } else { None });
    params.n_ft = plan.n_ft;
    let flops_single = workload_flops(kind, &params)?.single_filter;
    let flops = bank_flops(kind, &params)?;

    let dsp = dsp_usage(plan, device)?;
    let bandwidth = bandwidth_bits_per_cycle(plan);
    let capacity = device.bandwidth_capacity(f_max);

    let mut notes = Vec::new();
    if dsp.extrapolated {
        notes.push("FFT-engine DSP cost extrapolated from the (1024, 8) engine".to_string());
    }
    if plan.power_output {
        let cal = device.power_dsp_calibration()?;
        notes.push(format!(
            "power stage at {} DSP/point (calibration residual {:+.4})",
            cal.dsp_per_point, cal.residual
        ));
    }
    if kind == PlanKind::NaiveFd {
        notes.push("naive-fd cycles and DSP are modelled, not measured".to_string());
    }
    let dsp_ok = dsp.blocks <= device.n_dsp;
    // Above the clock where the memory peak binds, a kernel still runs but
    // is throttled; only exceeding the interface width is infeasible.
    let bw_ok = bandwidth as f64 <= device.interface_capacity();
    if !dsp_ok {
        notes.push(format!("needs {} DSP blocks, device has {}", dsp.blocks, device.n_dsp));
    }
    if !bw_ok {
        notes
            .push(format!("needs {bandwidth} bits/cycle, memory interface carries {:.0}", device.interface_capacity()));
    } else if bandwidth as f64 > capacity + 1e-9 {
        notes.push(format!(
            "memory-bound: needs {bandwidth} bits/cycle, peak rate sustains {capacity:.0} at {f_max} MHz"
        ));
    }

    Ok(CostReport {
        label: plan.label(),
        kind,
        plan: plan.clone(),
        problem,
        sub_filters: r,
        flops_single,
        flops,
        launches_single,
        launches,
        cycles_per_launch: cycles,
        f_max,
        latency_single_ms,
        latency_ms,
        avg_latency_per_filter_ms,
        amortized_latency_per_filter_ms: latency_ms / m as f64,
        dsp_used: dsp.blocks,
        dsp_fraction: dsp.blocks as f64 / device.n_dsp as f64,
        dsp_extrapolated: dsp.extrapolated,
        bandwidth_bits_per_cycle: bandwidth,
        bandwidth_capacity_bits_per_cycle: capacity,
        feasible: dsp_ok && bw_ok,
        notes,
    })
}
