use std::io::Write;
use std::path::Path;

use serde::Serialize;

use ftconv::config::RunConfig;
use ftconv::costmodel::{RankedReport, ReferenceKind};
use ftconv::{ExecutionPlan, PlanKind};

use crate::CliResult;

/// Operation-count convention behind the GFLOPS figure of a plan kind.
pub fn flop_convention(kind: PlanKind) -> &'static str {
    if kind.is_time_domain() {
        "td: 8 ops per tap per output sample"
    } else {
        "fd: 6 ops per complex multiply + 5 n log2 n per transform"
    }
}

pub const DOMAIN_NOTE: &str =
    "GFLOPS count each domain's own operations; time- and frequency-domain figures are not comparable.";

pub fn environment_note(workers: usize) -> String {
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let build = if cfg!(debug_assertions) { "debug" } else { "release" };
    format!(
        "{}/{}, {cpus} logical CPUs, {workers} worker threads, {build} build, timing excludes file I/O",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}

/// One benchmark or verification point.
#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub plan: String,
    pub kind: PlanKind,
    pub domain: &'static str,
    pub flop_convention: &'static str,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub seed: u64,
    pub workers: usize,
    pub repetitions: usize,
    /// Median wall-clock latency of the timed runs.
    pub latency_ms: f64,
    pub latencies_ms: Vec<f64>,
    pub avg_latency_per_filter_ms: f64,
    pub flops: f64,
    pub gflops: f64,
    pub launches: usize,
    /// Worst per-filter rRMSE, when verified.
    pub rrmse: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rrmse_per_filter: Vec<f64>,
    pub config: RunConfig,
    pub environment: String,
}

impl BenchReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        plan: &ExecutionPlan,
        dims: (usize, usize, usize),
        config: &RunConfig,
        latencies_ms: Vec<f64>,
        flops: f64,
        launches: usize,
        rrmse_per_filter: Vec<f64>,
    ) -> Self {
        let (n, k, m) = dims;
        let latency_ms = median(&latencies_ms);
        let rrmse = rrmse_per_filter.iter().copied().reduce(f64::max);
        Self {
            plan: plan.label(),
            kind: plan.kind,
            domain: if plan.kind.is_time_domain() { "time" } else { "frequency" },
            flop_convention: flop_convention(plan.kind),
            n,
            k,
            m,
            seed: config.seed,
            workers: config.workers,
            repetitions: latencies_ms.len(),
            latency_ms,
            avg_latency_per_filter_ms: latency_ms / m as f64,
            flops,
            gflops: flops / (latency_ms * 1e6),
            latencies_ms,
            launches,
            rrmse,
            rrmse_per_filter,
            config: config.clone(),
            environment: environment_note(config.workers),
        }
    }

    pub fn row(&self) -> BenchRow {
        BenchRow {
            plan: self.plan.clone(),
            kind: self.kind.name(),
            domain: self.domain,
            n: self.n,
            k: self.k,
            m: self.m,
            seed: self.seed,
            workers: self.workers,
            repetitions: self.repetitions,
            latency_ms: self.latency_ms,
            avg_latency_per_filter_ms: self.avg_latency_per_filter_ms,
            flops: self.flops,
            gflops: self.gflops,
            launches: self.launches,
            rrmse: self.rrmse,
        }
    }
}

/// Flat CSV form of a [`BenchReport`].
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub plan: String,
    pub kind: &'static str,
    pub domain: &'static str,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub seed: u64,
    pub workers: usize,
    pub repetitions: usize,
    pub latency_ms: f64,
    pub avg_latency_per_filter_ms: f64,
    pub flops: f64,
    pub gflops: f64,
    pub launches: usize,
    pub rrmse: Option<f64>,
}

/// Flat CSV form of a cost report.
#[derive(Clone, Debug, Serialize)]
pub struct CostRow {
    pub rank: usize,
    pub name: String,
    pub kind: &'static str,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub sub_filters: usize,
    pub launches_single: usize,
    pub launches: usize,
    pub cycles_per_launch: u64,
    pub f_max_mhz: f64,
    pub latency_single_ms: f64,
    pub latency_ms: f64,
    pub avg_latency_per_filter_ms: f64,
    pub amortized_latency_per_filter_ms: f64,
    pub flops: f64,
    pub dsp_used: usize,
    pub dsp_fraction: f64,
    pub dsp_extrapolated: bool,
    pub bandwidth_bits_per_cycle: usize,
    pub bandwidth_capacity_bits_per_cycle: f64,
    pub feasible: bool,
    pub reference_ms: Option<f64>,
    pub reference_kind: Option<ReferenceKind>,
    pub deviation: Option<f64>,
    pub notes: String,
}

impl CostRow {
    pub fn new(rank: usize, r: &RankedReport) -> Self {
        let c = &r.report;
        Self {
            rank,
            name: r.name.clone(),
            kind: c.kind.name(),
            n: c.problem.n,
            k: c.problem.k,
            m: c.problem.m,
            sub_filters: c.sub_filters,
            launches_single: c.launches_single,
            launches: c.launches,
            cycles_per_launch: c.cycles_per_launch,
            f_max_mhz: c.f_max,
            latency_single_ms: c.latency_single_ms,
            latency_ms: c.latency_ms,
            avg_latency_per_filter_ms: c.avg_latency_per_filter_ms,
            amortized_latency_per_filter_ms: c.amortized_latency_per_filter_ms,
            flops: c.flops,
            dsp_used: c.dsp_used,
            dsp_fraction: c.dsp_fraction,
            dsp_extrapolated: c.dsp_extrapolated,
            bandwidth_bits_per_cycle: c.bandwidth_bits_per_cycle,
            bandwidth_capacity_bits_per_cycle: c.bandwidth_capacity_bits_per_cycle,
            feasible: c.feasible,
            reference_ms: r.reference_ms,
            reference_kind: r.reference_kind,
            deviation: r.deviation,
            notes: c.notes.join("; "),
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => 0.5 * (v[n / 2 - 1] + v[n / 2]),
    }
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| crate::CliError::io(format!("{}: {e}", path.display())))?;
    for row in rows {
        w.serialize(row).map_err(|e| crate::CliError::io(format!("{}: {e}", path.display())))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| crate::CliError::io(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| crate::CliError::io(format!("{}: {e}", path.display())))
}

pub fn print_bench_table<W: Write>(out: &mut W, reports: &[BenchReport]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<24} {:>9} {:>5} {:>4} {:>12} {:>14} {:>10} {:>9} {:>10}",
        "plan", "N", "K", "M", "latency ms", "ms per filter", "GFLOPS", "launches", "rRMSE"
    )?;
    for r in reports {
        let err = r.rrmse.map(|e| format!("{e:.2e}")).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{:<24} {:>9} {:>5} {:>4} {:>12.3} {:>14.4} {:>10.2} {:>9} {:>10}",
            r.plan, r.n, r.k, r.m, r.latency_ms, r.avg_latency_per_filter_ms, r.gflops, r.launches, err
        )?;
    }
    Ok(())
}

pub fn print_cost_table<W: Write>(out: &mut W, rows: &[CostRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>4} {:<22} {:>8} {:>10} {:>8} {:>10} {:>11} {:>10} {:>9} {:>6} {:>10} {:>8} {:>8}",
        "rank",
        "plan",
        "launches",
        "cycles",
        "MHz",
        "single ms",
        "ms/filter",
        "total ms",
        "DSP",
        "DSP %",
        "bits/cyc",
        "ref ms",
        "dev %"
    )?;
    for r in rows {
        let reference = r.reference_ms.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        let dev = r.deviation.map(|v| format!("{:+.2}", 100.0 * v)).unwrap_or_else(|| "-".into());
        let dsp = format!("{}{}", r.dsp_used, if r.dsp_extrapolated { "*" } else { "" });
        let per_filter = if r.m == 1 { r.latency_single_ms } else { r.avg_latency_per_filter_ms };
        writeln!(
            out,
            "{:>4} {:<22} {:>8} {:>10} {:>8.2} {:>10.3} {:>11.3} {:>10.3} {:>9} {:>6.1} {:>10} {:>8} {:>8}{}",
            r.rank,
            r.name,
            r.launches,
            r.cycles_per_launch,
            r.f_max_mhz,
            r.latency_single_ms,
            per_filter,
            r.latency_ms,
            dsp,
            100.0 * r.dsp_fraction,
            r.bandwidth_bits_per_cycle,
            reference,
            dev,
            if r.feasible { "" } else { "  INFEASIBLE" }
        )?;
        if !r.notes.is_empty() {
            writeln!(out, "     note: {}", r.notes)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn gflops_times_latency_is_workload() {
        let cfg = RunConfig::default();
        let r = BenchReport::new(
            &ExecutionPlan::tols(1024, 8),
            (1 << 16, 421, 3),
            &cfg,
            vec![2.0, 1.0, 5.0],
            7.5e9,
            3,
            vec![],
        );
        assert_eq!(r.latency_ms, 2.0);
        assert!((r.gflops * 1e9 * r.latency_ms * 1e-3 / r.flops - 1.0).abs() < 1e-12);
        assert_eq!(r.rrmse, None);
        assert_eq!(r.seed, cfg.seed);
    }
}
