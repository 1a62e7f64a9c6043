//! Analytic accelerator model: operation counts, kernel launches, cycles
//! per launch, DSP and memory-bandwidth budgets, and the resulting
//! theoretical latencies. Kernel clock frequencies are always inputs.

mod device;
mod latency;
pub mod presets;
mod resources;
mod sweep;
mod workload;

pub use device::{DeviceModel, FftDspEntry, PowerCalibration, CALIBRATION_ENGINE, POWER_CALIBRATION_TARGET};
pub use latency::{
    cycles_per_launch, launch_count, launch_count_partitioned, theoretical_latency, CostReport, Problem,
};
pub use resources::{bandwidth_bits_per_cycle, dsp_usage, DspUsage, COMPLEX_BITS, POWER_BITS};
pub use sweep::{evaluate, sweep, Candidate, RankedReport, ReferenceKind, REFERENCE_TOLERANCE};
pub use workload::{
    bank_flops, model_chunks, required_performance, workload_flops, Workload, WorkloadParams, DEFAULT_FFT_CONSTANT,
};
