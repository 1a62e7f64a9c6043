use super::device::DeviceModel;
use crate::{ExecutionPlan, PlanKind, Result};

/// Bits of one single-precision complex sample.
pub const COMPLEX_BITS: usize = 64;
/// Bits of one single-precision power value.
pub const POWER_BITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DspUsage {
    pub blocks: usize,
    /// Some FFT-engine cost in the total came from extrapolation rather
    /// than the device table.
    pub extrapolated: bool,
}

/// DSP blocks a plan occupies.
///
/// Time-domain kernels use one complex multiplier per parallel tap. An
/// overlap-save replica is its FFT engine(s), `points_per_cycle` complex
/// multipliers for the spectrum product and, with power output, the power
/// stage; replicas multiply the whole.
pub fn dsp_usage(plan: &ExecutionPlan, device: &DeviceModel) -> Result<DspUsage> {
    let cm = device.dsp_per_complex_mult;
    let pc = plan.points_per_cycle;
    if plan.kind.is_time_domain() {
        let taps = plan.sub_filter_len.unwrap_or_else(|| device.parallel_taps());
        return Ok(DspUsage { blocks: cm * taps, extrapolated: false });
    }
    let (engine, n_engines, extrapolated) = match plan.kind {
        PlanKind::Aols | PlanKind::Tols => {
            let n_ft = plan.n_ft.unwrap_or(0);
            let (dsp, ex) = device.fft_dsp(n_ft, pc)?;
            (dsp, if plan.kind == PlanKind::Tols { 2 } else { 1 }, ex)
        }
        // the full-length transform runs as row transforms on a 2048-point engine
        _ => {
            let (dsp, ex) = device.fft_dsp(2048, pc)?;
            (dsp, 1, ex)
        }
    };
    let power = if plan.power_output { device.power_dsp_calibration()?.dsp_per_point * pc } else { 0 };
    let per_replica = n_engines * engine + cm * pc + power;
    Ok(DspUsage { blocks: per_replica * plan.replicas.max(1), extrapolated })
}

/// Off-chip traffic per kernel cycle.
///
/// Time-domain kernels load and store one complex sample per cycle.
/// Frequency-domain plans load `points_per_cycle` complex samples once,
/// shared by all replicas, and each replica stores `points_per_cycle`
/// complex samples, or power values when the plan outputs power.
pub fn bandwidth_bits_per_cycle(plan: &ExecutionPlan) -> usize {
    if plan.kind.is_time_domain() {
        return 2 * COMPLEX_BITS;
    }
    let pc = plan.points_per_cycle;
    let store = if plan.power_output { POWER_BITS } else { COMPLEX_BITS };
    pc * COMPLEX_BITS + plan.replicas.max(1) * pc * store
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_dsp_figures() {
        let d = DeviceModel::default();
        assert_eq!(dsp_usage(&ExecutionPlan::aols(1024, 8), &d).unwrap().blocks, 128);
        assert_eq!(dsp_usage(&ExecutionPlan::tols(1024, 8), &d).unwrap().blocks, 224);
        assert!(!dsp_usage(&ExecutionPlan::tols(1024, 8), &d).unwrap().extrapolated);
        assert_eq!(dsp_usage(&ExecutionPlan::ola_td(64), &d).unwrap().blocks, 256);
        assert_eq!(dsp_usage(&ExecutionPlan::naive_td(), &d).unwrap().blocks, 256);
    }

    #[test]
    fn replicated_power_plans() {
        let d = DeviceModel::default();
        let three = dsp_usage(&ExecutionPlan::aols(1024, 4).with_power(3), &d).unwrap();
        assert_eq!(three.blocks, 216);
        assert!(three.extrapolated);
        // two 8-point replicas with a power stage overrun the board
        let two = dsp_usage(&ExecutionPlan::aols(1024, 8).with_power(2), &d).unwrap();
        assert!(two.blocks > d.n_dsp);
    }

    #[test]
    fn quoted_bandwidths() {
        assert_eq!(bandwidth_bits_per_cycle(&ExecutionPlan::tols(1024, 8)), 1024);
        let mut two = ExecutionPlan::aols(1024, 8);
        two.replicas = 2;
        assert_eq!(bandwidth_bits_per_cycle(&two), 1536);
        assert_eq!(bandwidth_bits_per_cycle(&ExecutionPlan::aols(1024, 8).with_power(1)), 768);
        assert_eq!(bandwidth_bits_per_cycle(&ExecutionPlan::aols(2048, 4).with_power(3)), 640);
        assert_eq!(bandwidth_bits_per_cycle(&ExecutionPlan::ola_td(64)), 128);
    }
}
