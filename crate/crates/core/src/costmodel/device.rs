use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One measured FFT-engine DSP cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FftDspEntry {
    pub n_ft: usize,
    pub points_per_cycle: usize,
    pub dsp: usize,
}

/// Resource description of an accelerator board.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceModel {
    #[serde(default = "default_name")]
    pub name: String,
    pub n_dsp: usize,
    #[serde(default = "default_dsp_per_cm")]
    pub dsp_per_complex_mult: usize,
    pub bank_count: usize,
    /// Data bus width of one memory bank, bits.
    pub bank_bus_width: usize,
    /// Memory clock in MHz; transfers happen on both edges.
    pub bank_rate_mhz: f64,
    /// Ratio between the memory-controller and kernel clocks it can bridge.
    #[serde(default = "default_quarter_rate")]
    pub quarter_rate_factor: usize,
    pub fft_dsp_table: Vec<FftDspEntry>,
    /// Fill table gaps by scaling the (1024, 8) entry linearly in
    /// `points_per_cycle` and `log2(n_ft)`.
    #[serde(default = "yes")]
    pub extrapolate_fft_dsp: bool,
    /// DSP blocks per output point of the spectral-power stage. Calibrated
    /// from the device when absent; see [`DeviceModel::power_dsp_calibration`].
    #[serde(default)]
    pub power_dsp_per_point: Option<usize>,
    #[serde(default)]
    pub logic_capacity: Option<f64>,
    #[serde(default)]
    pub ram_capacity: Option<f64>,
}

fn default_name() -> String {
    "custom".to_string()
}

fn default_dsp_per_cm() -> usize {
    4
}

fn default_quarter_rate() -> usize {
    4
}

fn yes() -> bool {
    true
}

/// The (n_ft, points-per-cycle) engine every table must contain.
pub const CALIBRATION_ENGINE: (usize, usize) = (1024, 8);

/// Share of the DSP budget that three 4-point AOLS-1024-P replicas occupy
/// on the reference board.
pub const POWER_CALIBRATION_TARGET: f64 = 0.85;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerCalibration {
    pub dsp_per_point: usize,
    /// Modelled minus target DSP fraction of the calibration configuration.
    pub residual: f64,
}

impl Default for DeviceModel {
    /// Single mid-range FPGA board: 256 DSP blocks, two 64-bit DDR3 banks
    /// clocked at 800 MHz.
    fn default() -> Self {
        Self {
            name: "256-dsp-2x64bit-ddr3".to_string(),
            n_dsp: 256,
            dsp_per_complex_mult: 4,
            bank_count: 2,
            bank_bus_width: 64,
            bank_rate_mhz: 800.0,
            quarter_rate_factor: 4,
            fft_dsp_table: vec![FftDspEntry { n_ft: 1024, points_per_cycle: 8, dsp: 96 }],
            extrapolate_fft_dsp: true,
            power_dsp_per_point: None,
            logic_capacity: None,
            ram_capacity: None,
        }
    }
}

impl DeviceModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let device: DeviceModel = serde_json::from_str(text)?;
        device.validate()?;
        Ok(device)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_dsp < 4 {
            return Err(Error::invalid(format!("device needs at least 4 DSP blocks, has {}", self.n_dsp)));
        }
        if self.dsp_per_complex_mult == 0 || self.quarter_rate_factor == 0 {
            return Err(Error::invalid("dsp_per_complex_mult and quarter_rate_factor must be positive"));
        }
        if self.bank_count == 0 || self.bank_bus_width == 0 {
            return Err(Error::invalid("device needs at least one memory bank of nonzero width"));
        }
        if !(self.bank_rate_mhz.is_finite() && self.bank_rate_mhz > 0.0) {
            return Err(Error::invalid("bank rate must be positive"));
        }
        if self.calibration_dsp().is_none() {
            return Err(Error::invalid(format!(
                "fft_dsp_table must contain the ({}, {}) engine",
                CALIBRATION_ENGINE.0, CALIBRATION_ENGINE.1
            )));
        }
        for e in &self.fft_dsp_table {
            if !e.n_ft.is_power_of_two() || e.points_per_cycle == 0 {
                return Err(Error::invalid(format!("bad fft_dsp_table entry {e:?}")));
            }
        }
        for cap in [self.logic_capacity, self.ram_capacity].into_iter().flatten() {
            if !(0.0..=1.0).contains(&cap) {
                return Err(Error::invalid("logic/RAM capacities are fractions in [0, 1]"));
            }
        }
        Ok(())
    }

    fn calibration_dsp(&self) -> Option<usize> {
        self.lookup(CALIBRATION_ENGINE.0, CALIBRATION_ENGINE.1)
    }

    fn lookup(&self, n_ft: usize, pc: usize) -> Option<usize> {
        self.fft_dsp_table.iter().find(|e| e.n_ft == n_ft && e.points_per_cycle == pc).map(|e| e.dsp)
    }

    /// Parallel tap count of the time-domain kernels.
    pub fn parallel_taps(&self) -> usize {
        self.n_dsp / self.dsp_per_complex_mult
    }

    /// DSP blocks of one FFT engine and whether the value was extrapolated.
    pub fn fft_dsp(&self, n_ft: usize, pc: usize) -> Result<(usize, bool)> {
        if let Some(dsp) = self.lookup(n_ft, pc) {
            return Ok((dsp, false));
        }
        if !self.extrapolate_fft_dsp {
            return Err(Error::Unsupported(format!("no DSP figure for a {n_ft}-point, {pc}-per-cycle FFT engine")));
        }
        if !n_ft.is_power_of_two() || n_ft < 2 {
            return Err(Error::invalid(format!("transform length {n_ft} is not a power of two")));
        }
        let base = self.calibration_dsp().ok_or_else(|| Error::Unsupported("missing calibration engine".into()))?;
        let scale = (pc as f64 / CALIBRATION_ENGINE.1 as f64)
            * (n_ft.trailing_zeros() as f64 / CALIBRATION_ENGINE.0.trailing_zeros() as f64);
        Ok(((base as f64 * scale - 1e-9).ceil() as usize, true))
    }

    /// Per-point DSP cost of the power stage, fitted so three 4-point
    /// AOLS-1024-P replicas fill [`POWER_CALIBRATION_TARGET`] of the board,
    /// unless the device fixes it explicitly.
    pub fn power_dsp_calibration(&self) -> Result<PowerCalibration> {
        let pc = 4;
        let replicas = 3.0;
        let (fft, _) = self.fft_dsp(1024, pc)?;
        let fixed = (fft + self.dsp_per_complex_mult * pc) as f64;
        let dsp_per_point = match self.power_dsp_per_point {
            Some(v) => v,
            None => {
                let budget = POWER_CALIBRATION_TARGET * self.n_dsp as f64 / replicas;
                ((budget - fixed) / pc as f64).round().max(0.0) as usize
            }
        };
        let total = replicas * (fixed + (dsp_per_point * pc) as f64);
        Ok(PowerCalibration { dsp_per_point, residual: total / self.n_dsp as f64 - POWER_CALIBRATION_TARGET })
    }

    /// Memory bits the board can move per kernel clock cycle at `f_max`
    /// MHz: each bank delivers `width * 2` bits per memory cycle, limited
    /// by the controller to `quarter_rate_factor` memory cycles per kernel
    /// cycle.
    /// Widest transfer per kernel cycle the memory interface accepts,
    /// independent of clock: every bank at the full bridging ratio.
    pub fn interface_capacity(&self) -> f64 {
        (self.bank_count * self.bank_bus_width * 2 * self.quarter_rate_factor) as f64
    }

    pub fn bandwidth_capacity(&self, f_max_mhz: f64) -> f64 {
        let per_cycle = (self.bank_rate_mhz / f_max_mhz).min(self.quarter_rate_factor as f64);
        (self.bank_count * self.bank_bus_width * 2) as f64 * per_cycle
    }
}
