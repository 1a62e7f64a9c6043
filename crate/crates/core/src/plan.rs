//! Execution plans: which filtering algorithm to run and with which
//! accelerator parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fdfir::Ordering;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanKind {
    NaiveTd,
    OlaTd,
    NaiveFd,
    /// Area-efficient overlap-save: one shared FFT engine, the input
    /// spectrum computed in a separate first pass and reused by every
    /// filter.
    Aols,
    /// Time-efficient overlap-save: separate forward and inverse engines,
    /// one pass per filter.
    Tols,
}

impl PlanKind {
    pub const ALL: [PlanKind; 5] =
        [PlanKind::NaiveTd, PlanKind::OlaTd, PlanKind::NaiveFd, PlanKind::Aols, PlanKind::Tols];

    pub fn is_time_domain(self) -> bool {
        matches!(self, PlanKind::NaiveTd | PlanKind::OlaTd)
    }

    pub fn is_overlap_save(self) -> bool {
        matches!(self, PlanKind::Aols | PlanKind::Tols)
    }

    /// Kinds whose input spectrum is computed once and shared by all
    /// filters.
    pub fn shares_forward_pass(self) -> bool {
        matches!(self, PlanKind::NaiveFd | PlanKind::Aols)
    }

    pub fn name(self) -> &'static str {
        match self {
            PlanKind::NaiveTd => "naive-td",
            PlanKind::OlaTd => "ola-td",
            PlanKind::NaiveFd => "naive-fd",
            PlanKind::Aols => "aols",
            PlanKind::Tols => "tols",
        }
    }
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match lower.as_str() {
            "naive-td" | "td-naive" | "naivetd" => PlanKind::NaiveTd,
            "ola-td" | "ola" | "olatd" => PlanKind::OlaTd,
            "naive-fd" | "fd-naive" | "naivefd" => PlanKind::NaiveFd,
            "aols" | "aols-fd" => PlanKind::Aols,
            "tols" | "tols-fd" => PlanKind::Tols,
            _ => return Err(Error::invalid(format!("unknown plan kind '{s}'"))),
        })
    }
}

/// A fully specified execution plan.
///
/// `sub_filter_len` is the parallel tap count `K'` of the time-domain
/// kernels. The naive time-domain kernel also carries it: a `K'`-tap
/// kernel needs `ceil(K/K')` launches per filter, with the partial results
/// summed on the host.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExecutionPlan {
    pub kind: PlanKind,
    #[serde(default)]
    pub sub_filter_len: Option<usize>,
    #[serde(default)]
    pub n_ft: Option<usize>,
    #[serde(default = "default_pc")]
    pub points_per_cycle: usize,
    #[serde(default = "one")]
    pub replicas: usize,
    #[serde(default)]
    pub power_output: bool,
    #[serde(default = "one")]
    pub devices: usize,
    /// Spectrum ordering at the multiply stage. Defaults to natural order
    /// for AOLS (the bit-reverse module sits before the multiply) and to
    /// bit-reversed order for TOLS (the multiply sits directly behind the
    /// forward engine).
    #[serde(default)]
    pub spectrum_order: Option<Ordering>,
}

fn default_pc() -> usize {
    8
}

fn one() -> usize {
    1
}

impl ExecutionPlan {
    pub fn new(kind: PlanKind) -> Self {
        Self {
            kind,
            sub_filter_len: None,
            n_ft: None,
            points_per_cycle: default_pc(),
            replicas: 1,
            power_output: false,
            devices: 1,
            spectrum_order: None,
        }
    }

    pub fn naive_td() -> Self {
        Self::new(PlanKind::NaiveTd)
    }

    pub fn ola_td(k_prime: usize) -> Self {
        Self { sub_filter_len: Some(k_prime), ..Self::new(PlanKind::OlaTd) }
    }

    pub fn naive_fd() -> Self {
        Self::new(PlanKind::NaiveFd)
    }

    pub fn aols(n_ft: usize, points_per_cycle: usize) -> Self {
        Self { n_ft: Some(n_ft), points_per_cycle, ..Self::new(PlanKind::Aols) }
    }

    pub fn tols(n_ft: usize, points_per_cycle: usize) -> Self {
        Self { n_ft: Some(n_ft), points_per_cycle, ..Self::new(PlanKind::Tols) }
    }

    pub fn with_sub_filter_len(mut self, k_prime: usize) -> Self {
        self.sub_filter_len = Some(k_prime);
        self
    }

    /// `P` power-output replicas.
    pub fn with_power(mut self, replicas: usize) -> Self {
        self.power_output = true;
        self.replicas = replicas;
        self
    }

    pub fn with_devices(mut self, devices: usize) -> Self {
        self.devices = devices;
        self
    }

    pub fn with_spectrum_order(mut self, ordering: Ordering) -> Self {
        self.spectrum_order = Some(ordering);
        self
    }

    pub fn effective_ordering(&self) -> Ordering {
        self.spectrum_order.unwrap_or(match self.kind {
            PlanKind::Tols => Ordering::BitReversed,
            _ => Ordering::Natural,
        })
    }

    /// Sub-filter count `R` for a `taps`-long filter. Frequency-domain
    /// kinds and a naive kernel without a `K'` have `R = 1`.
    pub fn sub_filters(&self, taps: usize) -> usize {
        match (self.kind.is_time_domain(), self.sub_filter_len) {
            (true, Some(kp)) if kp > 0 => taps.div_ceil(kp).max(1),
            _ => 1,
        }
    }

    /// Checks the plan's own invariants and, when `taps` is given, that
    /// filters of that length fit.
    pub fn validate(&self, taps: Option<usize>) -> Result<()> {
        self.validate_shape(taps)?;
        if self.replicas > 1 && !(self.power_output && self.kind == PlanKind::Aols) {
            return Err(Error::invalid("replicas > 1 is only valid for power-output overlap-save (aols) plans"));
        }
        Ok(())
    }

    /// [`validate`](Self::validate) without the rule tying replication to
    /// power output. The cost model accepts such what-if plans.
    pub fn validate_shape(&self, taps: Option<usize>) -> Result<()> {
        if self.replicas == 0 || self.devices == 0 {
            return Err(Error::invalid("replicas and devices must be at least 1"));
        }
        if self.replicas > 1 && self.kind.is_time_domain() {
            return Err(Error::invalid("time-domain plans cannot be replicated"));
        }
        if !matches!(self.points_per_cycle, 4 | 8) && !self.kind.is_time_domain() {
            return Err(Error::invalid(format!("points per cycle must be 4 or 8, got {}", self.points_per_cycle)));
        }
        match self.kind {
            PlanKind::OlaTd => {
                if self.sub_filter_len.unwrap_or(0) == 0 {
                    return Err(Error::invalid("ola-td needs a sub-filter length K' >= 1"));
                }
            }
            PlanKind::NaiveTd => {
                if self.sub_filter_len == Some(0) {
                    return Err(Error::invalid("sub-filter length K' must be at least 1"));
                }
            }
            PlanKind::Aols | PlanKind::Tols => {
                let n_ft =
                    self.n_ft.ok_or_else(|| Error::invalid(format!("{} needs a transform length", self.kind)))?;
                if !n_ft.is_power_of_two() || n_ft < 8 {
                    return Err(Error::invalid(format!("transform length must be a power of two >= 8, got {n_ft}")));
                }
                if let Some(k) = taps {
                    if n_ft <= k {
                        return Err(Error::invalid(format!(
                            "transform length {n_ft} must exceed the filter length {k}"
                        )));
                    }
                }
            }
            PlanKind::NaiveFd => {}
        }
        Ok(())
    }

    /// Short label in the `P x KIND-NFT[-P]` style used in reports.
    pub fn label(&self) -> String {
        let base = match self.kind {
            PlanKind::NaiveTd => match self.sub_filter_len {
                Some(kp) => format!("TD-Naive-{kp}"),
                None => "TD-Naive".to_string(),
            },
            PlanKind::OlaTd => format!("OLA-{}", self.sub_filter_len.unwrap_or(0)),
            PlanKind::NaiveFd => "FD-Naive".to_string(),
            PlanKind::Aols => format!("AOLS-{}", self.n_ft.unwrap_or(0)),
            PlanKind::Tols => format!("TOLS-{}", self.n_ft.unwrap_or(0)),
        };
        let mut label = if self.power_output { format!("{base}-P") } else { base };
        if !self.kind.is_time_domain() {
            label = format!("{label}/pc{}", self.points_per_cycle);
        }
        if self.replicas > 1 {
            label = format!("{}x{label}", self.replicas);
        }
        if self.devices > 1 {
            label = format!("{label}@{}dev", self.devices);
        }
        label
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        for kind in PlanKind::ALL {
            assert_eq!(kind.name().parse::<PlanKind>().unwrap(), kind);
        }
        assert_eq!("TOLS_FD".parse::<PlanKind>().unwrap(), PlanKind::Tols);
        assert!("fft".parse::<PlanKind>().is_err());
    }

    #[test]
    fn validation() {
        assert!(ExecutionPlan::aols(2048, 8).validate(Some(421)).is_ok());
        assert!(ExecutionPlan::aols(256, 8).validate(Some(421)).is_err());
        assert!(ExecutionPlan::aols(1000, 8).validate(None).is_err());
        assert!(ExecutionPlan::aols(1024, 6).validate(None).is_err());
        assert!(ExecutionPlan::new(PlanKind::Tols).validate(None).is_err());
        assert!(ExecutionPlan::aols(1024, 4).with_power(3).validate(Some(421)).is_ok());
        let mut bad = ExecutionPlan::aols(1024, 4);
        bad.replicas = 2;
        assert!(bad.validate(None).is_err());
        assert!(ExecutionPlan::tols(1024, 4).with_power(2).validate(None).is_err());
        assert!(ExecutionPlan::ola_td(0).validate(None).is_err());
        assert!(ExecutionPlan::naive_fd().with_devices(0).validate(None).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(ExecutionPlan::aols(2048, 4).with_power(3).label(), "3xAOLS-2048-P/pc4");
        assert_eq!(ExecutionPlan::ola_td(64).label(), "OLA-64");
        assert_eq!(ExecutionPlan::ola_td(64).sub_filters(421), 7);
        assert_eq!(ExecutionPlan::naive_td().sub_filters(421), 1);
    }
}
