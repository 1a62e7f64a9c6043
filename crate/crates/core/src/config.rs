//! Run configuration, read from JSON.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "input": { "generate": { "n": 65536 } },
//!   "bank": { "generate": { "filters": 84, "taps": 421 } },
//!   "plan": { "kind": "aols", "n_ft": 2048, "points_per_cycle": 4,
//!             "replicas": 3, "power_output": true },
//!   "out": "plane.fop",
//!   "verify": false,
//!   "workers": 4
//! }
//! ```
//!
//! `input` is either `{"file": "<path.cf32>"}` or `{"generate": {"n": N}}`;
//! `bank` is either `{"file": {"path": "<path.cf32>", "taps": K}}` or
//! `{"generate": {"filters": M, "taps": K, "seed": S}}`. A generated bank
//! without its own seed uses `seed + 1`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::costmodel::Candidate;
use crate::rng::{generate_bank, generate_signal};
use crate::{formats, Error, ExecutionPlan, FilterBank, Result, SingleBuffer};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSource {
    File(PathBuf),
    Generate { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BankSource {
    File {
        path: PathBuf,
        taps: usize,
    },
    Generate {
        filters: usize,
        taps: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl BankSource {
    pub fn taps(&self) -> usize {
        match self {
            Self::File { taps, .. } | Self::Generate { taps, .. } => *taps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub input: Option<InputSource>,
    #[serde(default)]
    pub bank: Option<BankSource>,
    #[serde(default)]
    pub plan: Option<ExecutionPlan>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Timed repetitions per benchmark point.
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub device_model: Option<PathBuf>,
    /// Kernel clock in MHz for cost reports.
    #[serde(default)]
    pub f_max: Option<f64>,
    /// Plans for `cost` and `sweep`; replaces the built-in kernel list.
    #[serde(default)]
    pub candidates: Vec<Candidate>,
}

fn default_seed() -> u64 {
    1
}

fn default_workers() -> usize {
    1
}

fn default_repetitions() -> usize {
    5
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            input: None,
            bank: None,
            plan: None,
            out: None,
            csv: None,
            verify: false,
            workers: default_workers(),
            repetitions: default_repetitions(),
            device_model: None,
            f_max: None,
            candidates: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::invalid("workers must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::invalid("repetitions must be at least 1"));
        }
        if let Some(f) = self.f_max {
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::invalid(format!("kernel clock {f} MHz must be positive")));
            }
        }
        if let Some(InputSource::Generate { n: 0 }) = self.input {
            return Err(Error::invalid("generated input length must be at least 1"));
        }
        match self.bank {
            Some(BankSource::Generate { filters: 0, .. }) => {
                return Err(Error::invalid("bank needs at least one filter"))
            }
            Some(ref b) if b.taps() == 0 => return Err(Error::invalid("templates need at least one tap")),
            _ => {}
        }
        if let Some(plan) = &self.plan {
            plan.validate(self.bank.as_ref().map(BankSource::taps))?;
        }
        Ok(())
    }

    pub fn load_input(&self) -> Result<SingleBuffer> {
        match &self.input {
            Some(InputSource::File(path)) => formats::read_cf32(path),
            Some(InputSource::Generate { n }) => generate_signal(self.seed, *n),
            None => Err(Error::invalid("no input configured")),
        }
    }

    pub fn load_bank(&self) -> Result<FilterBank> {
        match &self.bank {
            Some(BankSource::File { path, taps }) => formats::read_bank(path, *taps),
            Some(BankSource::Generate { filters, taps, seed }) => {
                generate_bank(seed.unwrap_or(self.seed.wrapping_add(1)), *filters, *taps)
            }
            None => Err(Error::invalid("no filter bank configured")),
        }
    }
}
