//! Convolution of long complex streams with banks of large complex FIR
//! filters, in the time domain (direct sum, overlap-add) and the frequency
//! domain (full-length FFT, overlap-save), together with an analytic
//! accelerator cost model for choosing between the execution plans.
//!
//! Module map:
//!
//! * [`buffer`], [`oracle`], [`metrics`], [`rng`]: shared domain types, the
//!   double-precision reference implementations, and the rRMSE metric.
//! * [`tdfir`]: time-domain filtering.
//! * [`fdfir`]: FFT engine, overlap-save, execution plans and the
//!   filter-output-plane.
//! * [`costmodel`]: workload, launch, cycle, resource and latency models.
//! * [`formats`], [`config`]: on-disk signal / plane formats and the JSON
//!   configuration schema shared with the command-line harness.

pub mod buffer;
pub mod config;
pub mod costmodel;
mod error;
pub mod fdfir;
pub mod formats;
pub mod metrics;
pub mod oracle;
pub mod plan;
pub mod rng;
pub mod tdfir;

pub use buffer::{ComplexBuffer, DoubleBuffer, FilterBank, Precision, SingleBuffer};
pub use error::{Error, Result};
pub use metrics::{rrmse, ErrorReport};
pub use num_complex::{Complex32, Complex64};
pub use plan::{ExecutionPlan, PlanKind};
