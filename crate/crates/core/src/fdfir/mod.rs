//! Frequency-domain FIR filtering.

mod conv;
mod fft;
pub mod opcount;
mod run;

pub use conv::{
    chunk_spectra, conv_naive_fd, conv_ols_fd, conv_ols_fd_with_overlap, filter_chunk_spectra, prepare_template,
    spectral_power, OlsGeometry, PreparedTemplate,
};
pub use fft::{bit_reverse_permute, fft, Direction, FftPlan, Ordering};
pub use run::{
    partition_filters, run_plan, run_prepared, simulate_launches, FilterOutputPlane, LaunchLog, PlanOutput, PlanRun,
};
