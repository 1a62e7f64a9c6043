//! Running a whole filter bank through an execution plan.

use num_complex::Complex32;
use rayon::prelude::*;

use super::conv::{
    chunk_spectra, conv_ols_fd_with_overlap, filter_chunk_spectra, prepare_template, spectral_power, OlsGeometry,
    PreparedTemplate,
};
use super::fft::FftPlan;
use crate::tdfir::{conv_naive_td, conv_ola_td, OlaConfig};
use crate::{Error, ExecutionPlan, FilterBank, PlanKind, Result};

/// `(M + 1) x N` spectral-power plane: row 0 is the unfiltered input, row
/// `r` the output of filter `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutputPlane {
    cols: usize,
    rows: Vec<Vec<f32>>,
}

impl FilterOutputPlane {
    pub fn new(rows: Vec<Vec<f32>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if let Some(r) = rows.iter().position(|row| row.len() != cols) {
            return Err(Error::Malformed(format!("row {r} has {} values, expected {cols}", rows[r].len())));
        }
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::Malformed(format!("row {r} column {c} is not a finite power value")));
            }
        }
        Ok(Self { cols, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, index: usize) -> Option<&[f32]> {
        self.rows.get(index).map(Vec::as_slice)
    }

    pub fn rows(&self) -> &[Vec<f32>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<f32>> {
        self.rows
    }
}

/// Launch accounting for one run. One launch is one pass of a configured
/// kernel over the full input.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaunchLog {
    pub launches: usize,
    /// Forward transforms applied to the input: chunk transforms for the
    /// overlap-save kinds, full-length transforms for the naive kind.
    pub forward_transforms: usize,
    /// Transform-length chunks processed by each launch, in launch order.
    /// Time-domain launches and full-length transforms count as one chunk.
    pub chunks_per_launch: Vec<usize>,
    pub launches_per_device: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanOutput {
    Plane(FilterOutputPlane),
    /// Complex output of each filter, in filter order.
    Filtered(Vec<Vec<Complex32>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanRun {
    pub output: PlanOutput,
    pub log: LaunchLog,
}

impl PlanRun {
    pub fn plane(&self) -> Option<&FilterOutputPlane> {
        match &self.output {
            PlanOutput::Plane(p) => Some(p),
            PlanOutput::Filtered(_) => None,
        }
    }

    pub fn filtered(&self) -> Option<&[Vec<Complex32>]> {
        match &self.output {
            PlanOutput::Filtered(f) => Some(f),
            PlanOutput::Plane(_) => None,
        }
    }
}

/// Round-robin assignment of `m` filters (0-based) to `devices` groups.
pub fn partition_filters(m: usize, devices: usize) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); devices.max(1)];
    for i in 0..m {
        groups[i % devices.max(1)].push(i);
    }
    groups
}

/// Launch log of `plan` over `m` filters of `taps` coefficients when each
/// overlap-save pass covers `chunks` chunks.
pub fn simulate_launches(plan: &ExecutionPlan, taps: usize, m: usize, chunks: usize) -> LaunchLog {
    let r = plan.sub_filters(taps);
    let p = plan.replicas.max(1);
    let mut log = LaunchLog::default();
    for group in partition_filters(m, plan.devices) {
        let md = group.len();
        let before = log.launches;
        if md > 0 {
            match plan.kind {
                PlanKind::NaiveTd | PlanKind::OlaTd => {
                    log.chunks_per_launch.extend(std::iter::repeat_n(1, r * md));
                }
                PlanKind::NaiveFd => {
                    log.forward_transforms += 1;
                    log.chunks_per_launch.push(1);
                    push_groups(&mut log, md, p, 1);
                }
                PlanKind::Aols => {
                    log.forward_transforms += chunks;
                    log.chunks_per_launch.push(chunks);
                    push_groups(&mut log, md, p, chunks);
                }
                PlanKind::Tols => {
                    log.forward_transforms += chunks * md;
                    push_groups(&mut log, md, p, chunks);
                }
            }
        }
        log.launches = log.chunks_per_launch.len();
        log.launches_per_device.push(log.launches - before);
    }
    log
}

fn push_groups(log: &mut LaunchLog, filters: usize, replicas: usize, chunks: usize) {
    let mut left = filters;
    while left > 0 {
        let take = left.min(replicas);
        log.chunks_per_launch.push(chunks * take);
        left -= take;
    }
}

/// Applies every filter of `bank` to `x` as `plan` prescribes.
///
/// Overlap-save plans share one chunking across the bank, with an overlap
/// of `max_taps - 1`; AOLS and the naive frequency-domain kind transform
/// the input once and reuse its spectrum for every filter, TOLS
/// re-transforms it per filter. Filters are processed in parallel on the
/// current rayon pool; each output depends only on its own filter, so the
/// result does not depend on the pool size.
pub fn run_plan(x: &[Complex32], bank: &FilterBank, plan: &ExecutionPlan) -> Result<PlanRun> {
    if x.is_empty() {
        return Err(Error::invalid("empty input"));
    }
    plan.validate(Some(bank.max_taps()))?;
    let taps = bank.max_taps();
    match plan.kind {
        PlanKind::NaiveTd | PlanKind::OlaTd => {
            let ola = match plan.kind {
                PlanKind::OlaTd => Some(OlaConfig::new(plan.sub_filter_len.unwrap_or(0))?),
                _ => None,
            };
            let rows = map_filters(bank.templates().len(), plan.power_output, |i| {
                let h = &bank.templates()[i];
                match ola {
                    Some(cfg) => conv_ola_td(x, h, cfg),
                    None => conv_naive_td(x, h),
                }
            })?;
            finish(x, plan, rows, simulate_launches(plan, taps, bank.len(), 1))
        }
        PlanKind::NaiveFd => {
            let n_full = (x.len() + taps - 1).next_power_of_two().max(8);
            let fft = FftPlan::natural(n_full)?;
            let mut spectrum = x.to_vec();
            spectrum.resize(n_full, Complex32::new(0.0, 0.0));
            fft.forward_in_place(&mut spectrum);
            let rows = map_filters(bank.len(), plan.power_output, |i| {
                let mut buf = bank.templates()[i].to_vec();
                buf.resize(n_full, Complex32::new(0.0, 0.0));
                fft.forward_in_place(&mut buf);
                for (b, s) in buf.iter_mut().zip(&spectrum) {
                    *b = s * *b;
                }
                fft.inverse_in_place(&mut buf);
                buf.truncate(x.len());
                Ok(buf)
            })?;
            finish(x, plan, rows, simulate_launches(plan, taps, bank.len(), 1))
        }
        PlanKind::Aols | PlanKind::Tols => {
            let fft = ols_fft(plan)?;
            let templates =
                bank.templates().par_iter().map(|h| prepare_template(h, &fft)).collect::<Result<Vec<_>>>()?;
            run_prepared(x, &templates, plan)
        }
    }
}

fn ols_fft(plan: &ExecutionPlan) -> Result<FftPlan> {
    let n_ft = plan.n_ft.ok_or_else(|| Error::invalid("overlap-save plan needs a transform length"))?;
    FftPlan::new(n_ft, plan.points_per_cycle, plan.effective_ordering())
}

/// Overlap-save execution with templates prepared by the caller. Their
/// transform length and spectrum ordering must match the plan.
pub fn run_prepared(x: &[Complex32], templates: &[PreparedTemplate], plan: &ExecutionPlan) -> Result<PlanRun> {
    if !plan.kind.is_overlap_save() {
        return Err(Error::invalid(format!("{} does not use prepared templates", plan.kind)));
    }
    if x.is_empty() || templates.is_empty() {
        return Err(Error::invalid("empty input or filter bank"));
    }
    let taps = templates.iter().map(PreparedTemplate::taps).max().unwrap_or(1);
    plan.validate(Some(taps))?;
    let fft = ols_fft(plan)?;
    for (i, t) in templates.iter().enumerate() {
        if t.ordering() != fft.ordering() || t.n_ft() != fft.n_ft() {
            return Err(Error::invalid(format!(
                "filter {}: template prepared as {}-point {:?}, plan expects {}-point {:?}",
                i + 1,
                t.n_ft(),
                t.ordering(),
                fft.n_ft(),
                fft.ordering()
            )));
        }
    }
    let geometry = OlsGeometry::for_taps(x.len(), fft.n_ft(), taps)?;
    let rows = if plan.kind == PlanKind::Aols {
        let spectra = chunk_spectra(x, &fft, &geometry);
        map_filters(templates.len(), plan.power_output, |i| {
            filter_chunk_spectra(&spectra, &templates[i], &fft, &geometry, x.len())
        })?
    } else {
        map_filters(templates.len(), plan.power_output, |i| {
            conv_ols_fd_with_overlap(x, &templates[i], &fft, geometry.overlap)
        })?
    };
    finish(x, plan, rows, simulate_launches(plan, taps, templates.len(), geometry.chunks))
}

enum Rows {
    Power(Vec<Vec<f32>>),
    Complex(Vec<Vec<Complex32>>),
}

fn map_filters<F>(m: usize, power: bool, filter: F) -> Result<Rows>
where
    F: Fn(usize) -> Result<Vec<Complex32>> + Sync,
{
    if power {
        let rows = (0..m).into_par_iter().map(|i| filter(i).map(|y| spectral_power(&y))).collect::<Result<_>>()?;
        Ok(Rows::Power(rows))
    } else {
        Ok(Rows::Complex((0..m).into_par_iter().map(&filter).collect::<Result<_>>()?))
    }
}

fn finish(x: &[Complex32], plan: &ExecutionPlan, rows: Rows, log: LaunchLog) -> Result<PlanRun> {
    let output = match rows {
        Rows::Power(filters) => {
            debug_assert!(plan.power_output);
            let mut all = Vec::with_capacity(filters.len() + 1);
            all.push(spectral_power(x));
            all.extend(filters);
            PlanOutput::Plane(FilterOutputPlane::new(all)?)
        }
        Rows::Complex(filters) => PlanOutput::Filtered(filters),
    };
    Ok(PlanRun { output, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdfir::Ordering;
    use crate::rng::{generate_bank, generate_signal};

    #[test]
    fn launch_counts_single_and_bank() {
        let m1 = simulate_launches(&ExecutionPlan::tols(1024, 8), 421, 1, 10);
        assert_eq!(m1.launches, 1);
        let m1 = simulate_launches(&ExecutionPlan::aols(1024, 8), 421, 1, 10);
        assert_eq!(m1.launches, 2);
        assert_eq!(m1.chunks_per_launch, vec![10, 10]);
        assert_eq!(simulate_launches(&ExecutionPlan::aols(2048, 8), 421, 84, 5).launches, 85);
        assert_eq!(simulate_launches(&ExecutionPlan::ola_td(64), 421, 84, 1).launches, 588);
        let grouped = simulate_launches(&ExecutionPlan::aols(2048, 4).with_power(3), 421, 84, 5);
        assert_eq!(grouped.launches, 29);
        assert_eq!(grouped.chunks_per_launch[1], 15);
    }

    #[test]
    fn device_partitioning() {
        assert_eq!(partition_filters(5, 2), vec![vec![0, 2, 4], vec![1, 3]]);
        let log = simulate_launches(&ExecutionPlan::aols(2048, 8).with_devices(2), 421, 5, 7);
        assert_eq!(log.launches_per_device, vec![4, 3]);
        assert_eq!(log.forward_transforms, 14);
        let idle = simulate_launches(&ExecutionPlan::aols(2048, 8).with_devices(4), 421, 2, 7);
        assert_eq!(idle.launches_per_device, vec![2, 2, 0, 0]);
    }

    #[test]
    fn ordering_mismatch_rejected() {
        let bank = generate_bank(1, 2, 30).unwrap();
        let x = generate_signal(2, 500).unwrap();
        let nat = FftPlan::natural(64).unwrap();
        let templates: Vec<_> = bank.templates().iter().map(|h| prepare_template(h, &nat).unwrap()).collect();
        let plan = ExecutionPlan::tols(64, 8);
        let err = run_prepared(&x, &templates, &plan).unwrap_err().to_string();
        assert!(err.contains("filter 1"), "{err}");
        let ok = run_prepared(&x, &templates, &plan.with_spectrum_order(Ordering::Natural));
        assert!(ok.is_ok());
    }

    #[test]
    fn template_too_long() {
        let bank = generate_bank(1, 2, 300).unwrap();
        let x = generate_signal(2, 500).unwrap();
        assert!(run_plan(&x, &bank, &ExecutionPlan::aols(256, 8)).is_err());
    }

    #[test]
    fn plane_shape_and_row_zero() {
        let bank = generate_bank(3, 3, 50).unwrap();
        let x = generate_signal(4, 1000).unwrap();
        let run = run_plan(&x, &bank, &ExecutionPlan::aols(128, 4).with_power(2)).unwrap();
        let plane = run.plane().unwrap();
        assert_eq!(plane.n_rows(), 4);
        assert_eq!(plane.n_cols(), 1000);
        assert_eq!(plane.row(0).unwrap(), spectral_power(&x).as_slice());
        assert_eq!(run.log.launches, 3);
    }

    #[test]
    fn plane_rejects_negative_and_ragged() {
        assert!(FilterOutputPlane::new(vec![vec![1.0], vec![-1.0]]).is_err());
        assert!(FilterOutputPlane::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
