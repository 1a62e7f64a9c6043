use serde::{Deserialize, Serialize};

use super::device::DeviceModel;
use super::latency::{theoretical_latency, CostReport, Problem};
use crate::{Error, ExecutionPlan, Result};

/// A plan to evaluate, with the kernel clock it runs at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    #[serde(default)]
    pub name: Option<String>,
    pub plan: ExecutionPlan,
    pub f_max: f64,
    /// Published latency to compare against, in ms.
    #[serde(default)]
    pub reference_ms: Option<f64>,
    /// What `reference_ms` measures. Unset: the single-filter latency when
    /// `M = 1`, the steady-state per-filter latency otherwise.
    #[serde(default)]
    pub reference_kind: Option<ReferenceKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Latency of one filter launch set.
    SingleFilter,
    /// Steady-state latency per filter over a bank.
    PerFilter,
}

impl Candidate {
    pub fn new(plan: ExecutionPlan, f_max: f64) -> Self {
        Self { name: None, plan, f_max, reference_ms: None, reference_kind: None }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn reference(mut self, ms: f64, kind: ReferenceKind) -> Self {
        self.reference_ms = Some(ms);
        self.reference_kind = Some(kind);
        self
    }
}

/// A cost report next to the published figure it reproduces, if any.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedReport {
    pub name: String,
    pub report: CostReport,
    pub reference_ms: Option<f64>,
    pub reference_kind: Option<ReferenceKind>,
    /// Relative deviation of the model from `reference_ms`.
    pub deviation: Option<f64>,
}

/// Relative deviation above which a reference comparison is flagged.
pub const REFERENCE_TOLERANCE: f64 = 0.01;

impl RankedReport {
    /// The model value that corresponds to `reference_ms`.
    pub fn compared_ms(&self) -> f64 {
        let kind = self.reference_kind.unwrap_or(if self.report.problem.m == 1 {
            ReferenceKind::SingleFilter
        } else {
            ReferenceKind::PerFilter
        });
        match kind {
            ReferenceKind::SingleFilter => self.report.latency_single_ms,
            ReferenceKind::PerFilter => self.report.avg_latency_per_filter_ms,
        }
    }

    pub fn discrepancy(&self) -> bool {
        self.deviation.is_some_and(|d| d.abs() > REFERENCE_TOLERANCE)
    }
}

pub fn evaluate(candidate: &Candidate, device: &DeviceModel, problem: Problem) -> Result<RankedReport> {
    let report = theoretical_latency(&candidate.plan, device, candidate.f_max, problem)?;
    let name = candidate.name.clone().unwrap_or_else(|| report.label.clone());
    let mut ranked = RankedReport {
        name,
        report,
        reference_ms: candidate.reference_ms,
        reference_kind: candidate.reference_kind,
        deviation: None,
    };
    if let Some(reference) = candidate.reference_ms {
        ranked.deviation = Some(ranked.compared_ms() / reference - 1.0);
    }
    if ranked.discrepancy() {
        let note = format!(
            "model {:.2} ms vs reference {:.2} ms ({:+.1}%)",
            ranked.compared_ms(),
            candidate.reference_ms.unwrap_or_default(),
            100.0 * ranked.deviation.unwrap_or_default()
        );
        ranked.report.notes.push(note);
    }
    Ok(ranked)
}

/// Evaluates every candidate and ranks them: feasible plans first, then by
/// amortized per-filter latency (whole-bank latency over `M`), ties broken
/// by the smaller DSP share.
pub fn sweep(device: &DeviceModel, candidates: &[Candidate], problem: Problem) -> Result<Vec<RankedReport>> {
    if candidates.is_empty() {
        return Err(Error::invalid("no candidate plans to sweep"));
    }
    let mut reports = candidates.iter().map(|c| evaluate(c, device, problem)).collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| {
        let (ra, rb) = (&a.report, &b.report);
        rb.feasible
            .cmp(&ra.feasible)
            .then(ra.amortized_latency_per_filter_ms.total_cmp(&rb.amortized_latency_per_filter_ms))
            .then(ra.dsp_fraction.total_cmp(&rb.dsp_fraction))
    });
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sweep_is_an_error() {
        assert!(sweep(&DeviceModel::default(), &[], Problem { n: 1024, k: 10, m: 1 }).is_err());
    }

    #[test]
    fn single_candidate_passes_through() {
        let c = Candidate::new(ExecutionPlan::aols(1024, 8), 200.0);
        let out = sweep(&DeviceModel::default(), &[c], Problem { n: 1 << 20, k: 421, m: 1 }).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].report.feasible);
        assert_eq!(out[0].name, "AOLS-1024/pc8");
    }

    #[test]
    fn infeasible_sorted_last() {
        let fast_but_too_big = Candidate::new(ExecutionPlan::aols(1024, 8).with_power(2), 400.0);
        let slow = Candidate::new(ExecutionPlan::aols(1024, 8), 100.0);
        let out =
            sweep(&DeviceModel::default(), &[fast_but_too_big, slow], Problem { n: 1 << 20, k: 421, m: 8 }).unwrap();
        assert!(out[0].report.feasible);
        assert!(!out[1].report.feasible);
    }

    #[test]
    fn ties_prefer_smaller_footprint() {
        let tols = Candidate::new(ExecutionPlan::tols(1024, 8), 100.0).named("big");
        let mut narrow = tols.clone();
        narrow.name = Some("small".into());
        narrow.plan = ExecutionPlan::tols(1024, 4);
        narrow.f_max = 200.0;
        let out = sweep(&DeviceModel::default(), &[tols, narrow], Problem { n: 1 << 20, k: 421, m: 1 }).unwrap();
        assert_eq!(out[0].report.latency_ms, out[1].report.latency_ms);
        assert_eq!(out[0].name, "small");
    }

    #[test]
    fn reference_deviation() {
        let c = Candidate::new(ExecutionPlan::aols(2048, 8), 205.59).reference(6.41, ReferenceKind::SingleFilter);
        let r = evaluate(&c, &DeviceModel::default(), Problem { n: 1 << 22, k: 421, m: 1 }).unwrap();
        assert!(r.deviation.unwrap().abs() < 0.01);
        assert!(!r.discrepancy());
    }

    #[test]
    fn single_filter_reference_holds_in_a_bank() {
        let c = Candidate::new(ExecutionPlan::aols(2048, 8), 205.59).reference(6.41, ReferenceKind::SingleFilter);
        let r = evaluate(&c, &DeviceModel::default(), Problem { n: 1 << 22, k: 421, m: 84 }).unwrap();
        assert_eq!(r.compared_ms(), r.report.latency_single_ms);
        assert!(!r.discrepancy());

        let mut untyped = c;
        untyped.reference_kind = None;
        let r = evaluate(&untyped, &DeviceModel::default(), Problem { n: 1 << 22, k: 421, m: 84 }).unwrap();
        assert_eq!(r.compared_ms(), r.report.avg_latency_per_filter_ms);
    }
}
