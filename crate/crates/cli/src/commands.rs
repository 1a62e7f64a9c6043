use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use rayon::prelude::*;

use ftconv::config::{BankSource, InputSource};
use ftconv::costmodel::{
    bank_flops, evaluate, presets, required_performance, sweep, workload_flops, Candidate, Problem, RankedReport,
    WorkloadParams,
};
use ftconv::fdfir::{run_plan, PlanOutput, PlanRun};
use ftconv::oracle::{conv_oracle, widen};
use ftconv::rng::generate_signal;
use ftconv::{formats, rrmse, Complex32, Complex64, ExecutionPlan, FilterBank, PlanKind, SingleBuffer};

use crate::report::{self, BenchReport, CostRow, DOMAIN_NOTE};
use crate::{CliError, CliResult, Command, Options, Preset, Settings, EXIT_VERIFY};

/// rRMSE at or above which verification fails.
pub const VERIFY_THRESHOLD: f64 = 1e-5;

pub fn dispatch<W: Write>(command: Command, opts: &Options, s: &Settings, out: &mut W) -> CliResult<()> {
    match command {
        Command::Gen => gen(opts, s, out),
        Command::Conv => conv(s, out),
        Command::Fop => fop(s, out),
        Command::Verify => verify(s, out),
        Command::Bench => bench(opts, s, out),
        Command::Cost => cost(opts, s, out, false),
        Command::Sweep => cost(opts, s, out, true),
    }
}

fn gen<W: Write>(opts: &Options, s: &Settings, out: &mut W) -> CliResult<()> {
    let path = s.config.out.as_ref().ok_or_else(|| CliError::usage("gen needs --out"))?;
    let wants_bank = opts.filters.is_some() || opts.taps.is_some();
    if wants_bank && opts.input.is_some() {
        return Err(CliError::usage("gen writes one file: give --input N or --filters M --taps K"));
    }
    if wants_bank {
        let bank = s.config.load_bank()?;
        formats::write_bank(path, &bank)?;
        writeln!(out, "wrote {} templates of {} taps to {}", bank.len(), bank.max_taps(), path.display())?;
    } else {
        let n = match s.config.input {
            Some(InputSource::Generate { n }) => n,
            _ => return Err(CliError::usage("gen needs --input N or --filters M --taps K")),
        };
        let x = generate_signal(s.config.seed, n)?;
        formats::write_cf32(path, &x)?;
        writeln!(out, "wrote {n} samples (seed {}) to {}", s.config.seed, path.display())?;
    }
    Ok(())
}

fn load_data(s: &Settings) -> CliResult<(SingleBuffer, FilterBank)> {
    let x = s.config.load_input().map_err(with_context("input"))?;
    let bank = s.config.load_bank().map_err(with_context("filter bank"))?;
    Ok((x, bank))
}

fn with_context(what: &'static str) -> impl Fn(ftconv::Error) -> CliError {
    move |e| {
        let mut err = CliError::from(e);
        err.message = format!("{what}: {}", err.message);
        err
    }
}

fn conv<W: Write>(s: &Settings, out: &mut W) -> CliResult<()> {
    let plan = s.single_plan()?;
    if plan.power_output {
        return Err(CliError::usage("conv writes complex outputs; use fop for power planes"));
    }
    let (x, bank) = load_data(s)?;
    let run = run_plan(&x, &bank, &plan)?;
    let filtered = run.filtered().ok_or_else(|| CliError::usage("plan produced no complex outputs"))?;
    if let Some(path) = &s.config.out {
        let flat: Vec<Complex32> = filtered.iter().flatten().copied().collect();
        formats::write_cf32(path, &flat)?;
    }
    writeln!(out, "{}: {} filters x {} samples, {} launches", plan.label(), filtered.len(), x.len(), run.log.launches)?;
    Ok(())
}

fn fop<W: Write>(s: &Settings, out: &mut W) -> CliResult<()> {
    let plan = s.single_plan()?;
    let (x, bank) = load_data(s)?;
    let run = run_plan(&x, &bank, &plan)?;
    let plane = run.plane().ok_or_else(|| CliError::usage("plan produced no power plane"))?;
    if let Some(path) = &s.config.out {
        formats::write_fop(path, plane)?;
    }
    if let Some(path) = &s.config.csv {
        let file = File::create(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        formats::write_fop_csv(plane, BufWriter::new(file))?;
    }
    writeln!(
        out,
        "{}: plane of {} rows x {} columns, {} launches",
        plan.label(),
        plane.n_rows(),
        plane.n_cols(),
        run.log.launches
    )?;
    Ok(())
}

/// rRMSE of every filter output against the double-precision oracle.
/// Power planes are compared against the oracle's squared magnitude.
pub fn verify_run(x: &[Complex32], bank: &FilterBank, run: &PlanRun) -> CliResult<Vec<f64>> {
    let xw = widen(x);
    let errors = bank
        .templates()
        .par_iter()
        .enumerate()
        .map(|(i, h)| {
            let reference = conv_oracle(&xw, &widen(h))?;
            let report = match &run.output {
                PlanOutput::Filtered(rows) => rrmse(&rows[i], &reference)?,
                PlanOutput::Plane(plane) => {
                    let power: Vec<f64> = reference.iter().map(Complex64::norm_sqr).collect();
                    rrmse(plane.row(i + 1).unwrap_or_default(), &power)?
                }
            };
            Ok(report.rrmse)
        })
        .collect::<ftconv::Result<Vec<_>>>()?;
    Ok(errors)
}

fn verify<W: Write>(s: &Settings, out: &mut W) -> CliResult<()> {
    let plan = s.single_plan()?;
    let (x, bank) = load_data(s)?;
    let start = Instant::now();
    let run = run_plan(&x, &bank, &plan)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let errors = verify_run(&x, &bank, &run)?;
    let report = BenchReport::new(
        &plan,
        (x.len(), bank.max_taps(), bank.len()),
        &s.config,
        vec![elapsed_ms],
        flops_for(&plan, x.len(), bank.max_taps(), bank.len())?,
        run.log.launches,
        errors.clone(),
    );
    writeln!(out, "{} on N={} K={} M={} (seed {})", plan.label(), x.len(), bank.max_taps(), bank.len(), s.config.seed)?;
    for (i, e) in errors.iter().enumerate() {
        writeln!(out, "filter {:>3}: rrmse {e:.3e}", i + 1)?;
    }
    let worst = report.rrmse.unwrap_or(0.0);
    let failed: Vec<usize> =
        errors.iter().enumerate().filter(|(_, e)| e.is_nan() || **e >= VERIFY_THRESHOLD).map(|(i, _)| i + 1).collect();
    writeln!(
        out,
        "max rrmse {worst:.3e} (threshold {VERIFY_THRESHOLD:.0e}): {}",
        if failed.is_empty() { "PASS" } else { "FAIL" }
    )?;
    if let Some(path) = &s.config.out {
        report::write_json(path, &report)?;
    }
    if let Some(path) = &s.config.csv {
        report::write_csv(path, &[report.row()])?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError { code: EXIT_VERIFY, message: format!("rrmse above threshold for filters {failed:?}") })
    }
}

fn flops_for(plan: &ExecutionPlan, n: usize, k: usize, m: usize) -> CliResult<f64> {
    let mut p = WorkloadParams::new(n, k, m);
    p.k_prime = plan.sub_filter_len;
    p.n_ft = plan.n_ft;
    Ok(bank_flops(plan.kind, &p)?)
}

/// Median-of-`reps` benchmark of one plan after one warm-up run.
pub fn bench_point(
    x: &[Complex32],
    bank: &FilterBank,
    plan: &ExecutionPlan,
    s: &Settings,
    verify: bool,
) -> CliResult<BenchReport> {
    let warm = run_plan(x, bank, plan)?;
    let mut latencies = Vec::with_capacity(s.config.repetitions);
    for _ in 0..s.config.repetitions {
        let start = Instant::now();
        let run = run_plan(x, bank, plan)?;
        latencies.push(start.elapsed().as_secs_f64() * 1e3);
        drop(run);
    }
    let errors = if verify { verify_run(x, bank, &warm)? } else { Vec::new() };
    let (n, k, m) = (x.len(), bank.max_taps(), bank.len());
    Ok(BenchReport::new(plan, (n, k, m), &s.config, latencies, flops_for(plan, n, k, m)?, warm.log.launches, errors))
}

fn bench<W: Write>(opts: &Options, s: &Settings, out: &mut W) -> CliResult<()> {
    if s.plans.is_empty() {
        return Err(CliError::usage("no plan given (use --plan)"));
    }
    let (x, bank) = load_data(s)?;
    let sizes: Vec<usize> = if opts.sweep_m { (1..=bank.len()).collect() } else { vec![bank.len()] };
    let mut reports = Vec::new();
    for plan in &s.plans {
        for &m in &sizes {
            let sub = FilterBank::new(bank.templates()[..m].to_vec())?;
            reports.push(bench_point(&x, &sub, plan, s, s.config.verify)?);
        }
    }
    writeln!(out, "seed {}; {}", s.config.seed, report::environment_note(s.config.workers))?;
    report::print_bench_table(out, &reports)?;
    let mixed = reports.iter().any(|r| r.kind.is_time_domain()) && reports.iter().any(|r| !r.kind.is_time_domain());
    if mixed {
        writeln!(out, "note: {DOMAIN_NOTE}")?;
    }
    if let Some(path) = &s.config.csv {
        let rows: Vec<_> = reports.iter().map(BenchReport::row).collect();
        report::write_csv(path, &rows)?;
    }
    if let Some(path) = &s.config.out {
        report::write_json(path, &reports)?;
    }
    Ok(())
}

fn candidates(opts: &Options, s: &Settings, ranking: bool) -> CliResult<Vec<Candidate>> {
    let named = !opts.plan.is_empty() || (s.config.candidates.is_empty() && !s.plans.is_empty());
    let mut list = if named {
        let f_max = s.config.f_max.ok_or_else(|| CliError::usage("cost of a named plan needs --fmax <MHz>"))?;
        s.plans.iter().map(|p| Candidate::new(p.clone(), f_max)).collect()
    } else if !s.config.candidates.is_empty() {
        s.config.candidates.clone()
    } else {
        match opts.preset {
            Some(Preset::Table3) => presets::single_filter_kernels(),
            Some(Preset::Table4) => presets::power_kernels(),
            None if ranking => {
                let mut all = presets::single_filter_kernels();
                all.extend(presets::power_kernels());
                all
            }
            None => presets::single_filter_kernels(),
        }
    };
    if !named {
        if let Some(f) = opts.fmax {
            for c in &mut list {
                c.f_max = f;
                c.reference_ms = None;
                c.reference_kind = None;
            }
        }
    }
    Ok(list)
}

fn problem(opts: &Options, s: &Settings, ranking: bool) -> Problem {
    let n = match s.config.input {
        Some(InputSource::Generate { n }) => n,
        _ => presets::TASK_INPUT_LEN,
    };
    let k = s.config.bank.as_ref().map(BankSource::taps).unwrap_or(presets::TASK_TAPS);
    let default_m = if ranking || opts.preset == Some(Preset::Table4) { presets::TASK_FILTERS } else { 1 };
    let m = match s.config.bank {
        Some(BankSource::Generate { filters, .. }) => filters,
        _ => default_m,
    };
    Problem { n, k, m }
}

fn cost<W: Write>(opts: &Options, s: &Settings, out: &mut W, ranking: bool) -> CliResult<()> {
    let list = candidates(opts, s, ranking)?;
    let problem = problem(opts, s, ranking);
    let reports: Vec<RankedReport> = if ranking {
        sweep(&s.device, &list, problem)?
    } else {
        list.iter().map(|c| evaluate(c, &s.device, problem)).collect::<ftconv::Result<_>>()?
    };
    let rows: Vec<CostRow> = reports.iter().enumerate().map(|(i, r)| CostRow::new(i + 1, r)).collect();

    writeln!(
        out,
        "device {}: {} DSP blocks; N={} K={} M={}",
        s.device.name, s.device.n_dsp, problem.n, problem.k, problem.m
    )?;
    report::print_cost_table(out, &rows)?;
    if !ranking {
        print_workloads(out, s, problem)?;
        let m_req = match s.config.bank {
            Some(BankSource::Generate { filters, .. }) => filters,
            _ => presets::TASK_FILTERS,
        };
        let t_limit = opts.time_limit.unwrap_or(presets::TASK_TIME_LIMIT_S);
        let req = required_performance(problem.n, problem.k, m_req, t_limit)?;
        writeln!(
            out,
            "required performance (8NKM / t_limit, M={m_req}, t_limit={t_limit} s): {:.2} TFLOPS",
            req / 1e12
        )?;
    }
    if let Some(path) = &s.config.csv {
        report::write_csv(path, &rows)?;
    }
    if let Some(path) = &s.config.out {
        report::write_json(path, &reports)?;
    }
    Ok(())
}

fn print_workloads<W: Write>(out: &mut W, s: &Settings, problem: Problem) -> CliResult<()> {
    let Problem { n, k, m } = problem;
    writeln!(out, "workload per filter (ops), N={n} K={k}:")?;
    writeln!(out, "{:<16} {:>18} {:>18}", "algorithm", "single filter", "average (M filters)")?;
    let k_prime = s.device.parallel_taps();
    let mut rows: Vec<(String, PlanKind, WorkloadParams)> = vec![
        ("TD-Naive".into(), PlanKind::NaiveTd, WorkloadParams::new(n, k, m)),
        (format!("OLA-{k_prime}"), PlanKind::OlaTd, WorkloadParams::new(n, k, m).with_k_prime(k_prime)),
        ("FD-Naive".into(), PlanKind::NaiveFd, WorkloadParams::new(n, k, m)),
    ];
    for n_ft in [1024, 2048, 4096] {
        if n_ft > k {
            rows.push((format!("OLS-{n_ft}"), PlanKind::Aols, WorkloadParams::new(n, k, m).with_n_ft(n_ft)));
        }
    }
    for (name, kind, p) in rows {
        let w = workload_flops(kind, &p)?;
        writeln!(out, "{name:<16} {:>18.6e} {:>18.6e}", w.single_filter, w.avg_per_filter)?;
    }
    Ok(())
}
