//! End-to-end checks across modules: every plan against the oracle, the
//! launch accounting, the output plane, and the workload model against
//! instrumented execution.

use ftconv::costmodel::{launch_count, workload_flops, WorkloadParams};
use ftconv::fdfir::opcount::{count_naive_td, count_ols};
use ftconv::fdfir::{run_plan, Ordering, PlanOutput};
use ftconv::oracle::{conv_oracle, widen};
use ftconv::rng::{generate_bank, generate_signal};
use ftconv::{rrmse, Complex32, ExecutionPlan, FilterBank, PlanKind};
use proptest::prelude::*;

fn all_plans(taps: usize) -> Vec<ExecutionPlan> {
    let n_ft = (2 * taps).next_power_of_two().max(16);
    vec![
        ExecutionPlan::naive_td(),
        ExecutionPlan::ola_td(7),
        ExecutionPlan::naive_fd(),
        ExecutionPlan::aols(n_ft, 8),
        ExecutionPlan::aols(2 * n_ft, 4),
        ExecutionPlan::tols(n_ft, 4),
        ExecutionPlan::tols(2 * n_ft, 8),
    ]
}

fn filtered(run: &ftconv::fdfir::PlanRun) -> &[Vec<Complex32>] {
    run.filtered().expect("complex output")
}

#[test]
fn every_plan_matches_the_oracle() {
    let x = generate_signal(1, 3000).unwrap();
    let bank = generate_bank(2, 3, 50).unwrap();
    for plan in all_plans(50) {
        let run = run_plan(&x, &bank, &plan).unwrap();
        for (y, h) in filtered(&run).iter().zip(bank.templates()) {
            let reference = conv_oracle(&widen(&x), &widen(h)).unwrap();
            let e = rrmse(y, &reference).unwrap().rrmse;
            assert!(e < 1e-6, "{}: {e}", plan.label());
        }
    }
}

#[test]
fn spectrum_ordering_is_bit_neutral() {
    let x = generate_signal(3, 5000).unwrap();
    let bank = generate_bank(4, 4, 200).unwrap();
    for kind in [PlanKind::Aols, PlanKind::Tols] {
        for pc in [4, 8] {
            let base = ExecutionPlan::new(kind);
            let base = ExecutionPlan { n_ft: Some(1024), points_per_cycle: pc, ..base };
            let natural = run_plan(&x, &bank, &base.clone().with_spectrum_order(Ordering::Natural)).unwrap();
            let reversed = run_plan(&x, &bank, &base.with_spectrum_order(Ordering::BitReversed)).unwrap();
            assert_eq!(natural.output, reversed.output, "{kind} pc{pc}");
        }
    }
}

#[test]
fn mixed_length_bank() {
    let x = generate_signal(5, 2048).unwrap();
    let short = generate_bank(6, 1, 17).unwrap().templates()[0].clone();
    let long = generate_bank(7, 1, 300).unwrap().templates()[0].clone();
    let bank = FilterBank::new(vec![short, long]).unwrap();
    for plan in [ExecutionPlan::aols(1024, 8), ExecutionPlan::tols(512, 4), ExecutionPlan::ola_td(64)] {
        let run = run_plan(&x, &bank, &plan).unwrap();
        for (y, h) in filtered(&run).iter().zip(bank.templates()) {
            let reference = conv_oracle(&widen(&x), &widen(h)).unwrap();
            assert!(rrmse(y, &reference).unwrap().rrmse < 1e-6, "{}", plan.label());
        }
    }
}

#[test]
fn launch_log_matches_launch_table() {
    let x = generate_signal(8, 700).unwrap();
    for m in [1, 2, 5, 12] {
        let bank = generate_bank(9, m, 130).unwrap();
        for (plan, r) in [
            (ExecutionPlan::naive_td().with_sub_filter_len(32), 5),
            (ExecutionPlan::ola_td(32), 5),
            (ExecutionPlan::naive_fd(), 1),
            (ExecutionPlan::aols(256, 8), 1),
            (ExecutionPlan::tols(256, 8), 1),
        ] {
            let run = run_plan(&x, &bank, &plan).unwrap();
            assert_eq!(run.log.launches, launch_count(plan.kind, r, m, 1).unwrap(), "{} M={m}", plan.label());
        }
        let replicated = ExecutionPlan::aols(256, 4).with_power(3);
        let run = run_plan(&x, &bank, &replicated).unwrap();
        assert_eq!(run.log.launches, launch_count(PlanKind::Aols, 1, m, 3).unwrap());
    }
}

#[test]
fn output_plane_layout() {
    let x = generate_signal(10, 4096).unwrap();
    let bank = generate_bank(11, 6, 421).unwrap();
    let plan = ExecutionPlan::aols(2048, 4).with_power(3);
    let run = run_plan(&x, &bank, &plan).unwrap();
    let PlanOutput::Plane(plane) = &run.output else { panic!("power plan yields a plane") };
    assert_eq!((plane.n_rows(), plane.n_cols()), (7, 4096));
    let input_power: Vec<f32> = x.iter().map(|c| c.norm_sqr()).collect();
    assert_eq!(plane.row(0).unwrap(), &input_power[..]);
    let complex = run_plan(&x, &bank, &ExecutionPlan::aols(2048, 4)).unwrap();
    for (r, y) in filtered(&complex).iter().enumerate() {
        let power: Vec<f32> = y.iter().map(|c| c.norm_sqr()).collect();
        assert_eq!(plane.row(r + 1).unwrap(), &power[..]);
    }
}

#[test]
fn instrumented_counts_match_the_workload_model() {
    let x = generate_signal(12, 64).unwrap();
    let h = generate_bank(13, 1, 8).unwrap().templates()[0].clone();
    let params = WorkloadParams::new(64, 8, 1).with_n_ft(16);

    // Chunking of the model: ceil(N / (N_FT - K)) = 8 chunks of 16 points.
    let (y, tally) = count_ols(&x, &h, 16).unwrap();
    let model = workload_flops(PlanKind::Aols, &params).unwrap().single_filter;
    assert_eq!(tally.flops() as f64, model);
    let reference = conv_oracle(&widen(&x), &widen(&h)).unwrap();
    assert!(rrmse(&y, &reference).unwrap().rrmse < 1e-6);

    let (_, td) = count_naive_td(&x, &h).unwrap();
    assert_eq!(td.flops() as f64, workload_flops(PlanKind::NaiveTd, &params).unwrap().single_filter);
}

#[test]
fn frequency_domain_beats_time_domain_in_a_bank() {
    let n = 1 << 22;
    let ola = workload_flops(PlanKind::OlaTd, &WorkloadParams::new(n, 421, 2).with_k_prime(64)).unwrap();
    for n_ft in [1024, 2048, 4096] {
        let ols = workload_flops(PlanKind::Aols, &WorkloadParams::new(n, 421, 2).with_n_ft(n_ft)).unwrap();
        assert!(ols.avg_per_filter < ola.avg_per_filter, "{n_ft}");
    }
}

#[test]
fn ols_workload_falls_with_transform_length() {
    let mut last = f64::INFINITY;
    for n_ft in [512, 1024, 2048, 4096] {
        let w = workload_flops(PlanKind::Tols, &WorkloadParams::new(1 << 22, 421, 1).with_n_ft(n_ft)).unwrap();
        assert!(w.single_filter <= last, "{n_ft}");
        last = w.single_filter;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plans_agree_with_each_other(seed in any::<u64>(), n in 1usize..1500, taps in 1usize..120, m in 1usize..4) {
        let x = generate_signal(seed, n).unwrap();
        let bank = generate_bank(seed ^ 0x5a5a, m, taps).unwrap();
        let reference = run_plan(&x, &bank, &ExecutionPlan::naive_td()).unwrap();
        for plan in all_plans(taps) {
            let run = run_plan(&x, &bank, &plan).unwrap();
            for (a, b) in filtered(&run).iter().zip(filtered(&reference)) {
                prop_assert!(rrmse(a, b).unwrap().rrmse < 1e-5, "{}", plan.label());
            }
        }
    }

    #[test]
    fn pool_size_does_not_change_output(seed in any::<u64>(), m in 1usize..6) {
        let x = generate_signal(seed, 2000).unwrap();
        let bank = generate_bank(seed.wrapping_add(1), m, 100).unwrap();
        let plan = ExecutionPlan::aols(512, 8);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_plan(&x, &bank, &plan)).unwrap();
        let b = four.install(|| run_plan(&x, &bank, &plan)).unwrap();
        prop_assert_eq!(a.output, b.output);
    }
}
