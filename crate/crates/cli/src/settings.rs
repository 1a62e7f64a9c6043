use std::fs;

use ftconv::config::{BankSource, InputSource, RunConfig};
use ftconv::costmodel::DeviceModel;
use ftconv::{ExecutionPlan, PlanKind};

use crate::{CliError, CliResult, Command, Options};

/// A configuration file merged with the command-line overrides.
#[derive(Clone, Debug)]
pub struct Settings {
    pub config: RunConfig,
    /// Plans named with `--plan`, or the configured plan.
    pub plans: Vec<ExecutionPlan>,
    pub device: DeviceModel,
}

impl Settings {
    pub fn resolve(command: Command, opts: &Options) -> CliResult<Self> {
        let mut cfg = match &opts.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
                RunConfig::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };

        if let Some(seed) = opts.seed {
            cfg.seed = seed;
        }
        if let Some(w) = opts.workers {
            cfg.workers = w;
        }
        if let Some(r) = opts.reps {
            cfg.repetitions = r;
        }
        if opts.out.is_some() {
            cfg.out.clone_from(&opts.out);
        }
        if opts.csv.is_some() {
            cfg.csv.clone_from(&opts.csv);
        }
        if opts.device_model.is_some() {
            cfg.device_model.clone_from(&opts.device_model);
        }
        if opts.fmax.is_some() {
            cfg.f_max = opts.fmax;
        }
        cfg.verify |= opts.verify;

        match (opts.input, &opts.input_file) {
            (Some(_), Some(_)) => return Err(CliError::usage("give either --input or --input-file, not both")),
            (Some(n), None) => cfg.input = Some(InputSource::Generate { n }),
            (None, Some(path)) => cfg.input = Some(InputSource::File(path.clone())),
            (None, None) => {}
        }
        cfg.bank = merge_bank(cfg.bank.take(), opts)?;

        let device = match &cfg.device_model {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
                DeviceModel::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
            }
            None => DeviceModel::default(),
        };

        let base: Vec<ExecutionPlan> = if opts.plan.is_empty() {
            cfg.plan.iter().cloned().collect()
        } else {
            opts.plan
                .iter()
                .map(|s| s.parse::<PlanKind>().map(ExecutionPlan::new))
                .collect::<ftconv::Result<_>>()
                .map_err(|e| CliError::usage(e.to_string()))?
        };
        let mut plans: Vec<ExecutionPlan> = base.into_iter().map(|p| apply_plan_flags(p, opts, &device)).collect();
        if command == Command::Fop {
            for p in &mut plans {
                p.power_output = true;
            }
        }
        cfg.plan = plans.first().cloned();

        cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(Self { config: cfg, plans, device })
    }

    /// The single plan a run command executes.
    pub fn single_plan(&self) -> CliResult<ExecutionPlan> {
        match self.plans.as_slice() {
            [plan] => Ok(plan.clone()),
            [] => Err(CliError::usage("no plan given (use --plan)")),
            _ => Err(CliError::usage("this command runs exactly one plan")),
        }
    }
}

fn merge_bank(current: Option<BankSource>, opts: &Options) -> CliResult<Option<BankSource>> {
    if let Some(path) = &opts.bank_file {
        if opts.filters.is_some() {
            return Err(CliError::usage("--filters cannot be combined with --bank-file"));
        }
        let taps = opts
            .taps
            .or(current.as_ref().map(BankSource::taps))
            .ok_or_else(|| CliError::usage("--bank-file needs --taps"))?;
        return Ok(Some(BankSource::File { path: path.clone(), taps }));
    }
    if opts.filters.is_none() && opts.taps.is_none() {
        return Ok(current);
    }
    Ok(Some(match current {
        Some(BankSource::File { path, taps }) => {
            if opts.filters.is_some() {
                return Err(CliError::usage("--filters cannot be combined with a bank file"));
            }
            BankSource::File { path, taps: opts.taps.unwrap_or(taps) }
        }
        Some(BankSource::Generate { filters, taps, seed }) => {
            BankSource::Generate { filters: opts.filters.unwrap_or(filters), taps: opts.taps.unwrap_or(taps), seed }
        }
        None => BankSource::Generate {
            filters: opts.filters.unwrap_or(1),
            taps: opts.taps.ok_or_else(|| CliError::usage("--filters needs --taps"))?,
            seed: None,
        },
    }))
}

fn apply_plan_flags(mut plan: ExecutionPlan, opts: &Options, device: &DeviceModel) -> ExecutionPlan {
    if opts.nft.is_some() {
        plan.n_ft = opts.nft;
    }
    if let Some(pc) = opts.pc {
        plan.points_per_cycle = pc;
    }
    if opts.kprime.is_some() {
        plan.sub_filter_len = opts.kprime;
    }
    if plan.kind.is_time_domain() && plan.sub_filter_len.is_none() {
        plan.sub_filter_len = Some(device.parallel_taps());
    }
    if let Some(r) = opts.replicas {
        plan.replicas = r;
    }
    if let Some(d) = opts.devices {
        plan.devices = d;
    }
    plan.power_output |= opts.power;
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn resolve(args: &[&str]) -> CliResult<Settings> {
        let cli = crate::Cli::try_parse_from(std::iter::once("ftconv").chain(args.iter().copied())).unwrap();
        Settings::resolve(cli.command, &cli.opts)
    }

    #[test]
    fn flags_build_plans() {
        let s =
            resolve(&["bench", "--plan", "aols,tols", "--nft", "2048", "--pc", "4", "--taps", "100", "--filters", "3"])
                .unwrap();
        assert_eq!(s.plans.len(), 2);
        assert!(s.plans.iter().all(|p| p.n_ft == Some(2048) && p.points_per_cycle == 4));
        assert_eq!(s.config.bank, Some(BankSource::Generate { filters: 3, taps: 100, seed: None }));
    }

    #[test]
    fn time_domain_plans_default_to_device_parallel_taps() {
        let s = resolve(&["cost", "--plan", "ola"]).unwrap();
        assert_eq!(s.plans[0].sub_filter_len, Some(64));
    }

    #[test]
    fn conflicting_sources_are_usage_errors() {
        let e = resolve(&["conv", "--input", "8", "--input-file", "x.cf32"]).unwrap_err();
        assert_eq!(e.code, crate::EXIT_USAGE);
        assert!(resolve(&["conv", "--bank-file", "b.cf32"]).is_err());
        assert!(resolve(&["conv", "--bank-file", "b.cf32", "--taps", "4", "--filters", "2"]).is_err());
        assert!(resolve(&["conv", "--plan", "quantum"]).is_err());
        assert!(resolve(&["conv", "--workers", "0"]).is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(
            &path,
            r#"{"seed": 3, "input": {"generate": {"n": 64}}, "bank": {"generate": {"filters": 2, "taps": 5}},
                "plan": {"kind": "tols", "n_ft": 32}}"#,
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let s = resolve(&["verify", "--config", p, "--seed", "9", "--filters", "4", "--nft", "64"]).unwrap();
        assert_eq!(s.config.seed, 9);
        assert_eq!(s.config.bank, Some(BankSource::Generate { filters: 4, taps: 5, seed: None }));
        assert_eq!(s.plans[0].kind, PlanKind::Tols);
        assert_eq!(s.plans[0].n_ft, Some(64));
        assert_eq!(s.config.input, Some(InputSource::Generate { n: 64 }));
    }

    #[test]
    fn fop_implies_power_output() {
        let s = resolve(&["fop", "--plan", "aols", "--nft", "1024", "--pc", "4", "--replicas", "3"]).unwrap();
        assert!(s.plans[0].power_output);
        assert!(resolve(&["conv", "--plan", "aols", "--nft", "1024", "--replicas", "3"]).is_err());
    }

    #[test]
    fn missing_config_file_is_io_error() {
        let e = resolve(&["verify", "--config", "/nonexistent/run.json"]).unwrap_err();
        assert_eq!(e.code, crate::EXIT_IO);
    }
}
