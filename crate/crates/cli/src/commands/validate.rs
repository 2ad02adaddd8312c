use std::path::PathBuf;
use std::str::FromStr;

use timebin::sampling::{output_distribution, read_event_log, Distribution, EventLog, Model, SamplingInstance};
use timebin::validation::{
    aa_counter, bayes_confidence, lr_counter, make_alternative, AlternativeKind, CounterTrajectory, GaussianParams,
    HypothesisPair, TestKind, DEFAULT_BAYES_THRESHOLD,
};

use super::inspect::{resolve_instance, InstanceArgs};
use super::{out_path, save_trajectory, trajectory_file, Globals, EVENTS_FILE};
use crate::error::{exit, CliResult};

#[derive(Clone, Debug, clap::Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Event log CSV; defaults to events.csv in the output directory.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long, value_parser = TestKind::from_str)]
    pub test: TestKind,
    /// Alternative hypothesis for the Bayesian test.
    #[arg(long, value_parser = AlternativeKind::from_str, default_value = "uniform")]
    pub alternative: AlternativeKind,
    /// Confidence required for a Bayesian PASS.
    #[arg(long, default_value_t = DEFAULT_BAYES_THRESHOLD)]
    pub threshold: f64,
}

/// Writes `trajectory_<test>.csv` and prints the verdict; exit 2 on FAIL.
pub fn validate(args: &ValidateArgs, globals: &Globals) -> CliResult<i32> {
    let r = resolve_instance(&args.instance, globals)?;
    let log_path = args.log.clone().unwrap_or_else(|| out_path(&r.out, EVENTS_FILE));
    let log = read_event_log(std::fs::File::open(&log_path)?)?;
    let mut main = None;
    let t = trajectory(args.test, &r.instance, &r.model, &mut main, &log, args.alternative)?;
    save_trajectory(&out_path(&r.out, &trajectory_file(args.test)), &t)?;
    println!("{}", t.verdict(args.threshold));
    Ok(if t.passes(args.threshold) { exit::OK } else { exit::VALIDATION_NEGATIVE })
}

/// Runs one validator. `main` caches the model distribution between calls.
pub(crate) fn trajectory(
    test: TestKind,
    inst: &SamplingInstance,
    model: &Model,
    main: &mut Option<Distribution>,
    log: &EventLog,
    alternative: AlternativeKind,
) -> CliResult<CounterTrajectory> {
    let t = match test {
        TestKind::Aa => aa_counter(inst.matrix(), inst.input(), log)?,
        TestKind::Bayes => {
            let main = cached(main, inst, model)?;
            let alt = make_alternative(alternative, inst, GaussianParams::default())?;
            bayes_confidence(log, &HypothesisPair::new(main.clone(), alt)?)?
        }
        TestKind::Lr => {
            let p_ind = match model {
                Model::Indistinguishable => cached(main, inst, model)?.clone(),
                _ => output_distribution(inst, &Model::Indistinguishable)?,
            };
            let p_dist = output_distribution(inst, &Model::Distinguishable)?;
            lr_counter(log, &p_ind, &p_dist)?
        }
    };
    Ok(t)
}

fn cached<'a>(slot: &'a mut Option<Distribution>, inst: &SamplingInstance, model: &Model) -> CliResult<&'a Distribution> {
    if slot.is_none() {
        *slot = Some(output_distribution(inst, model)?);
    }
    Ok(slot.as_ref().expect("filled above"))
}
