use std::fmt::Write as _;

use timebin::compiler::{compile_prefixes, effective_unitary};
use timebin::sampling::{fidelity, output_distribution, Distribution, SamplingInstance};
use timebin::Error;

use super::{out_path, save_distribution, Globals, CLOSURE_TOL};
use crate::config::ExperimentConfig;
use crate::error::{exit, CliError, CliResult};
use crate::output::write_text;

pub const TRACKING_FILE: &str = "tracking.csv";

pub fn loop_file(k: usize) -> String {
    format!("loop_{k}.csv")
}

#[derive(Clone, Debug, clap::Args)]
pub struct TrackArgs {
    /// Last loop to evaluate; defaults to the schedule's loop count.
    #[arg(long)]
    pub max_loops: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopRow {
    pub loop_index: usize,
    pub closure_deviation: f64,
    /// `None` when the prefix leaks out of the mode subset.
    pub fidelity: Option<f64>,
}

/// Distribution after each of the first `max_loops` circulations and its
/// fidelity to the distribution of the complete schedule.
pub fn track_loops(cfg: &ExperimentConfig, max_loops: usize) -> CliResult<Vec<LoopRow>> {
    if max_loops == 0 || max_loops > cfg.loop_config.loops {
        return Err(CliError::config(format!(
            "max_loops must lie in 1..={}, got {max_loops}",
            cfg.loop_config.loops
        )));
    }
    let prefixes = compile_prefixes(&cfg.loop_config, &cfg.schedule)?;
    let distribution_at = |k: usize| -> timebin::Result<(f64, Distribution)> {
        let eff = effective_unitary(&prefixes[k], &cfg.subset, CLOSURE_TOL)?;
        let inst = SamplingInstance::new(&eff.unitary, cfg.input.clone())?;
        Ok((eff.deviation, output_distribution(&inst, &cfg.model)?))
    };
    let (_, reference) = distribution_at(cfg.loop_config.loops)?;
    let mut rows = Vec::with_capacity(max_loops);
    for k in 1..=max_loops {
        match distribution_at(k) {
            Ok((deviation, d)) => {
                save_distribution(&out_path(&cfg.out, &loop_file(k)), &d)?;
                rows.push(LoopRow { loop_index: k, closure_deviation: deviation, fidelity: Some(fidelity(&d, &reference)?) });
            }
            Err(Error::Leakage { deviation, .. }) => {
                rows.push(LoopRow { loop_index: k, closure_deviation: deviation, fidelity: None });
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut text = String::from("loop,status,closure_deviation,fidelity\n");
    for r in &rows {
        let (status, fid) = match r.fidelity {
            Some(f) => ("ok", f.to_string()),
            None => ("leakage", String::new()),
        };
        let _ = writeln!(text, "{},{status},{:e},{fid}", r.loop_index, r.closure_deviation);
    }
    write_text(&out_path(&cfg.out, TRACKING_FILE), &text)?;
    Ok(rows)
}

pub fn track(args: &TrackArgs, globals: &Globals) -> CliResult<i32> {
    let cfg = globals.load()?;
    let rows = track_loops(&cfg, args.max_loops.unwrap_or(cfg.loop_config.loops))?;
    for r in &rows {
        match r.fidelity {
            Some(f) => println!("loop={} fidelity={f:.6} closure_deviation={:e}", r.loop_index, r.closure_deviation),
            None => println!("loop={} leakage closure_deviation={:e}", r.loop_index, r.closure_deviation),
        }
    }
    Ok(exit::OK)
}
