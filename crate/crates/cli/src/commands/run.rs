use std::fmt::Write as _;

use timebin::sampling::{draw_events, fidelity, output_distribution, total_variation, Distribution, SamplingInstance};
use timebin::validation::TestKind;

use super::validate::trajectory;
use super::{
    compile_effective, out_path, save_distribution, save_events, save_matrix, save_trajectory, trajectory_file, Globals,
    DISTRIBUTION_FILE, EVENTS_FILE, SUMMARY_FILE, UNITARY_FILE,
};
use crate::config::ExperimentConfig;
use crate::error::{exit, CliResult};
use crate::output::write_text;

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub test: TestKind,
    pub passed: bool,
    pub line: String,
}

/// Outcome of a full run; also rendered into `summary.txt`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub events: usize,
    pub closure_deviation: f64,
    /// Empirical frequencies against the model distribution; `None` without events.
    pub fidelity: Option<f64>,
    pub total_variation: Option<f64>,
    /// Empty when validators were skipped.
    pub verdicts: Vec<Verdict>,
}

impl RunSummary {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Compile, compute the distribution, draw events, validate and write every
/// artifact to `cfg.out`.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<RunSummary> {
    let eff = compile_effective(cfg)?;
    let inst = SamplingInstance::new(&eff.unitary, cfg.input.clone())?;
    let dist = output_distribution(&inst, &cfg.model)?;
    let log = draw_events(&dist, cfg.events, cfg.seed);

    save_matrix(&out_path(&cfg.out, UNITARY_FILE), eff.unitary.as_matrix())?;
    save_distribution(&out_path(&cfg.out, DISTRIBUTION_FILE), &dist)?;
    save_events(&out_path(&cfg.out, EVENTS_FILE), &log)?;

    let mut summary = RunSummary {
        seed: cfg.seed,
        events: log.len(),
        closure_deviation: eff.deviation,
        fidelity: None,
        total_variation: None,
        verdicts: Vec::new(),
    };
    if !log.is_empty() {
        let empirical = Distribution::empirical(&dist, &log)?;
        summary.fidelity = Some(fidelity(&empirical, &dist)?);
        summary.total_variation = Some(total_variation(&empirical, &dist)?);
        let mut main = Some(dist);
        for test in [TestKind::Aa, TestKind::Bayes, TestKind::Lr] {
            let t = trajectory(test, &inst, &cfg.model, &mut main, &log, cfg.bayes_alternative)?;
            save_trajectory(&out_path(&cfg.out, &trajectory_file(test)), &t)?;
            summary.verdicts.push(Verdict {
                test,
                passed: t.passes(cfg.bayes_threshold),
                line: t.verdict(cfg.bayes_threshold),
            });
        }
    }
    write_text(&out_path(&cfg.out, SUMMARY_FILE), &render(cfg, &summary))?;
    Ok(summary)
}

fn render(cfg: &ExperimentConfig, s: &RunSummary) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "seed={}", s.seed);
    let _ = writeln!(text, "model={}", cfg.model_tag.as_str());
    let _ = writeln!(text, "input={}", cfg.input);
    let _ = writeln!(text, "events={}", s.events);
    let _ = writeln!(text, "closure_deviation={:e}", s.closure_deviation);
    match (s.fidelity, s.total_variation) {
        (Some(f), Some(tv)) => {
            let _ = writeln!(text, "fidelity={f}");
            let _ = writeln!(text, "total_variation={tv}");
        }
        _ => {
            let _ = writeln!(text, "fidelity=n/a");
            let _ = writeln!(text, "validators skipped: no events");
        }
    }
    if !s.verdicts.is_empty() {
        let _ = writeln!(text, "bayes_alternative={}", cfg.bayes_alternative);
    }
    for v in &s.verdicts {
        let _ = writeln!(text, "{}", v.line);
    }
    text
}

pub fn run(globals: &Globals) -> CliResult<i32> {
    let cfg = globals.load()?;
    let summary = run_experiment(&cfg)?;
    print!("{}", render(&cfg, &summary));
    Ok(if summary.all_pass() { exit::OK } else { exit::VALIDATION_NEGATIVE })
}
