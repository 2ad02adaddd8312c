use std::path::PathBuf;

use timebin::compiler::{example_schedule, ScheduleFile};

use super::Globals;
use crate::config::{ExperimentFile, DEFAULT_EVENTS, DEFAULT_SEED};
use crate::error::{exit, CliError, CliResult};
use crate::output::write_text;

pub const SCHEDULE_FILE: &str = "schedule.json";
pub const CONFIG_FILE: &str = "config.json";

#[derive(Clone, Debug, clap::Args)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = 3)]
    pub photons: usize,
    #[arg(long, default_value_t = 6)]
    pub modes: usize,
    /// Seed for the random pulse angles.
    #[arg(long, default_value_t = 1)]
    pub circuit_seed: u64,
}

/// Writes a fully connected example schedule plus a config pointing at it.
pub fn example(args: &ExampleArgs, globals: &Globals) -> CliResult<i32> {
    let circuit = example_schedule(args.photons, args.modes, args.circuit_seed)?;
    let dir = globals.out_dir();
    write_text(&dir.join(SCHEDULE_FILE), &ScheduleFile::from_circuit(&circuit).to_json())?;
    let file = ExperimentFile {
        schedule: PathBuf::from(SCHEDULE_FILE),
        input: Some(circuit.input().to_string()),
        model: globals.model,
        gram: globals.gram.clone().map(crate::config::GramSource::File),
        seed: Some(globals.seed.unwrap_or(DEFAULT_SEED)),
        events: Some(globals.events.unwrap_or(DEFAULT_EVENTS)),
        out: Some(PathBuf::from("run")),
        bayes_alternative: None,
        bayes_threshold: None,
    };
    let mut json = serde_json::to_string_pretty(&file).map_err(|e| CliError::config(e.to_string()))?;
    json.push('\n');
    write_text(&dir.join(CONFIG_FILE), &json)?;
    println!("wrote {} and {} to {}", SCHEDULE_FILE, CONFIG_FILE, dir.display());
    Ok(exit::OK)
}
