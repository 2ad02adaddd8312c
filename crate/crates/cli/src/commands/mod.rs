pub mod compile;
pub mod example;
pub mod inspect;
pub mod rate;
pub mod run;
pub mod track;
pub mod validate;

use std::path::{Path, PathBuf};

use timebin::compiler::{compile_network, effective_unitary, EffectiveUnitary, EXAMPLE_CLOSURE_TOL};
use timebin::linalg::MatrixFile;
use timebin::sampling::{write_distribution, write_event_log, Distribution, EventLog};
use timebin::validation::CounterTrajectory;
use timebin::{ComplexMatrix, UnitaryMatrix};

use crate::config::{ExperimentConfig, ModelTag, Overrides};
use crate::error::{CliError, CliResult};
use crate::output::{write_atomic, write_text};

/// Closure tolerance applied when restricting a compiled network to its mode subset.
pub const CLOSURE_TOL: f64 = EXAMPLE_CLOSURE_TOL;

pub const UNITARY_FILE: &str = "unitary.json";
pub const DISTRIBUTION_FILE: &str = "distribution.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Globals {
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of events to draw.
    #[arg(long, global = true)]
    pub events: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub model: Option<ModelTag>,
    /// Gram matrix file for the partial model.
    #[arg(long, global = true)]
    pub gram: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Globals {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            events: self.events,
            model: self.model,
            gram: self.gram.clone(),
            out: self.out.clone(),
        }
    }

    pub fn load(&self) -> CliResult<ExperimentConfig> {
        let path = self
            .config
            .as_deref()
            .ok_or_else(|| CliError::config("this command needs --config or explicit input files"))?;
        ExperimentConfig::load(path, &self.overrides())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

pub fn trajectory_file(test: impl std::fmt::Display) -> String {
    format!("trajectory_{test}.csv")
}

pub(crate) fn compile_effective(cfg: &ExperimentConfig) -> CliResult<EffectiveUnitary> {
    let full = compile_network(&cfg.loop_config, &cfg.schedule)?;
    Ok(effective_unitary(&full, &cfg.subset, CLOSURE_TOL)?)
}

pub(crate) fn read_unitary(path: &Path) -> CliResult<UnitaryMatrix> {
    let m = MatrixFile::read(path)?;
    UnitaryMatrix::new(m).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

pub(crate) fn save_matrix(path: &Path, m: &ComplexMatrix) -> CliResult<()> {
    write_text(path, &MatrixFile::from_matrix(m)?.to_json())
}

pub(crate) fn save_distribution(path: &Path, d: &Distribution) -> CliResult<()> {
    write_atomic(path, |w| write_distribution(d, w))
}

pub(crate) fn save_events(path: &Path, log: &EventLog) -> CliResult<()> {
    write_atomic(path, |w| write_event_log(log, w))
}

pub(crate) fn save_trajectory(path: &Path, t: &CounterTrajectory) -> CliResult<()> {
    write_atomic(path, |w| t.write_csv(w))
}

pub(crate) fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
