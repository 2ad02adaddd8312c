//! Experiment configuration: a JSON document naming a schedule file plus the
//! sampling parameters, optionally overridden from the command line.
//!
//! ```json
//! {
//!   "schedule": "schedule.json",
//!   "input": "1-0-1-0-1-0",
//!   "model": "partial",
//!   "gram": [0.978, 0.970, 0.978],
//!   "seed": 7,
//!   "events": 2015,
//!   "out": "run"
//! }
//! ```
//!
//! Relative paths are resolved against the directory of the config file.
//! `gram` is either a path to a matrix file or the strict upper triangle of a
//! real Gram matrix. `input` defaults to the schedule's injected photons.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use timebin::compiler::{LoopConfig, PulseSchedule, RailMode, ScheduleFile};
use timebin::sampling::{GramMatrix, Model};
use timebin::validation::{AlternativeKind, DEFAULT_BAYES_THRESHOLD};
use timebin::ModeConfiguration;

use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_EVENTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Ind,
    Dist,
    Partial,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Ind => "ind",
            ModelTag::Dist => "dist",
            ModelTag::Partial => "partial",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GramSource {
    File(PathBuf),
    Overlaps(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub schedule: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<GramSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bayes_alternative: Option<AlternativeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bayes_threshold: Option<f64>,
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub events: Option<usize>,
    pub model: Option<ModelTag>,
    pub gram: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub loop_config: LoopConfig,
    pub schedule: PulseSchedule,
    pub subset: Vec<RailMode>,
    pub input: ModeConfiguration,
    pub model_tag: ModelTag,
    pub model: Model,
    pub seed: u64,
    pub events: usize,
    pub out: PathBuf,
    pub bayes_alternative: AlternativeKind,
    pub bayes_threshold: f64,
}

impl ExperimentConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let file: ExperimentFile =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::resolve(file, base, overrides)
    }

    pub fn resolve(file: ExperimentFile, base: &Path, overrides: &Overrides) -> CliResult<Self> {
        let (loop_config, schedule, subset) = ScheduleFile::read(base.join(&file.schedule))?.into_parts()?;
        let input = match &file.input {
            Some(text) => ModeConfiguration::from_str(text)?,
            None => loop_config.input_configuration(&subset)?,
        };
        if input.modes() != subset.len() {
            return Err(CliError::config(format!(
                "input has {} modes but the mode subset has {}",
                input.modes(),
                subset.len()
            )));
        }
        if !input.is_collision_free() {
            return Err(CliError::config("input occupations must be 0 or 1"));
        }
        let model_tag = overrides.model.or(file.model).unwrap_or(ModelTag::Ind);
        let gram = match (&overrides.gram, &file.gram) {
            (Some(p), _) => Some(GramSource::File(p.clone())),
            (None, Some(GramSource::File(p))) => Some(GramSource::File(base.join(p))),
            (None, g) => g.clone(),
        };
        let model = build_model(model_tag, gram.as_ref(), input.photons())?;
        let bayes_threshold = file.bayes_threshold.unwrap_or(DEFAULT_BAYES_THRESHOLD);
        if !(0.0..=1.0).contains(&bayes_threshold) {
            return Err(CliError::config("bayes_threshold must lie in [0, 1]"));
        }
        Ok(Self {
            loop_config,
            schedule,
            subset,
            input,
            model_tag,
            model,
            seed: overrides.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            events: overrides.events.or(file.events).unwrap_or(DEFAULT_EVENTS),
            out: overrides
                .out
                .clone()
                .or_else(|| file.out.map(|o| base.join(o)))
                .unwrap_or_else(|| PathBuf::from("out")),
            bayes_alternative: file.bayes_alternative.unwrap_or(AlternativeKind::Uniform),
            bayes_threshold,
        })
    }
}

pub fn build_model(tag: ModelTag, gram: Option<&GramSource>, photons: usize) -> CliResult<Model> {
    match (tag, gram) {
        (ModelTag::Ind, _) => Ok(Model::Indistinguishable),
        (ModelTag::Dist, _) => Ok(Model::Distinguishable),
        (ModelTag::Partial, None) => Err(CliError::config("model partial requires a Gram matrix (--gram)")),
        (ModelTag::Partial, Some(GramSource::File(p))) => {
            let g = GramMatrix::read(p)?;
            if g.photons() != photons {
                return Err(CliError::config(format!(
                    "Gram matrix covers {} photons, input has {photons}",
                    g.photons()
                )));
            }
            Ok(Model::Partial(g))
        }
        (ModelTag::Partial, Some(GramSource::Overlaps(v))) => Ok(Model::Partial(GramMatrix::from_upper(photons, v)?)),
    }
}
