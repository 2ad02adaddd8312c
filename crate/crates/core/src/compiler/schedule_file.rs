use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExampleCircuit, LoopConfig, PulseSchedule, RailMode, DEFAULT_BIN_NS};
use crate::error::{Error, Result};

/// JSON schedule document.
///
/// ```json
/// {
///   "slots": 3, "loops": 5, "bin_ns": 13.0,
///   "angles": [[0.1, 0.2, 0.3], ...],
///   "phases": [[0.0, 0.0, 0.0], ...],
///   "injection": [{"slot": 1, "rail": "H"}],
///   "mode_subset": [{"slot": 1, "rail": "H"}, {"slot": 1, "rail": "V"}]
/// }
/// ```
///
/// `phases` defaults to zeros and `mode_subset` to every rail mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub slots: usize,
    pub loops: usize,
    #[serde(default = "default_bin_ns")]
    pub bin_ns: f64,
    pub angles: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub injection: Vec<RailMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_subset: Option<Vec<RailMode>>,
}

fn default_bin_ns() -> f64 {
    DEFAULT_BIN_NS
}

impl ScheduleFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schedule serializes");
        s.push('\n');
        s
    }

    /// Validated loop layout, pulse table and mode subset.
    pub fn into_parts(self) -> Result<(LoopConfig, PulseSchedule, Vec<RailMode>)> {
        let config = LoopConfig {
            slots: self.slots,
            loops: self.loops,
            bin_ns: self.bin_ns,
            injection: self.injection,
        };
        config.validate().map_err(as_parse)?;
        let schedule = match self.phases {
            Some(phases) => PulseSchedule::new(self.angles, phases),
            None => PulseSchedule::from_angles(self.angles),
        }
        .map_err(as_parse)?;
        if schedule.loops() != config.loops || schedule.angles.iter().any(|r| r.len() != config.slots) {
            return Err(Error::parse(format!(
                "angles must be {} rows of {} values",
                config.loops, config.slots
            )));
        }
        let subset = self.mode_subset.unwrap_or_else(|| config.all_modes());
        for mode in &subset {
            mode.check(config.slots).map_err(as_parse)?;
        }
        Ok((config, schedule, subset))
    }

    pub fn from_circuit(c: &ExampleCircuit) -> Self {
        Self {
            slots: c.config.slots,
            loops: c.config.loops,
            bin_ns: c.config.bin_ns,
            angles: c.schedule.angles.clone(),
            phases: Some(c.schedule.phases.clone()),
            injection: c.config.injection.clone(),
            mode_subset: Some(c.subset.clone()),
        }
    }
}

fn as_parse(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Parse(msg),
        other => other,
    }
}
